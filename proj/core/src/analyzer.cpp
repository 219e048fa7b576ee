#include "planarmap/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <json.hpp>

#include "planarmap/errors.hpp"
#include "planarmap/flow.hpp"
#include "planarmap/hamiltonian.hpp"
#include "planarmap/parse.hpp"

namespace planarmap {

namespace {

constexpr double kAngleTol = 0.1; // radians; exit rays closer than this coincide

double ang_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
    return std::min(d, 2.0 * std::numbers::pi - d);
}

bool direction_matches(const AngleEstimate& est, const std::vector<InfinityDirection>& dirs) {
    if (!est.converged) return false;
    double half_pi = 0.5 * std::numbers::pi;
    bool vertical = std::abs(est.theta - half_pi) < 0.05 || std::abs(est.theta + half_pi) < 0.05;
    for (const auto& d : dirs) {
        if (d.vertical()) {
            if (vertical) return true;
        } else if (!vertical) {
            double s = d.slope->approx();
            if (std::abs(std::tan(est.theta) - s) <= 0.15 * (1.0 + std::abs(s))) return true;
        }
    }
    return false;
}

} // namespace

const char* endpoint_case_name(EndpointCase c) {
    switch (c) {
        case EndpointCase::A1: return "A1";
        case EndpointCase::A2: return "A2";
        case EndpointCase::A3: return "A3";
        case EndpointCase::A4: return "A4";
        case EndpointCase::A5: return "A5";
        case EndpointCase::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::InjectiveByTheorem1: return "InjectiveByTheorem1";
        case Verdict::JacobianVanishes: return "JacobianVanishes";
        case Verdict::NonconstantNonvanishing: return "NonconstantNonvanishing";
        case Verdict::MultiBranchObstruction: return "MultiBranchObstruction";
    }
    return "NonconstantNonvanishing";
}

int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::InjectiveByTheorem1: return 0;
        case Verdict::JacobianVanishes: return 2;
        case Verdict::NonconstantNonvanishing: return 3;
        case Verdict::MultiBranchObstruction: return 4;
    }
    return 3;
}

EndpointConfig classify_endpoints(const Polynomial& f, const Polynomial& g, const Window& window) {
    if (f.is_constant() || g.is_constant()) {
        throw ConstantInputError("classify_endpoints requires nonconstant polynomials");
    }
    EndpointConfig cfg;
    cfg.f_directions = infinity_singularities(f);
    cfg.g_directions = infinity_singularities(g);

    auto ladder = default_ladder(window);
    CompiledPoly cf(f), cg(g);
    Point c = window.center();
    double w = window.width(), h = window.height();
    // Deterministic fallbacks in case the level curve through a candidate is
    // degenerate (isolated point, closed oval, stalled trace).
    const Point candidates[] = {c,
                                {c.x + 0.11 * w, c.y + 0.07 * h},
                                {c.x - 0.13 * w, c.y + 0.17 * h},
                                {c.x + 0.23 * w, c.y - 0.19 * h},
                                {c.x - 0.05 * w, c.y - 0.29 * h}};

    for (Point p0 : candidates) {
        LevelCurveBranch bf = trace_branch_from(f, cf(p0.x, p0.y), p0, window);
        if (bf.closed_in_window || bf.stalled || bf.points.size() < 2) continue;
        LevelCurveBranch bg = trace_branch_from(g, cg(p0.x, p0.y), p0, window);
        if (bg.closed_in_window || bg.stalled || bg.points.size() < 2) continue;

        auto fa = ladder_exit_angles(f, bf, ladder);
        auto ga = ladder_exit_angles(g, bg, ladder);
        cfg.f_angles = fa;
        cfg.g_angles = ga;
        if (!(fa[0].converged && fa[1].converged && ga[0].converged && ga[1].converged)) continue;

        bool f_co = ang_dist(fa[0].theta, fa[1].theta) < kAngleTol;
        bool g_co = ang_dist(ga[0].theta, ga[1].theta) < kAngleTol;
        bool overlap = false;
        for (const auto& a : fa) {
            for (const auto& b : ga) {
                overlap = overlap || ang_dist(a.theta, b.theta) < kAngleTol;
            }
        }
        if (f_co && g_co) {
            cfg.kind = EndpointCase::A5;
        } else if (f_co) {
            cfg.kind = EndpointCase::A4;
        } else if (g_co) {
            cfg.kind = EndpointCase::A3;
        } else {
            cfg.kind = overlap ? EndpointCase::A2 : EndpointCase::A1;
        }

        cfg.consistent_with_infinity = true;
        for (const auto& a : fa) {
            cfg.consistent_with_infinity =
                cfg.consistent_with_infinity && direction_matches(a, cfg.f_directions);
        }
        for (const auto& b : ga) {
            cfg.consistent_with_infinity =
                cfg.consistent_with_infinity && direction_matches(b, cfg.g_directions);
        }
        return cfg;
    }
    cfg.kind = EndpointCase::Indeterminate;
    return cfg;
}

std::vector<CollisionPair> collision_search(const Polynomial& f, const Polynomial& g,
                                            const Window& window, int grid_n) {
    if (grid_n < 16) throw std::invalid_argument("collision_search: grid_n must be >= 16");
    CompiledPoly cf(f), cg(g);
    CompiledPoly cfx(partial_x(f)), cfy(partial_y(f));
    CompiledPoly cgx(partial_x(g)), cgy(partial_y(g));

    const int n = grid_n;
    const std::size_t nodes = static_cast<std::size_t>(n + 1) * (n + 1);
    std::vector<double> vx(nodes), vy(nodes), vf(nodes), vg(nodes);
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    double gmin = fmin, gmax = -fmin;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            std::size_t id = static_cast<std::size_t>(j) * (n + 1) + i;
            vx[id] = window.x_min + window.width() * i / n;
            vy[id] = window.y_min + window.height() * j / n;
            vf[id] = cf(vx[id], vy[id]);
            vg[id] = cg(vx[id], vy[id]);
            fmin = std::min(fmin, vf[id]);
            fmax = std::max(fmax, vf[id]);
            gmin = std::min(gmin, vg[id]);
            gmax = std::max(gmax, vg[id]);
        }
    }
    const double qf = std::max((fmax - fmin) / n, 1e-12);
    const double qg = std::max((gmax - gmin) / n, 1e-12);

    // Quantized F-value buckets; ordered map keeps everything deterministic.
    std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
    for (std::size_t id = 0; id < nodes; ++id) {
        buckets[{static_cast<long>(std::floor((vf[id] - fmin) / qf)),
                 static_cast<long>(std::floor((vg[id] - gmin) / qg))}]
            .push_back(id);
    }

    const double min_sep = 8.0 * std::hypot(window.width() / n, window.height() / n);
    struct Seed {
        double value_dist;
        std::size_t a, b;
    };
    std::vector<Seed> seeds;
    const std::pair<long, long> offsets[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (const auto& [key, ids] : buckets) {
        for (auto off : offsets) {
            std::pair<long, long> nb{key.first + off.first, key.second + off.second};
            auto it = buckets.find(nb);
            if (it == buckets.end()) continue;
            const auto& other = it->second;
            for (std::size_t a : ids) {
                for (std::size_t b : other) {
                    if (off == std::pair<long, long>{0, 0} && b <= a) continue;
                    double dx = vx[a] - vx[b], dy = vy[a] - vy[b];
                    if (std::hypot(dx, dy) < min_sep) continue;
                    seeds.push_back({std::hypot(vf[a] - vf[b], vg[a] - vg[b]), a, b});
                }
            }
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& s, const Seed& t) {
        if (s.value_dist != t.value_dist) return s.value_dist < t.value_dist;
        if (s.a != t.a) return s.a < t.a;
        return s.b < t.b;
    });
    if (seeds.size() > 400) seeds.resize(400);

    Window roomy = window.scaled(1.2);
    std::vector<CollisionPair> out;
    for (const Seed& seed : seeds) {
        Point p{vx[seed.a], vy[seed.a]};
        Point q0{vx[seed.b], vy[seed.b]};
        double rho = distance(p, q0);
        Point dir{(q0.x - p.x) / rho, (q0.y - p.y) / rho};

        // Gauss-Newton, minimum-norm step for the 2-equation / 3-unknown
        // system F(p) - F(p + rho*dir) = 0.
        for (int it = 0; it < 40; ++it) {
            Point q{p.x + rho * dir.x, p.y + rho * dir.y};
            double r1 = cf(p.x, p.y) - cf(q.x, q.y);
            double r2 = cg(p.x, p.y) - cg(q.x, q.y);
            if (std::hypot(r1, r2) < 1e-14 * (1.0 + std::abs(cf(p.x, p.y)))) break;
            double j11 = cfx(p.x, p.y) - cfx(q.x, q.y);
            double j12 = cfy(p.x, p.y) - cfy(q.x, q.y);
            double j13 = -(cfx(q.x, q.y) * dir.x + cfy(q.x, q.y) * dir.y);
            double j21 = cgx(p.x, p.y) - cgx(q.x, q.y);
            double j22 = cgy(p.x, p.y) - cgy(q.x, q.y);
            double j23 = -(cgx(q.x, q.y) * dir.x + cgy(q.x, q.y) * dir.y);
            double a = j11 * j11 + j12 * j12 + j13 * j13;
            double b = j11 * j21 + j12 * j22 + j13 * j23;
            double cc = j21 * j21 + j22 * j22 + j23 * j23;
            double det = a * cc - b * b;
            if (!(std::abs(det) > 1e-30)) break;
            double l1 = (r1 * cc - r2 * b) / det;
            double l2 = (r2 * a - r1 * b) / det;
            double dpx = -(j11 * l1 + j21 * l2);
            double dpy = -(j12 * l1 + j22 * l2);
            double drho = -(j13 * l1 + j23 * l2);
            double step = std::sqrt(dpx * dpx + dpy * dpy + drho * drho);
            double cap = 0.25 * window.diagonal();
            if (step > cap) {
                double s = cap / step;
                dpx *= s;
                dpy *= s;
                drho *= s;
            }
            p.x += dpx;
            p.y += dpy;
            rho += drho;
        }

        Point q{p.x + rho * dir.x, p.y + rho * dir.y};
        double residual = std::hypot(cf(p.x, p.y) - cf(q.x, q.y), cg(p.x, p.y) - cg(q.x, q.y));
        double sep = distance(p, q);
        if (!(residual <= 1e-10) || !(sep >= 1e-4)) continue;
        if (!roomy.contains(p) || !roomy.contains(q)) continue;
        CollisionPair pair{p, q, residual, sep};
        if (std::pair{q.x, q.y} < std::pair{p.x, p.y}) std::swap(pair.p, pair.q);
        bool dup = false;
        for (const auto& known : out) {
            if (distance(pair.p, known.p) < 1e-3 && distance(pair.q, known.q) < 1e-3) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(pair);
        if (out.size() >= 25) break;
    }
    std::sort(out.begin(), out.end(), [](const CollisionPair& u, const CollisionPair& v) {
        return std::tuple{u.p.x, u.p.y, u.q.x, u.q.y} < std::tuple{v.p.x, v.p.y, v.q.x, v.q.y};
    });
    return out;
}

namespace {

std::vector<LevelCount> sampled_level_counts(const Polynomial& f, const AnalyzeOptions& opts) {
    CompiledPoly cf(f);
    const Window& w = opts.window;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const int kProbe = 64;
    for (int j = 0; j <= kProbe; ++j) {
        for (int i = 0; i <= kProbe; ++i) {
            double v = cf(w.x_min + w.width() * i / kProbe, w.y_min + w.height() * j / kProbe);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::vector<LevelCount> counts;
    int levels = std::max(opts.sampled_levels, 1);
    for (int k = 0; k < levels; ++k) {
        double u = levels == 1 ? 0.5 * (lo + hi)
                               : lo + (hi - lo) * static_cast<double>(k) / (levels - 1);
        counts.push_back({u, count_components(f, u, w, opts.count_grid)});
    }
    return counts;
}

bool determinant_zero_in_window(const Polynomial& d, const Window& w) {
    CompiledPoly cd(d);
    const int n = 256;
    bool first_pos = cd(w.x_min, w.y_min) >= 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double v = cd(w.x_min + w.width() * i / n, w.y_min + w.height() * j / n);
            if (v == 0.0 || (v >= 0.0) != first_pos) return true;
        }
    }
    return false;
}

FlowCheckSummary run_flow_checks(const Polynomial& f, const Polynomial& g,
                                 const AnalyzeOptions& opts) {
    FlowCheckSummary s;
    try {
        s.bracket_identity = check_bracket_identity(f, g).holds;

        PlanarPolyField hf = hamiltonian_field(f);
        PlanarPolyField hg = hamiltonian_field(g);
        s.singularity_scan_empty = finite_singularity_scan(hf, opts.window, 48).empty() &&
                                   finite_singularity_scan(hg, opts.window, 48).empty();

        double comm = 0.0;
        bool comm_complete = true;
        for (double t : {-1.0, 0.0, 1.0}) {
            for (double sv : {-1.0, 0.0, 1.0}) {
                auto d = commutation_defect(f, g, {0.0, 0.0}, t, sv);
                if (d) {
                    comm = std::max(comm, *d);
                } else {
                    comm_complete = false;
                }
            }
        }
        if (comm_complete) s.commutation_max_defect = comm;

        const Point pts[] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 1.0}, {0.5, -0.5}};
        double tr = 0.0;
        bool tr_complete = true;
        for (Point p : pts) {
            auto rf = transport_residual_f(f, g, p, 0.7);
            auto rg = transport_residual_g(f, g, p, 0.7);
            if (rf && rg) {
                tr = std::max(tr, std::max(*rf, *rg));
            } else {
                tr_complete = false;
            }
        }
        if (tr_complete) s.transport_max_residual = tr;

        PlanarPolyField hf_back{-hf.p, -hf.q};
        PlanarPolyField hg_back{-hg.p, -hg.q};
        s.forward_complete = true;
        s.backward_complete = true;
        const Point seeds[] = {{0.0, 0.0}, {1.0, 0.0},  {0.0, 1.0},  {-1.0, 0.0},
                               {0.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.5, -0.5}};
        for (Point p : seeds) {
            s.forward_complete = s.forward_complete && !blow_up_time(hf, p).has_value() &&
                                 !blow_up_time(hg, p).has_value();
            s.backward_complete = s.backward_complete && !blow_up_time(hf_back, p).has_value() &&
                                  !blow_up_time(hg_back, p).has_value();
        }
        s.status = "ok";
    } catch (const std::exception& e) {
        s.status = std::string("error: ") + e.what();
    }
    return s;
}

} // namespace

MapAnalysisReport analyze(const Polynomial& f, const Polynomial& g, const AnalyzeOptions& opts) {
    if (f.is_constant() || g.is_constant()) {
        throw ConstantInputError("analyze requires nonconstant map components");
    }
    MapAnalysisReport rep;
    rep.f_text = format(f);
    rep.g_text = format(g);
    rep.determinant = jacobian_det(f, g);
    rep.jacobian_constant = constant_jacobian(f, g);

    try {
        rep.infinity_f = infinity_singularities(f);
    } catch (const std::exception& e) {
        rep.check_errors.push_back(std::string("infinity_f: ") + e.what());
    }
    try {
        rep.infinity_g = infinity_singularities(g);
    } catch (const std::exception& e) {
        rep.check_errors.push_back(std::string("infinity_g: ") + e.what());
    }
    try {
        rep.endpoint_case = classify_endpoints(f, g, opts.window);
    } catch (const std::exception& e) {
        rep.check_errors.push_back(std::string("classify_endpoints: ") + e.what());
    }
    try {
        rep.branch_counts_f = sampled_level_counts(f, opts);
        rep.branch_counts_g = sampled_level_counts(g, opts);
    } catch (const std::exception& e) {
        rep.check_errors.push_back(std::string("branch_counts: ") + e.what());
    }

    bool multi = false;
    for (const auto& lc : rep.branch_counts_f) multi = multi || lc.count >= 2;
    for (const auto& lc : rep.branch_counts_g) multi = multi || lc.count >= 2;

    if (rep.jacobian_constant && *rep.jacobian_constant != 0) {
        rep.verdict = Verdict::InjectiveByTheorem1;
    } else if (multi) {
        rep.verdict = Verdict::MultiBranchObstruction;
    } else if (rep.jacobian_constant && *rep.jacobian_constant == 0) {
        rep.verdict = Verdict::JacobianVanishes;
    } else if (determinant_zero_in_window(rep.determinant, opts.window)) {
        rep.verdict = Verdict::JacobianVanishes;
    } else {
        rep.verdict = Verdict::NonconstantNonvanishing;
    }

    if (opts.flow_checks && rep.verdict == Verdict::InjectiveByTheorem1) {
        rep.flow_checks = run_flow_checks(f, g, opts);
    }
    if (rep.verdict == Verdict::NonconstantNonvanishing) {
        try {
            rep.collisions = collision_search(f, g, opts.window, opts.collision_grid);
        } catch (const std::exception& e) {
            rep.check_errors.push_back(std::string("collision_search: ") + e.what());
        }
    }
    return rep;
}

namespace {

nlohmann::ordered_json directions_json(const std::vector<InfinityDirection>& dirs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : dirs) {
        nlohmann::ordered_json obj;
        obj["vertical"] = d.vertical();
        if (d.vertical()) {
            obj["slope"] = nullptr;
        } else {
            obj["slope"] = d.slope->approx();
            if (d.slope->is_exact()) {
                obj["slope_exact"] = to_string(d.slope->midpoint());
            } else {
                obj["slope_interval"] = {to_string(d.slope->lo), to_string(d.slope->hi)};
            }
        }
        obj["multiplicity"] = d.multiplicity;
        arr.push_back(obj);
    }
    return arr;
}

nlohmann::ordered_json angles_json(const std::array<AngleEstimate, 2>& angles) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& a : angles) {
        nlohmann::ordered_json obj;
        obj["converged"] = a.converged;
        if (a.converged) {
            obj["theta"] = a.theta;
        } else {
            obj["theta"] = nullptr;
        }
        arr.push_back(obj);
    }
    return arr;
}

nlohmann::ordered_json counts_json(const std::vector<LevelCount>& counts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& lc : counts) {
        arr.push_back(nlohmann::ordered_json{{"level", lc.level}, {"count", lc.count}});
    }
    return arr;
}

} // namespace

std::string report_to_json(const MapAnalysisReport& rep) {
    nlohmann::ordered_json j;
    j["f_text"] = rep.f_text;
    j["g_text"] = rep.g_text;
    if (rep.jacobian_constant) {
        j["jacobian"] = {{"kind", "constant"}, {"value", to_string(*rep.jacobian_constant)}};
    } else {
        j["jacobian"] = {{"kind", "nonconstant"}, {"determinant", format(rep.determinant)}};
    }
    j["infinity_f"] = directions_json(rep.infinity_f);
    j["infinity_g"] = directions_json(rep.infinity_g);
    j["endpoint_case"] = {{"case", endpoint_case_name(rep.endpoint_case.kind)},
                          {"f_exit_angles", angles_json(rep.endpoint_case.f_angles)},
                          {"g_exit_angles", angles_json(rep.endpoint_case.g_angles)},
                          {"consistent_with_infinity", rep.endpoint_case.consistent_with_infinity}};
    j["branch_counts"] = {{"f", counts_json(rep.branch_counts_f)},
                          {"g", counts_json(rep.branch_counts_g)}};
    nlohmann::ordered_json fc;
    fc["status"] = rep.flow_checks.status;
    if (rep.flow_checks.status == "ok") {
        fc["bracket_identity"] = rep.flow_checks.bracket_identity;
        fc["singularity_scan_empty"] = rep.flow_checks.singularity_scan_empty;
        fc["commutation_max_defect"] = rep.flow_checks.commutation_max_defect
                                           ? nlohmann::ordered_json(*rep.flow_checks.commutation_max_defect)
                                           : nlohmann::ordered_json(nullptr);
        fc["transport_max_residual"] = rep.flow_checks.transport_max_residual
                                           ? nlohmann::ordered_json(*rep.flow_checks.transport_max_residual)
                                           : nlohmann::ordered_json(nullptr);
        fc["forward_complete"] = rep.flow_checks.forward_complete;
        fc["backward_complete"] = rep.flow_checks.backward_complete;
    }
    j["flow_checks"] = fc;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& cp : rep.collisions) {
        cols.push_back(nlohmann::ordered_json{{"p", {cp.p.x, cp.p.y}},
                                              {"q", {cp.q.x, cp.q.y}},
                                              {"residual", cp.residual},
                                              {"separation", cp.separation}});
    }
    j["collisions"] = cols;
    j["verdict"] = verdict_name(rep.verdict);
    if (!rep.check_errors.empty()) j["check_errors"] = rep.check_errors;
    return j.dump(2) + "\n";
}

} // namespace planarmap
