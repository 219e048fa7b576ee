#include "planarmap/level_tracer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace planarmap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

Point scaled(Point a, double s) { return {a.x * s, a.y * s}; }

Point plus(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }

// Everything one branch trace needs; compiled once per call.
struct Tracer {
    CompiledPoly f, fx, fy;
    double u;
    Window win;
    TraceOptions opts;
    // Chord-sag budget: polyline gap to the true curve stays well under the
    // dedupe merge radius used by trace_level.
    double chord_gap;

    Tracer(const Polynomial& poly, double level, const Window& window, const TraceOptions& o)
        : f(poly),
          fx(partial_x(poly)),
          fy(partial_y(poly)),
          u(level),
          win(window),
          opts(o),
          chord_gap(std::max(1e-5, 2.5e-5 * window.diagonal())) {}

    double residual(Point p) const { return f(p.x, p.y) - u; }

    // Roundoff-aware Newton target and acceptance bands. The target sits at
    // evaluation-noise level so the loop quits as soon as it bottoms out.
    double tol_target(Point p) const {
        return std::max(1e-12 * (1.0 + std::abs(u)), 0.5 * kEps * f.magnitude(p.x, p.y));
    }
    double tol_accept(Point p) const {
        return std::max(1e-10 * (1.0 + std::abs(u)), 16.0 * kEps * f.magnitude(p.x, p.y));
    }

    // Newton along the gradient. False when the gradient collapses or the
    // iteration wanders more than half a window diagonal.
    bool project(Point& p) const {
        double travel_cap = 0.5 * win.diagonal() + 1.0;
        double travelled = 0.0;
        for (int it = 0; it < 15; ++it) {
            double h = residual(p);
            if (std::abs(h) <= tol_target(p)) return true;
            double gx = fx(p.x, p.y);
            double gy = fy(p.x, p.y);
            double g2 = gx * gx + gy * gy;
            if (!(g2 > 1e-30)) return false;
            Point delta{-h * gx / g2, -h * gy / g2};
            travelled += norm(delta);
            if (travelled > travel_cap) return false;
            p = plus(p, delta);
        }
        return std::abs(residual(p)) <= tol_accept(p);
    }

    // Unit tangent of the level curve: the Hamiltonian direction (-f_y, f_x).
    std::optional<Point> tangent(Point p) const {
        Point t{-fy(p.x, p.y), fx(p.x, p.y)};
        double n = norm(t);
        if (!(n > 1e-14)) return std::nullopt;
        return scaled(t, 1.0 / n);
    }

    double max_turn(double step) const {
        return std::min(0.3, 8.0 * chord_gap / std::max(step, 1e-12));
    }
};

// First point of the segment p -> q (p inside, q outside) on the window
// boundary.
Point clip_exit(Point p, Point q, const Window& w) {
    double t = 1.0;
    auto cut = [&](double num, double den) {
        if (den > 0.0) t = std::min(t, num / den);
    };
    cut(w.x_max - p.x, q.x - p.x);
    cut(p.x - w.x_min, p.x - q.x);
    cut(w.y_max - p.y, q.y - p.y);
    cut(p.y - w.y_min, p.y - q.y);
    t = std::clamp(t, 0.0, 1.0);
    return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

ExitSlope ray_slope(Point p) {
    ExitSlope s;
    if (std::abs(p.y) > 1e12 * std::abs(p.x)) {
        s.vertical = true;
    } else {
        s.slope = p.y / p.x;
    }
    return s;
}

struct DirectionTrace {
    std::vector<Point> points; // excluding the seed
    std::optional<ExitSlope> exit;
    bool closed = false;
    bool stalled = false;
};

// One direction of continuation: dir = +1 follows the Hamiltonian tangent,
// dir = -1 runs against it. check_closure is set for the first direction
// only; a closed branch never needs the second pass.
DirectionTrace trace_direction(const Tracer& tr, Point seed, Point seed_tangent, double dir,
                               bool check_closure) {
    DirectionTrace out;
    Point p = seed;
    Point t_prev = scaled(seed_tangent, dir);
    double step = tr.opts.initial_step;
    double arc = 0.0;
    const double arc_cap = 100.0 * 2.0 * (tr.win.width() + tr.win.height());
    const Point t_first = t_prev;

    while (true) {
        bool accepted = false;
        Point cand{}, t_new{};
        while (!accepted) {
            // Midpoint predictor, then Newton back onto the curve.
            auto t1 = tr.tangent(p);
            if (!t1) {
                out.stalled = true;
                return out;
            }
            if (dot(*t1, t_prev) < 0.0) *t1 = scaled(*t1, -1.0);
            Point mid = plus(p, scaled(*t1, 0.5 * step));
            auto t2 = tr.tangent(mid);
            Point dir_vec = t2 ? (dot(*t2, *t1) >= 0.0 ? *t2 : scaled(*t2, -1.0)) : *t1;
            cand = plus(p, scaled(dir_vec, step));
            bool ok = tr.project(cand);
            if (ok) {
                auto tn = tr.tangent(cand);
                if (tn) {
                    t_new = dot(*tn, t_prev) >= 0.0 ? *tn : scaled(*tn, -1.0);
                    double turn = std::acos(std::clamp(dot(t_new, t_prev), -1.0, 1.0));
                    if (turn <= tr.max_turn(step) || step <= tr.opts.min_step * 1.0001) {
                        if (turn < 1.4) {
                            accepted = true;
                        } else {
                            ok = false; // near-reversal even at minimum step
                        }
                    } else {
                        ok = false;
                    }
                } else {
                    ok = false;
                }
            }
            if (!accepted) {
                if (step <= tr.opts.min_step * 1.0001 && !ok) {
                    out.stalled = true;
                    return out;
                }
                step = std::max(step * 0.5, tr.opts.min_step);
            }
        }

        arc += distance(p, cand);
        if (!tr.win.contains(cand)) {
            Point exit = clip_exit(p, cand, tr.win);
            out.points.push_back(exit);
            out.exit = ray_slope(exit);
            return out;
        }
        out.points.push_back(cand);

        if (check_closure && out.points.size() >= 8 && arc > 6.0 * step &&
            distance(cand, seed) < std::max(step, tr.opts.initial_step) &&
            dot(t_new, t_first) > 0.7) {
            out.closed = true;
            out.points.push_back(seed);
            return out;
        }
        if (arc > arc_cap) {
            out.stalled = true;
            return out;
        }

        double turn = std::acos(std::clamp(dot(t_new, t_prev), -1.0, 1.0));
        if (turn < 0.5 * tr.max_turn(step)) step = std::min(step * 1.4, tr.opts.max_step);
        p = cand;
        t_prev = t_new;
    }
}

double segment_distance(Point p, Point a, Point b) {
    Point ab{b.x - a.x, b.y - a.y};
    double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? std::clamp(dot({p.x - a.x, p.y - a.y}, ab) / len2, 0.0, 1.0) : 0.0;
    return distance(p, {a.x + t * ab.x, a.y + t * ab.y});
}

double polyline_distance(Point p, const std::vector<Point>& pts) {
    double best = std::numeric_limits<double>::infinity();
    if (pts.size() == 1) return distance(p, pts[0]);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        best = std::min(best, segment_distance(p, pts[i], pts[i + 1]));
    }
    return best;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    }
};

} // namespace

LevelCurveBranch trace_branch_from(const Polynomial& f, double u, Point seed, const Window& window,
                                   const TraceOptions& opts) {
    Tracer tr(f, u, window, opts);
    LevelCurveBranch branch;
    branch.level = u;

    if (!tr.project(seed)) {
        branch.stalled = true;
        return branch;
    }
    auto t0 = tr.tangent(seed);
    if (!t0) {
        branch.points.push_back(seed);
        branch.stalled = true;
        return branch;
    }

    DirectionTrace fwd = trace_direction(tr, seed, *t0, +1.0, true);
    if (fwd.closed) {
        branch.points.push_back(seed);
        branch.points.insert(branch.points.end(), fwd.points.begin(), fwd.points.end());
        branch.closed_in_window = true;
        return branch;
    }
    DirectionTrace bwd = trace_direction(tr, seed, *t0, -1.0, false);

    branch.points.assign(bwd.points.rbegin(), bwd.points.rend());
    branch.points.push_back(seed);
    branch.points.insert(branch.points.end(), fwd.points.begin(), fwd.points.end());
    branch.exit_begin = bwd.exit;
    branch.exit_end = fwd.exit;
    branch.stalled = fwd.stalled || bwd.stalled;
    return branch;
}

std::vector<LevelCurveBranch> trace_level(const Polynomial& f, double u, const Window& window,
                                          const TraceOptions& opts) {
    CompiledPoly cf(f);
    auto h = [&](double x, double y) { return cf(x, y) - u; };
    auto sign_pos = [](double v) { return v >= 0.0; }; // zero counts positive

    std::vector<Point> seeds;

    // Boundary crossings: 256 intervals per edge, bisected to the curve.
    const int kEdgeSamples = 256;
    auto scan_edge = [&](Point a, Point b) {
        double prev = h(a.x, a.y);
        for (int i = 1; i <= kEdgeSamples; ++i) {
            double s = static_cast<double>(i) / kEdgeSamples;
            Point q{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
            double cur = h(q.x, q.y);
            if (sign_pos(prev) != sign_pos(cur)) {
                double lo = static_cast<double>(i - 1) / kEdgeSamples;
                double hi = s;
                bool lo_pos = sign_pos(prev);
                for (int it = 0; it < 50; ++it) {
                    double mid = 0.5 * (lo + hi);
                    Point m{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
                    if (sign_pos(h(m.x, m.y)) == lo_pos) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                double mid = 0.5 * (lo + hi);
                seeds.push_back({a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)});
            }
            prev = cur;
        }
    };
    scan_edge({window.x_min, window.y_min}, {window.x_max, window.y_min});
    scan_edge({window.x_max, window.y_min}, {window.x_max, window.y_max});
    scan_edge({window.x_max, window.y_max}, {window.x_min, window.y_max});
    scan_edge({window.x_min, window.y_max}, {window.x_min, window.y_min});

    // Interior grid rows: catches closed components that never touch the
    // boundary. The boundary rows themselves are covered by the edge scan;
    // their cell-midpoint seeds would project to curve points just outside
    // the window and show up as spurious micro-branches.
    const int kGrid = 64;
    for (int r = 1; r < kGrid; ++r) {
        double y = window.y_min + window.height() * r / kGrid;
        double prev = h(window.x_min, y);
        for (int cidx = 1; cidx <= kGrid; ++cidx) {
            double x = window.x_min + window.width() * cidx / kGrid;
            double cur = h(x, y);
            if (sign_pos(prev) != sign_pos(cur)) {
                seeds.push_back({x - 0.5 * window.width() / kGrid, y});
            }
            prev = cur;
        }
    }

    const double merge_radius = std::max(1e-6, 1e-4 * window.diagonal());
    // Boundary-edge seeds sit on the frame up to roundoff; anything projected
    // materially past the frame belongs to a curve piece outside the window.
    const double edge_slack = 1e-9 * (1.0 + window.diagonal());
    const Window roomy{window.x_min - edge_slack, window.x_max + edge_slack,
                       window.y_min - edge_slack, window.y_max + edge_slack};
    std::vector<LevelCurveBranch> branches;
    Tracer tr(f, u, window, opts);
    for (Point seed : seeds) {
        Point projected = seed;
        if (!tr.project(projected)) continue;
        if (!roomy.contains(projected)) continue;
        bool known = false;
        for (const auto& b : branches) {
            if (polyline_distance(projected, b.points) < merge_radius) {
                known = true;
                break;
            }
        }
        if (known) continue;
        LevelCurveBranch b = trace_branch_from(f, u, projected, window, opts);
        if (b.points.size() < 2) continue;
        branches.push_back(std::move(b));
    }

    std::sort(branches.begin(), branches.end(), [](const LevelCurveBranch& a, const LevelCurveBranch& b) {
        if (a.points.front().x != b.points.front().x) return a.points.front().x < b.points.front().x;
        return a.points.front().y < b.points.front().y;
    });
    return branches;
}

int count_components(const Polynomial& f, double u, const Window& window, int grid_n) {
    CompiledPoly cf(f);
    const int n = std::max(grid_n, 1);
    // Node signs, (n+1) x (n+1); true = nonnegative.
    std::vector<char> pos(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
        double y = window.y_min + window.height() * j / n;
        for (int i = 0; i <= n; ++i) {
            double x = window.x_min + window.width() * i / n;
            pos[static_cast<std::size_t>(j) * (n + 1) + i] = cf(x, y) - u >= 0.0;
        }
    }
    auto node = [&](int i, int j) { return pos[static_cast<std::size_t>(j) * (n + 1) + i]; };
    auto cell_mixed = [&](int i, int j) {
        char a = node(i, j), b = node(i + 1, j), c = node(i, j + 1), d = node(i + 1, j + 1);
        return !(a == b && b == c && c == d);
    };
    auto cell_id = [&](int i, int j) { return j * n + i; };

    UnionFind uf(n * n);
    std::vector<char> mixed(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            mixed[static_cast<std::size_t>(cell_id(i, j))] = cell_mixed(i, j);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!mixed[static_cast<std::size_t>(cell_id(i, j))]) continue;
            // Right neighbor: shared edge (i+1, j)-(i+1, j+1).
            if (i + 1 < n && mixed[static_cast<std::size_t>(cell_id(i + 1, j))] &&
                node(i + 1, j) != node(i + 1, j + 1)) {
                uf.unite(cell_id(i, j), cell_id(i + 1, j));
            }
            // Top neighbor: shared edge (i, j+1)-(i+1, j+1).
            if (j + 1 < n && mixed[static_cast<std::size_t>(cell_id(i, j + 1))] &&
                node(i, j + 1) != node(i + 1, j + 1)) {
                uf.unite(cell_id(i, j), cell_id(i, j + 1));
            }
        }
    }
    int count = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int id = cell_id(i, j);
            if (mixed[static_cast<std::size_t>(id)] && uf.find(id) == id) ++count;
        }
    }
    return count;
}

std::vector<Window> default_ladder(const Window& base) {
    return {base, base.scaled(2.0), base.scaled(4.0), base.scaled(8.0)};
}

namespace {

// Last inside-to-outside crossing of `w` along the polyline walk from the
// seed index toward one end; nullopt when the walk never leaves w.
std::optional<Point> last_crossing(const std::vector<Point>& pts, std::size_t seed_idx, int dir,
                                   const Window& w) {
    std::optional<Point> hit;
    std::size_t i = seed_idx;
    while (true) {
        std::size_t j = static_cast<std::size_t>(static_cast<long>(i) + dir);
        if (dir < 0 && i == 0) break;
        if (dir > 0 && j >= pts.size()) break;
        if (w.contains(pts[i]) && !w.contains(pts[j])) hit = clip_exit(pts[i], pts[j], w);
        i = j;
        if ((dir < 0 && i == 0) || (dir > 0 && i + 1 >= pts.size())) break;
    }
    return hit;
}

AngleEstimate extrapolate_angles(std::vector<double> theta) {
    AngleEstimate est;
    if (theta.size() < 3) return est;
    // Unwrap onto a continuous strip.
    for (std::size_t k = 1; k < theta.size(); ++k) {
        while (theta[k] - theta[k - 1] > std::numbers::pi) theta[k] -= 2.0 * std::numbers::pi;
        while (theta[k] - theta[k - 1] < -std::numbers::pi) theta[k] += 2.0 * std::numbers::pi;
    }
    std::vector<double> d;
    for (std::size_t k = 1; k < theta.size(); ++k) d.push_back(theta[k] - theta[k - 1]);
    for (std::size_t k = 1; k < d.size(); ++k) {
        bool shrinking = std::abs(d[k]) <= 1.1 * std::abs(d[k - 1]);
        bool both_tiny = std::abs(d[k]) < 1e-4 && std::abs(d[k - 1]) < 1e-4;
        if (!shrinking && !both_tiny) return est;
    }
    double result = theta.back();
    double d_last = d.back();
    double d_prev = d[d.size() - 2];
    if (std::abs(d_prev) > 1e-12) {
        double r = d_last / d_prev;
        if (r > 0.0 && r < 0.9) result += d_last * r / (1.0 - r);
    }
    // Fold back to (-pi, pi].
    while (result > std::numbers::pi) result -= 2.0 * std::numbers::pi;
    while (result <= -std::numbers::pi) result += 2.0 * std::numbers::pi;
    est.converged = true;
    est.theta = result;
    return est;
}

} // namespace

std::array<AngleEstimate, 2> ladder_exit_angles(const Polynomial& f, const LevelCurveBranch& branch,
                                                const std::vector<Window>& ladder) {
    std::array<AngleEstimate, 2> out{};
    if (ladder.empty() || branch.closed_in_window || branch.points.size() < 2) return out;

    // Re-seed from the point deepest inside the base window, then re-trace in
    // the top window so every rung sees the same branch.
    const Window& base = ladder.front();
    auto depth = [&](Point p) {
        return std::min(std::min(p.x - base.x_min, base.x_max - p.x),
                        std::min(p.y - base.y_min, base.y_max - p.y));
    };
    Point seed = branch.points.front();
    for (const Point& p : branch.points) {
        if (depth(p) > depth(seed)) seed = p;
    }

    // Trace past the top rung: last_crossing needs a strict inside-to-outside
    // step, and a trace clipped exactly on ladder.back()'s frame would make
    // the top rung's crossing a roundoff coin flip.
    LevelCurveBranch wide = trace_branch_from(f, branch.level, seed, ladder.back().scaled(1.05));
    if (wide.closed_in_window || wide.points.size() < 2) return out;

    std::size_t seed_idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < wide.points.size(); ++i) {
        double dst = distance(wide.points[i], seed);
        if (dst < best) {
            best = dst;
            seed_idx = i;
        }
    }

    // Match wide-trace ends to the original branch ends so callers can keep
    // talking about points.front() / points.back().
    bool flipped = false;
    if (!branch.closed_in_window) {
        double direct = distance(wide.points.front(), branch.points.front()) +
                        distance(wide.points.back(), branch.points.back());
        double crossed = distance(wide.points.front(), branch.points.back()) +
                         distance(wide.points.back(), branch.points.front());
        flipped = crossed < direct;
    }

    for (int side = 0; side < 2; ++side) {
        int dir = side == 0 ? -1 : +1;
        std::vector<double> theta;
        bool complete = true;
        for (const Window& w : ladder) {
            auto hit = last_crossing(wide.points, seed_idx, dir, w);
            if (!hit) {
                complete = false;
                break;
            }
            theta.push_back(std::atan2(hit->y, hit->x));
        }
        AngleEstimate est = complete ? extrapolate_angles(std::move(theta)) : AngleEstimate{};
        out[(side == 0) != flipped ? 0 : 1] = est;
    }
    return out;
}

std::vector<SlopeEstimate> asymptotic_slope(const Polynomial& f, const LevelCurveBranch& branch,
                                            const std::vector<Window>& ladder) {
    auto angles = ladder_exit_angles(f, branch, ladder);
    std::vector<SlopeEstimate> out;
    for (const auto& est : angles) {
        SlopeEstimate s;
        if (est.converged) {
            double half_pi = 0.5 * std::numbers::pi;
            if (std::abs(est.theta - half_pi) < 0.05 || std::abs(est.theta + half_pi) < 0.05) {
                s.kind = SlopeEstimate::Kind::Vertical;
            } else {
                s.kind = SlopeEstimate::Kind::Finite;
                s.slope = std::tan(est.theta);
            }
        }
        out.push_back(s);
    }
    return out;
}

void write_branches_csv(std::ostream& os, const std::vector<LevelCurveBranch>& branches) {
    os << "level,branch,x,y\n";
    char buf[128];
    for (std::size_t b = 0; b < branches.size(); ++b) {
        for (const Point& p : branches[b].points) {
            std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g,%.17g\n", branches[b].level, b, p.x,
                          p.y);
            os << buf;
        }
    }
}

} // namespace planarmap
