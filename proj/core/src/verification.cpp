#include "planarmap/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <utility>

#include "planarmap/analyzer.hpp"
#include "planarmap/compactify.hpp"
#include "planarmap/flow.hpp"
#include "planarmap/hamiltonian.hpp"
#include "planarmap/level_tracer.hpp"
#include "planarmap/parse.hpp"
#include "planarmap/polynomial.hpp"

namespace planarmap {

namespace {

struct RefMap {
    Polynomial f, g;
};

// Reference maps with constant jacobian determinant (-2, 1, 1).
RefMap map_quartic() { return {parse("y-(2*x-y)^4"), parse("2*x-y")}; }
RefMap map_cubic() { return {parse("y-x^3"), parse("y-x-x^3")}; }
RefMap map_quadratic() { return {parse("y-x^2"), parse("y-x-x^2")}; }

// Hamiltonian field (1+x^2, -2xy): flow known in closed form (tan/cos^2),
// forward-incomplete from every start point.
Polynomial tangent_oracle_poly() { return parse("-1*(1+x^2)*y"); }

// First component of the classic non-injective counterexample family; its
// level set at 1 factors as x*(1-x*y) = 0 (three branches).
Polynomial hyperbolic_poly() { return parse("1+x-x^2*y"); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Polynomial random_poly(std::mt19937& rng, int max_deg, bool require_nonconstant) {
    std::uniform_int_distribution<int> nterms(1, 6);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> deg(0, max_deg);
    for (;;) {
        Polynomial p = Polynomial::zero();
        int k = nterms(rng);
        for (int t = 0; t < k; ++t) {
            int total = deg(rng);
            std::uniform_int_distribution<int> split(0, total);
            int ex = split(rng);
            int c = coef(rng);
            if (c == 0) continue;
            p = p + Polynomial::term({ex, total - ex}, Rational(c));
        }
        if (!require_nonconstant || !p.is_constant()) return p;
    }
}

using Body = std::function<std::pair<bool, std::string>()>;

CriterionResult run_timed(int index, const char* name, double limit_seconds, const Body& body) {
    CriterionResult r;
    r.index = index;
    r.name = name;
    auto start = std::chrono::steady_clock::now();
    try {
        auto [ok, detail] = body();
        r.passed = ok;
        r.detail = detail;
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds >= limit_seconds) {
        r.passed = false;
        r.detail += " [over time budget " + fmt(limit_seconds) + "s]";
    }
    return r;
}

std::pair<bool, std::string> criterion_determinants() {
    auto m1 = map_quartic(), m2 = map_cubic(), m3 = map_quadratic();
    Polynomial x = Polynomial::variable_x();
    bool ok = jacobian_det(m1.f, m1.g) == Polynomial::constant(-2) &&
              jacobian_det(m2.f, m2.g) == Polynomial::constant(1) &&
              jacobian_det(m3.f, m3.g) == Polynomial::constant(1) &&
              jacobian_det(tangent_oracle_poly(), x) == Polynomial::constant(1) + x * x;
    return {ok, ok ? "all four determinants exact" : "determinant mismatch"};
}

std::pair<bool, std::string> criterion_bracket_identity() {
    for (const RefMap& m : {map_quartic(), map_cubic(), map_quadratic(),
                            RefMap{tangent_oracle_poly(), Polynomial::variable_x()}}) {
        if (!check_bracket_identity(m.f, m.g).holds) return {false, "reference map failed"};
    }
    std::mt19937 rng(1002);
    for (int i = 0; i < 200; ++i) {
        Polynomial f = random_poly(rng, 5, false);
        Polynomial g = random_poly(rng, 5, false);
        if (!check_bracket_identity(f, g).holds) {
            return {false, "random pair " + std::to_string(i) + " failed"};
        }
    }
    return {true, "4 reference maps + 200 random pairs, exact"};
}

std::pair<bool, std::string> criterion_infinity_directions() {
    auto d1 = infinity_singularities(map_quartic().f);
    bool ok = d1.size() == 1 && !d1[0].vertical() && d1[0].multiplicity == 4 &&
              d1[0].slope->is_exact() && d1[0].slope->midpoint() == 2;
    auto d2 = infinity_singularities(map_cubic().f);
    ok = ok && d2.size() == 1 && d2[0].vertical() && d2[0].multiplicity == 3;
    auto d3 = infinity_singularities(map_quadratic().f);
    ok = ok && d3.size() == 1 && d3[0].vertical() && d3[0].multiplicity == 2;
    if (!ok) return {false, "reference direction mismatch"};

    std::mt19937 rng(1003);
    for (int i = 0; i < 200; ++i) {
        Polynomial f = random_poly(rng, 5, true);
        if (infinity_filled_check(hamiltonian_field(f))) {
            return {false, "hamiltonian field " + std::to_string(i) + " reported filled equator"};
        }
    }
    return {true, "slope 2/vertical/vertical with multiplicities 4/3/2; 200 random fields clean"};
}

std::pair<bool, std::string> criterion_flow_oracle() {
    PlanarPolyField field = hamiltonian_field(tangent_oracle_poly()); // (1+x^2, -2xy)
    double max_err = 0.0, max_blow_err = 0.0;
    for (double c1 : {-2.0, 0.0, 1.0}) {
        for (double c2 : {1.0, -3.0}) {
            double a = std::atan(c1);
            double t_lo = -std::numbers::pi / 2 - a, t_hi = std::numbers::pi / 2 - a;
            double margin = 0.05 * (t_hi - t_lo);
            for (int k = 0; k <= 40; ++k) {
                double t = (t_lo + margin) + (t_hi - t_lo - 2 * margin) * k / 40.0;
                FlowTrajectory traj = integrate(field, {c1, c2}, t);
                if (traj.terminal != Terminal::ReachedTime) return {false, "oracle run truncated"};
                double xe = std::tan(t + a);
                double ye = (1 + c1 * c1) * c2 * std::pow(std::cos(t + a), 2);
                max_err = std::max(max_err, distance(traj.back().p, {xe, ye}));
            }
            auto tb = blow_up_time(field, {c1, c2});
            if (!tb) return {false, "blow-up not detected"};
            max_blow_err = std::max(max_blow_err, std::abs(*tb - t_hi));
        }
    }
    bool ok = max_err <= 1e-6 && max_blow_err <= 1e-3;
    return {ok, "max flow error " + fmt(max_err) + ", max blow-up error " + fmt(max_blow_err)};
}

std::pair<bool, std::string> criterion_commutation_transport() {
    double max_defect = 0.0;
    for (const RefMap& m : {map_quartic(), map_cubic(), map_quadratic()}) {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                double t = -1.0 + 0.5 * i, s = -1.0 + 0.5 * j;
                auto d = commutation_defect(m.f, m.g, {0.3, -0.2}, t, s);
                if (!d) return {false, "commutation leg truncated"};
                max_defect = std::max(max_defect, *d);
            }
        }
    }
    if (max_defect > 1e-6) return {false, "commutation defect " + fmt(max_defect)};

    std::mt19937 rng(1005);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    double max_resid = 0.0;
    for (const RefMap& m : {map_quartic(), map_cubic(), map_quadratic()}) {
        for (int i = 0; i < 10; ++i) {
            Point p{pt(rng), pt(rng)};
            double s = pt(rng), t = pt(rng);
            auto rf = transport_residual_f(m.f, m.g, p, s);
            auto rg = transport_residual_g(m.f, m.g, p, t);
            if (!rf || !rg) return {false, "transport leg truncated"};
            max_resid = std::max(max_resid, std::max(*rf, *rg));
        }
    }
    if (max_resid > 1e-6) return {false, "transport residual " + fmt(max_resid)};

    auto bad = commutation_defect(hyperbolic_poly(), Polynomial::variable_y(), {1.0, 1.0}, 0.5, 0.5);
    if (bad && *bad <= 1e-3) return {false, "non-commuting pair looked commuting"};
    return {true, "defect " + fmt(max_defect) + ", transport " + fmt(max_resid) +
                      ", counterexample defect " + (bad ? fmt(*bad) : std::string("inf"))};
}

std::pair<bool, std::string> criterion_branch_counting() {
    Window w{-10, 10, -10, 10};
    int c = count_components(hyperbolic_poly(), 1.0, w, 512);
    auto traced = trace_level(hyperbolic_poly(), 1.0, w);
    if (c != 3 || traced.size() != 3) {
        return {false, "three-branch level: marching " + std::to_string(c) + ", traced " +
                           std::to_string(traced.size())};
    }
    std::mt19937 rng(1006);
    std::uniform_real_distribution<double> lv(-5.0, 5.0);
    for (const RefMap& m : {map_quartic(), map_cubic(), map_quadratic()}) {
        for (const Polynomial& p : {m.f, m.g}) {
            for (int i = 0; i < 10; ++i) {
                double u = lv(rng);
                int cc = count_components(p, u, w, 512);
                auto tr = trace_level(p, u, w);
                if (cc != 1 || tr.size() != 1) {
                    return {false, "level " + fmt(u) + ": marching " + std::to_string(cc) +
                                       ", traced " + std::to_string(tr.size())};
                }
            }
        }
    }
    return {true, "three-branch level = 3 both ways; 60 single-branch levels agree"};
}

std::pair<bool, std::string> criterion_completeness() {
    std::mt19937 rng(1007);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    for (const RefMap& m : {map_quartic(), map_cubic(), map_quadratic()}) {
        for (const Polynomial& p : {m.f, m.g}) {
            PlanarPolyField field = hamiltonian_field(p);
            for (int i = 0; i < 20; ++i) {
                Point p0{pt(rng), pt(rng)};
                if (blow_up_time(field, p0)) {
                    return {false, "complete field flagged as blowing up"};
                }
            }
        }
    }
    PlanarPolyField tf = hamiltonian_field(tangent_oracle_poly());
    for (double c1 : {-2.0, 0.0, 1.0}) {
        for (double c2 : {1.0, -3.0}) {
            auto tb = blow_up_time(tf, {c1, c2});
            if (!tb || !std::isfinite(*tb)) return {false, "incomplete field not flagged"};
        }
    }
    return {true, "120 complete starts clean, 6 incomplete starts flagged"};
}

std::pair<bool, std::string> criterion_endpoint_taxonomy() {
    Window w{-10, 10, -10, 10};
    Polynomial x = Polynomial::variable_x(), y = Polynomial::variable_y();
    struct Case {
        Polynomial f, g;
        EndpointCase expect;
    };
    const Case cases[] = {
        {x, y, EndpointCase::A1},
        {x, y - x * x * x, EndpointCase::A2},
        {x, y - x * x, EndpointCase::A3},
        {y - x * x, y + x - x * x, EndpointCase::A5},
    };
    std::string got;
    bool ok = true;
    for (const Case& c : cases) {
        EndpointConfig cfg = classify_endpoints(c.f, c.g, w);
        if (!got.empty()) got += ", ";
        got += endpoint_case_name(cfg.kind);
        ok = ok && cfg.kind == c.expect;
    }
    return {ok, "observed " + got + " (want A1, A2, A3, A5)"};
}

std::pair<bool, std::string> criterion_property_suites() {
    std::mt19937 rng(1009);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int i = 0; i < 1000; ++i) {
        Polynomial p = random_poly(rng, 4, false);
        Polynomial q = random_poly(rng, 4, false);
        Polynomial r = random_poly(rng, 4, false);
        if (!(p + q == q + p)) return {false, "addition commutativity"};
        if (!((p * q) * r == p * (q * r))) return {false, "multiplication associativity"};
        if (!(p * (q + r) == p * q + p * r)) return {false, "distributivity"};
        if (!((p - p).is_zero())) return {false, "subtraction"};
    }
    for (int i = 0; i < 1000; ++i) {
        Polynomial p = random_poly(rng, 5, true);
        Polynomial h = leading_form(p);
        int m = *h.total_degree();
        Polynomial x = Polynomial::variable_x(), y = Polynomial::variable_y();
        if (!(x * partial_x(h) + y * partial_y(h) == Polynomial::constant(m) * h)) {
            return {false, "euler identity"};
        }
    }
    for (int i = 0; i < 1000; ++i) {
        Polynomial p = random_poly(rng, 5, false);
        if (!(parse(format(p)) == p)) return {false, "parser round-trip on " + format(p)};
    }
    for (int i = 0; i < 1000; ++i) {
        PlanarPolyField X{random_poly(rng, 3, false), random_poly(rng, 3, false)};
        PlanarPolyField Y{random_poly(rng, 3, false), random_poly(rng, 3, false)};
        PlanarPolyField Z{random_poly(rng, 3, false), random_poly(rng, 3, false)};
        PlanarPolyField xy = lie_bracket(X, Y);
        PlanarPolyField yx = lie_bracket(Y, X);
        if (!((xy.p + yx.p).is_zero() && (xy.q + yx.q).is_zero())) {
            return {false, "bracket antisymmetry"};
        }
        Rational a(small(rng)), b(small(rng));
        PlanarPolyField lin{a * X.p + b * Y.p, a * X.q + b * Y.q};
        PlanarPolyField lhs = lie_bracket(lin, Z);
        PlanarPolyField xz = lie_bracket(X, Z), yz = lie_bracket(Y, Z);
        if (!(lhs.p == a * xz.p + b * yz.p && lhs.q == a * xz.q + b * yz.q)) {
            return {false, "bracket bilinearity"};
        }
    }
    return {true, "4000 random algebra/parser/bracket cases, exact"};
}

} // namespace

std::vector<CriterionResult> run_acceptance_suite() {
    std::vector<CriterionResult> out;
    out.push_back(run_timed(1, "exact-determinants", 1.0, criterion_determinants));
    out.push_back(run_timed(2, "bracket-identity", 10.0, criterion_bracket_identity));
    out.push_back(run_timed(3, "infinity-directions", 10.0, criterion_infinity_directions));
    out.push_back(run_timed(4, "flow-oracle", 5.0, criterion_flow_oracle));
    out.push_back(run_timed(5, "commutation-transport", 30.0, criterion_commutation_transport));
    out.push_back(run_timed(6, "branch-counting", 60.0, criterion_branch_counting));
    out.push_back(run_timed(7, "completeness-evidence", 30.0, criterion_completeness));
    out.push_back(run_timed(8, "endpoint-taxonomy", 30.0, criterion_endpoint_taxonomy));
    out.push_back(run_timed(9, "property-suites", 30.0, criterion_property_suites));
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results) {
        if (!r.passed) return false;
    }
    return true;
}

} // namespace planarmap
