#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <planarmap/errors.hpp>
#include <planarmap/flow.hpp>
#include <planarmap/parse.hpp>

using namespace planarmap;

namespace {

// H_f for f = -(1+x^2)y is (1+x^2, -2xy); from (0, 1) the solution is
// x = tan t, y = cos^2 t, blowing up at t = pi/2.
PlanarPolyField tan_field() { return hamiltonian_field(parse("-1*(1+x^2)*y")); }

} // namespace

TEST_CASE("integrate basics") {
    SUBCASE("constant field translates") {
        const PlanarPolyField X{parse("1"), parse("0")};
        auto traj = integrate(X, {0, 0}, 3.0);
        CHECK(traj.terminal == Terminal::ReachedTime);
        CHECK(traj.samples.front().t == 0.0);
        CHECK(traj.back().t == doctest::Approx(3.0));
        CHECK(std::abs(traj.back().p.x - 3.0) < 1e-10);
        CHECK(std::abs(traj.back().p.y) < 1e-12);
    }
    SUBCASE("negative horizon runs backwards") {
        const PlanarPolyField X{parse("1"), parse("0")};
        auto traj = integrate(X, {0, 0}, -2.0);
        CHECK(traj.terminal == Terminal::ReachedTime);
        CHECK(std::abs(traj.back().p.x + 2.0) < 1e-10);
        for (std::size_t i = 1; i < traj.samples.size(); ++i)
            CHECK(traj.samples[i].t < traj.samples[i - 1].t);
    }
    SUBCASE("quarter turn of the rotation field") {
        const PlanarPolyField X{parse("-y"), parse("x")};
        auto traj = integrate(X, {1, 0}, std::numbers::pi / 2);
        CHECK(std::abs(traj.back().p.x) < 1e-7);
        CHECK(std::abs(traj.back().p.y - 1.0) < 1e-7);
    }
    SUBCASE("level function conserved over many turns") {
        const Polynomial f = parse("x^2+y^2");
        auto traj = integrate(hamiltonian_field(f), {1, 0}, 10.0);
        CHECK(traj.terminal == Terminal::ReachedTime);
        CHECK(first_integral_drift(f, traj) < 1e-7);
    }
    SUBCASE("tangent solution hit to tolerance") {
        auto traj = integrate(tan_field(), {0, 1}, 1.0);
        CHECK(traj.terminal == Terminal::ReachedTime);
        CHECK(std::abs(traj.back().p.x - std::tan(1.0)) < 1e-6);
        const double c = std::cos(1.0);
        CHECK(std::abs(traj.back().p.y - c * c) < 1e-6);
    }
}

TEST_CASE("escape handling") {
    // x' = x^2 from x = 1 gives x(t) = 1/(1-t); radius R is crossed at 1 - 1/R.
    const PlanarPolyField X{parse("x^2"), parse("0")};
    SUBCASE("crossing time located on the interpolant") {
        IntegratorConfig cfg;
        cfg.escape_radius = 100.0;
        auto traj = integrate(X, {1, 0}, 2.0, cfg);
        CHECK(traj.terminal == Terminal::Escaped);
        CHECK(std::abs(traj.escape_time - 0.99) < 1e-6);
        CHECK(norm(traj.back().p) == doctest::Approx(100.0).epsilon(1e-6));
        CHECK(traj.back().t == traj.escape_time);
    }
    SUBCASE("start beyond the radius escapes at time zero") {
        IntegratorConfig cfg;
        cfg.escape_radius = 0.5;
        auto traj = integrate(X, {1, 0}, 2.0, cfg);
        CHECK(traj.terminal == Terminal::Escaped);
        CHECK(traj.escape_time == 0.0);
        CHECK(traj.samples.size() == 1);
    }
    SUBCASE("unreachable radius ends in step underflow at the blow-up") {
        IntegratorConfig cfg;
        cfg.escape_radius = 1e300;
        auto traj = integrate(X, {1, 0}, 2.0, cfg);
        CHECK(traj.terminal == Terminal::StepUnderflow);
        CHECK(traj.back().t < 1.0);
        CHECK(traj.back().t > 0.99);
    }
}

TEST_CASE("blow-up time estimate") {
    SUBCASE("tangent field blows up at pi/2") {
        auto t = blow_up_time(tan_field(), {0, 1});
        REQUIRE(t.has_value());
        CHECK(std::abs(*t - std::numbers::pi / 2) < 1e-3);
    }
    SUBCASE("bounded orbits report none") {
        const PlanarPolyField X{parse("-y"), parse("x")};
        CHECK(!blow_up_time(X, {1, 0}).has_value());
    }
}

TEST_CASE("commutation defect") {
    SUBCASE("unimodular cubic pair commutes numerically") {
        const Polynomial f = parse("y-x^3");
        const Polynomial g = parse("y-x-x^3");
        auto d = commutation_defect(f, g, {0.3, -0.2}, 0.8, 0.8);
        REQUIRE(d.has_value());
        CHECK(*d < 1e-6);
    }
    SUBCASE("nonconstant-jacobian pair visibly fails to commute") {
        // Flow legs by hand: psi then phi lands at (2/3, 15/16), phi then psi
        // at (3/2, 1/2), so the defect is hypot(5/6, 7/16).
        auto d = commutation_defect(parse("1+x-x^2*y"), parse("y"), {1, 1}, 0.5, 0.5);
        REQUIRE(d.has_value());
        const double expected = std::hypot(5.0 / 6.0, 7.0 / 16.0);
        CHECK(*d == doctest::Approx(expected).epsilon(1e-3));
        CHECK(*d > 1e-3);
    }
}

TEST_CASE("transport residuals") {
    const Polynomial f = parse("y-x^3");
    const Polynomial g = parse("y-x-x^3");
    SUBCASE("unimodular pair transports at unit rate") {
        auto rf = transport_residual_f(f, g, {0.4, -0.3}, 1.2);
        auto rg = transport_residual_g(f, g, {0.4, -0.3}, -0.7);
        REQUIRE(rf.has_value());
        REQUIRE(rg.has_value());
        CHECK(*rf < 1e-6);
        CHECK(*rg < 1e-6);
    }
    SUBCASE("quartic pair with determinant -2") {
        const Polynomial f1 = parse("y-(2*x-y)^4");
        const Polynomial g1 = parse("2*x-y");
        auto rf = transport_residual_f(f1, g1, {0.1, 0.2}, 0.6);
        auto rg = transport_residual_g(f1, g1, {0.1, 0.2}, 0.6);
        REQUIRE(rf.has_value());
        REQUIRE(rg.has_value());
        CHECK(*rf < 1e-6);
        CHECK(*rg < 1e-6);
    }
    SUBCASE("nonconstant determinant refused") {
        CHECK_THROWS_AS(transport_residual_f(parse("1+x-x^2*y"), parse("y"), {1, 1}, 0.5),
                        NonconstantJacobianError);
    }
}

TEST_CASE("trajectory csv") {
    const PlanarPolyField X{parse("1"), parse("0")};
    SUBCASE("header, rows, terminal comment") {
        auto traj = integrate(X, {0, 0}, 1.0);
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        const std::string text = os.str();
        CHECK(text.rfind("t,x,y\n", 0) == 0);
        CHECK(text.find("# terminal=ReachedTime") != std::string::npos);
    }
    SUBCASE("escape comment carries the crossing time") {
        IntegratorConfig cfg;
        cfg.escape_radius = 2.0;
        auto traj = integrate(X, {0, 0}, 5.0, cfg);
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        CHECK(os.str().find("# terminal=Escaped(t=") != std::string::npos);
    }
}
