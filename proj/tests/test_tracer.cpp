#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <planarmap/level_tracer.hpp>
#include <planarmap/parse.hpp>

using namespace planarmap;

namespace {

double polyline_length(const std::vector<Point>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
    return len;
}

const Window kWin{-10, 10, -10, 10};

} // namespace

TEST_CASE("closed curve: unit circle") {
    const Polynomial f = parse("x^2+y^2");
    auto branch = trace_branch_from(f, 1.0, {0.9, 0.1}, kWin);
    CHECK(branch.closed_in_window);
    CHECK(!branch.stalled);
    CHECK(!branch.exit_begin.has_value());
    CHECK(!branch.exit_end.has_value());
    CHECK(branch.points.size() >= 8);
    for (const Point& p : branch.points) {
        CHECK(std::abs(p.x * p.x + p.y * p.y - 1.0) <= 2e-9);
    }
    const double len = polyline_length(branch.points);
    CHECK(len > 2 * std::numbers::pi * 0.98);
    CHECK(len < 2 * std::numbers::pi * 1.001);

    auto branches = trace_level(f, 1.0, kWin);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].closed_in_window);
    CHECK(count_components(f, 1.0, kWin, 256) == 1);
}

TEST_CASE("open curve: line through the window") {
    const Polynomial f = parse("y-2*x");
    auto branches = trace_level(f, 0.0, kWin);
    REQUIRE(branches.size() == 1);
    const LevelCurveBranch& b = branches[0];
    CHECK(!b.closed_in_window);
    REQUIRE(b.exit_begin.has_value());
    REQUIRE(b.exit_end.has_value());
    CHECK(!b.exit_begin->vertical);
    CHECK(b.exit_begin->slope == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(b.exit_end->slope == doctest::Approx(2.0).epsilon(1e-6));
    for (const Point& p : b.points) CHECK(std::abs(p.y - 2 * p.x) <= 2e-9);
    CHECK(count_components(f, 0.0, kWin, 256) == 1);
}

TEST_CASE("parabola crosses the top") {
    const Polynomial f = parse("y-x^2");
    auto branches = trace_level(f, 0.0, kWin);
    REQUIRE(branches.size() == 1);
    const LevelCurveBranch& b = branches[0];
    CHECK(!b.closed_in_window);
    REQUIRE(b.exit_begin.has_value());
    REQUIRE(b.exit_end.has_value());
    // exits near (+-sqrt(10), 10): ray slopes +-10/sqrt(10), opposite signs
    CHECK(b.exit_begin->slope * b.exit_end->slope < 0);
    CHECK(count_components(f, 0.0, kWin, 256) == 1);
}

TEST_CASE("empty level") {
    const Polynomial f = parse("x^2+y^2");
    CHECK(trace_level(f, -1.0, kWin).empty());
    CHECK(count_components(f, -1.0, kWin, 128) == 0);
}

TEST_CASE("zero nodes count as positive") {
    // { x = 0 } runs exactly through grid nodes on a symmetric window; the
    // sign convention still yields one component, not two or zero.
    const Polynomial f = parse("x");
    CHECK(count_components(f, 0.0, kWin, 256) == 1);
    CHECK(count_components(f, 0.0, kWin, 255) == 1);
}

TEST_CASE("two components kept apart") {
    // ((x-3)^2 + y^2 - 1)((x+3)^2 + y^2 - 1) = 0: two unit circles
    const Polynomial f = parse("((x-3)^2+y^2-1)*((x+3)^2+y^2-1)");
    auto branches = trace_level(f, 0.0, kWin);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].closed_in_window);
    CHECK(branches[1].closed_in_window);
    CHECK(branches[0].points.front().x < 0);
    CHECK(branches[1].points.front().x > 0);
    CHECK(count_components(f, 0.0, kWin, 256) == 2);
}

TEST_CASE("three-branch level of the classic counterexample component") {
    // level 1 of 1 + x - x^2 y factors as x(1 - xy) = 0: the y-axis plus both
    // hyperbola arms
    const Polynomial f = parse("1+x-x^2*y");
    auto branches = trace_level(f, 1.0, kWin);
    CHECK(branches.size() == 3);
    CHECK(count_components(f, 1.0, kWin, 512) == 3);
    CHECK(count_components(f, 1.0, kWin, 256) == 3);
}

TEST_CASE("asymptotic slopes over the window ladder") {
    const auto ladder = default_ladder(kWin);
    REQUIRE(ladder.size() == 4);
    CHECK(ladder[3].width() == doctest::Approx(8 * kWin.width()));

    SUBCASE("line keeps its slope") {
        auto branches = trace_level(parse("y-2*x"), 0.0, kWin);
        REQUIRE(branches.size() == 1);
        auto slopes = asymptotic_slope(parse("y-2*x"), branches[0], ladder);
        REQUIRE(slopes.size() == 2);
        for (const auto& s : slopes) {
            CHECK(s.kind == SlopeEstimate::Kind::Finite);
            CHECK(s.slope == doctest::Approx(2.0).epsilon(1e-3));
        }
    }
    SUBCASE("parabola ends turn vertical") {
        const Polynomial f = parse("y-x^2");
        auto branches = trace_level(f, 0.0, kWin);
        REQUIRE(branches.size() == 1);
        auto slopes = asymptotic_slope(f, branches[0], ladder);
        REQUIRE(slopes.size() == 2);
        CHECK(slopes[0].kind == SlopeEstimate::Kind::Vertical);
        CHECK(slopes[1].kind == SlopeEstimate::Kind::Vertical);
    }
    SUBCASE("closed branch has no exit directions") {
        const Polynomial f = parse("x^2+y^2");
        auto branches = trace_level(f, 1.0, kWin);
        REQUIRE(branches.size() == 1);
        auto angles = ladder_exit_angles(f, branches[0], ladder);
        CHECK(!angles[0].converged);
        CHECK(!angles[1].converged);
    }
}

TEST_CASE("branch csv format") {
    auto branches = trace_level(parse("y-2*x"), 0.0, kWin);
    std::ostringstream os;
    write_branches_csv(os, branches);
    const std::string text = os.str();
    CHECK(text.rfind("level,branch,x,y\n", 0) == 0);
    CHECK(text.find("\n0,0,") != std::string::npos);
}
