#include <doctest.h>

#include <cmath>

#include <planarmap/analyzer.hpp>
#include <planarmap/errors.hpp>
#include <planarmap/parse.hpp>

using namespace planarmap;

namespace {
const Window kWin{-10, 10, -10, 10};
}

TEST_CASE("endpoint taxonomy") {
    SUBCASE("identity map: both curves straight, rays disjoint") {
        auto cfg = classify_endpoints(parse("x"), parse("y"), kWin);
        CHECK(cfg.kind == EndpointCase::A1);
        CHECK(cfg.consistent_with_infinity);
    }
    SUBCASE("shear by a cubic: both straightish, rays overlap") {
        auto cfg = classify_endpoints(parse("x"), parse("y-x^3"), kWin);
        CHECK(cfg.kind == EndpointCase::A2);
    }
    SUBCASE("parabola second component folds its exits together") {
        auto cfg = classify_endpoints(parse("x"), parse("y-x^2"), kWin);
        CHECK(cfg.kind == EndpointCase::A3);
    }
    SUBCASE("both components parabolic") {
        auto cfg = classify_endpoints(parse("y-x^2"), parse("y+x-x^2"), kWin);
        CHECK(cfg.kind == EndpointCase::A5);
    }
    SUBCASE("quartic first component folds, linear second does not") {
        auto cfg = classify_endpoints(parse("y-(2*x-y)^4"), parse("2*x-y"), kWin);
        CHECK(cfg.kind == EndpointCase::A4);
        CHECK(cfg.consistent_with_infinity);
    }
}

TEST_CASE("collision search") {
    SUBCASE("squaring map collides antipodally") {
        // F = (x^2 - y^2, 2xy) identifies p and -p
        auto hits = collision_search(parse("x^2-y^2"), parse("2*x*y"), {-3, 3, -3, 3}, 32);
        REQUIRE(!hits.empty());
        bool antipodal = false;
        for (const auto& c : hits) {
            CHECK(c.residual <= 1e-10);
            CHECK(c.separation >= 1e-4);
            if (std::hypot(c.p.x + c.q.x, c.p.y + c.q.y) < 1e-6) antipodal = true;
        }
        CHECK(antipodal);
    }
    SUBCASE("fold map collides mirror points") {
        auto hits = collision_search(parse("x^2"), parse("y"), {-3, 3, -3, 3}, 32);
        REQUIRE(!hits.empty());
        bool mirrored = false;
        for (const auto& c : hits) {
            if (std::abs(c.p.x + c.q.x) < 1e-6 && std::abs(c.p.y - c.q.y) < 1e-6 &&
                std::abs(c.p.x) > 1e-4)
                mirrored = true;
        }
        CHECK(mirrored);
    }
    SUBCASE("injective cubic pair yields nothing") {
        auto hits = collision_search(parse("y-x^3"), parse("y-x-x^3"), {-3, 3, -3, 3}, 32);
        CHECK(hits.empty());
    }
}

TEST_CASE("analyze: constant nonzero determinant") {
    auto report = analyze(parse("y-(2*x-y)^4"), parse("2*x-y"));
    CHECK(report.verdict == Verdict::InjectiveByTheorem1);
    CHECK(verdict_exit_code(report.verdict) == 0);
    REQUIRE(report.jacobian_constant.has_value());
    CHECK(*report.jacobian_constant == -2);
    CHECK(report.check_errors.empty());

    REQUIRE(report.infinity_f.size() == 1);
    CHECK(!report.infinity_f[0].vertical());
    CHECK(report.infinity_f[0].slope->midpoint() == 2);
    CHECK(report.infinity_f[0].multiplicity == 4);

    CHECK(report.endpoint_case.kind == EndpointCase::A4);
    CHECK(report.endpoint_case.consistent_with_infinity);

    CHECK(report.flow_checks.status == "ok");
    CHECK(report.flow_checks.bracket_identity);
    CHECK(report.flow_checks.singularity_scan_empty);
    CHECK(report.flow_checks.forward_complete);
    CHECK(report.flow_checks.backward_complete);
    REQUIRE(report.flow_checks.commutation_max_defect.has_value());
    CHECK(*report.flow_checks.commutation_max_defect <= 1e-6);
    REQUIRE(report.flow_checks.transport_max_residual.has_value());
    CHECK(*report.flow_checks.transport_max_residual <= 1e-6);

    CHECK(report.collisions.empty()); // not searched on this path
}

TEST_CASE("analyze: multi-branch level wins over vanishing determinant") {
    auto report = analyze(parse("1+x-x^2*y"), parse("y"));
    CHECK(report.verdict == Verdict::MultiBranchObstruction);
    CHECK(verdict_exit_code(report.verdict) == 4);
    bool split = false;
    for (const auto& lc : report.branch_counts_f)
        if (lc.count >= 2) split = true;
    CHECK(split);
}

TEST_CASE("analyze: degenerate map") {
    auto report = analyze(parse("x"), parse("x"));
    CHECK(report.verdict == Verdict::JacobianVanishes);
    CHECK(verdict_exit_code(report.verdict) == 2);
    REQUIRE(report.jacobian_constant.has_value());
    CHECK(*report.jacobian_constant == 0);
}

TEST_CASE("analyze: nonconstant determinant with no window zero") {
    // determinant is 1 + 3x^2: positive everywhere, and x + x^3 is strictly
    // increasing, so every level is one vertical strip and the pair is
    // injective: the collision search must come back empty.
    auto report = analyze(parse("x+x^3"), parse("y"));
    CHECK(report.verdict == Verdict::NonconstantNonvanishing);
    CHECK(verdict_exit_code(report.verdict) == 3);
    CHECK(!report.jacobian_constant.has_value());
    CHECK(report.collisions.empty());
}

TEST_CASE("analyze rejects constant components") {
    CHECK_THROWS_AS(analyze(Polynomial::constant(1), parse("y")), ConstantInputError);
}

TEST_CASE("json report") {
    AnalyzeOptions opts;
    opts.flow_checks = false; // keep it quick, json shape is what matters here
    auto report = analyze(parse("y-x^3"), parse("y-x-x^3"), opts);
    const std::string once = report_to_json(report);
    const std::string twice = report_to_json(analyze(parse("y-x^3"), parse("y-x-x^3"), opts));
    CHECK(once == twice);
    CHECK(once.find("\"verdict\"") != std::string::npos);
    CHECK(once.find("InjectiveByTheorem1") != std::string::npos);
    CHECK(once.find("\"f_text\"") != std::string::npos);
    CHECK(once.find("\"jacobian\"") != std::string::npos);
    CHECK(once.back() == '\n');
}

TEST_CASE("verdict names and exit codes") {
    CHECK(std::string(verdict_name(Verdict::InjectiveByTheorem1)) == "InjectiveByTheorem1");
    CHECK(std::string(verdict_name(Verdict::JacobianVanishes)) == "JacobianVanishes");
    CHECK(std::string(verdict_name(Verdict::NonconstantNonvanishing)) == "NonconstantNonvanishing");
    CHECK(std::string(verdict_name(Verdict::MultiBranchObstruction)) == "MultiBranchObstruction");
    CHECK(verdict_exit_code(Verdict::InjectiveByTheorem1) == 0);
    CHECK(verdict_exit_code(Verdict::JacobianVanishes) == 2);
    CHECK(verdict_exit_code(Verdict::NonconstantNonvanishing) == 3);
    CHECK(verdict_exit_code(Verdict::MultiBranchObstruction) == 4);
}
