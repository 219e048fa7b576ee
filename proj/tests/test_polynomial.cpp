#include <doctest.h>

#include <cmath>

#include <planarmap/errors.hpp>
#include <planarmap/polynomial.hpp>

using namespace planarmap;

namespace {
Polynomial X() { return Polynomial::variable_x(); }
Polynomial Y() { return Polynomial::variable_y(); }
} // namespace

TEST_CASE("canonical term order is graded-lex descending") {
    Polynomial p = Y() + X() * X() + X() * Y();
    std::vector<Monomial> order;
    for (const auto& [m, c] : p.terms()) order.push_back(m);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == Monomial{2, 0});
    CHECK(order[1] == Monomial{1, 1});
    CHECK(order[2] == Monomial{0, 1});
}

TEST_CASE("zero polynomial has no degree") {
    CHECK(Polynomial::zero().is_zero());
    CHECK(!Polynomial::zero().total_degree().has_value());
    CHECK((X() - X()).is_zero());
    CHECK(Polynomial::constant(0).is_zero());
}

TEST_CASE("constants") {
    Polynomial c = Polynomial::constant(Rational(-7, 3));
    CHECK(c.is_constant());
    CHECK(c.constant_value() == Rational(-7, 3));
    CHECK(c.total_degree() == 0);
    CHECK(!X().is_constant());
}

TEST_CASE("exact rational arithmetic") {
    // (x/2 + 1/3)^2 = x^2/4 + x/3 + 1/9
    Polynomial p = Rational(1, 2) * X() + Polynomial::constant(Rational(1, 3));
    Polynomial sq = p * p;
    CHECK(sq.coefficient({2, 0}) == Rational(1, 4));
    CHECK(sq.coefficient({1, 0}) == Rational(1, 3));
    CHECK(sq.coefficient({0, 0}) == Rational(1, 9));
    CHECK(sq.term_count() == 3);
}

TEST_CASE("pow expands binomials") {
    Polynomial p = pow(X() + Y(), 3);
    CHECK(p.coefficient({3, 0}) == 1);
    CHECK(p.coefficient({2, 1}) == 3);
    CHECK(p.coefficient({1, 2}) == 3);
    CHECK(p.coefficient({0, 3}) == 1);
    CHECK(pow(X(), 0) == Polynomial::constant(1));
}

TEST_CASE("degree cap enforced") {
    Polynomial big = pow(X(), 64);
    CHECK(big.total_degree() == 64);
    CHECK_THROWS_AS(big * X(), DegreeOverflowError);
    CHECK_THROWS_AS(Polynomial::term({65, 0}, Rational(1)), DegreeOverflowError);
    CHECK_THROWS_AS(Polynomial::term({30, 40}, Rational(1)), DegreeOverflowError);
}

TEST_CASE("partial derivatives") {
    Polynomial p = Polynomial::term({3, 2}, Rational(1)); // x^3 y^2
    CHECK(partial_x(p) == Rational(3) * Polynomial::term({2, 2}, Rational(1)));
    CHECK(partial_y(p) == Rational(2) * Polynomial::term({3, 1}, Rational(1)));
    CHECK(partial_x(Polynomial::constant(5)).is_zero());
}

TEST_CASE("evaluation, exact and float") {
    // p = x^2 y - 2 x + 1/2
    Polynomial p = X() * X() * Y() - Rational(2) * X() + Polynomial::constant(Rational(1, 2));
    Rational v = evaluate_exact(p, Rational(2, 3), Rational(-1, 5));
    // (4/9)(-1/5) - 4/3 + 1/2 = -4/45 - 4/3 + 1/2 = (-8 - 120 + 45)/90 = -83/90
    CHECK(v == Rational(-83, 90));
    CHECK(evaluate_float(p, 2.0 / 3.0, -0.2) == doctest::Approx(-83.0 / 90.0).epsilon(1e-14));
}

TEST_CASE("homogeneous parts") {
    Polynomial p = X() * X() + X() * Y() + Y() + Polynomial::constant(4);
    CHECK(homogeneous_component(p, 2) == X() * X() + X() * Y());
    CHECK(homogeneous_component(p, 1) == Y());
    CHECK(homogeneous_component(p, 5).is_zero());
    CHECK(leading_form(p) == X() * X() + X() * Y());
    CHECK_THROWS_AS(leading_form(Polynomial::zero()), ZeroPolynomialError);
}

TEST_CASE("univariate restrictions") {
    Polynomial p = Y() - X() * X();
    auto on_x1 = univariate_restrict(p, RestrictAxis::SetXToOne); // w - 1
    REQUIRE(on_x1.size() == 2);
    CHECK(on_x1[0] == -1);
    CHECK(on_x1[1] == 1);
    auto on_y1 = univariate_restrict(p, RestrictAxis::SetYToOne); // 1 - w^2
    REQUIRE(on_y1.size() == 3);
    CHECK(on_y1[0] == 1);
    CHECK(on_y1[1] == 0);
    CHECK(on_y1[2] == -1);
    CHECK(univariate_restrict(Polynomial::zero(), RestrictAxis::SetXToOne).empty());
}

TEST_CASE("compiled evaluation agrees with the exact form") {
    Polynomial p = Rational(3) * X() * X() * Y() - Y() * Y() + Rational(1, 4) * X();
    CompiledPoly cp(p);
    for (double x : {-2.0, -0.5, 0.0, 1.25, 3.0}) {
        for (double y : {-1.5, 0.0, 0.75, 2.0}) {
            CHECK(cp(x, y) == doctest::Approx(evaluate_float(p, x, y)).epsilon(1e-13));
            CHECK(cp.magnitude(x, y) >= std::abs(cp(x, y)) - 1e-12);
        }
    }
}
