#include <doctest.h>

#include <planarmap/parse.hpp>
#include <planarmap/polynomial.hpp>

using namespace planarmap;

TEST_CASE("basic expressions") {
    CHECK(parse("x") == Polynomial::variable_x());
    CHECK(parse("y") == Polynomial::variable_y());
    CHECK(parse("42") == Polynomial::constant(42));
    CHECK(parse("3/4") == Polynomial::constant(Rational(3, 4)));
    CHECK(parse("  x +  y ") == Polynomial::variable_x() + Polynomial::variable_y());
}

TEST_CASE("precedence and grouping") {
    Polynomial x = Polynomial::variable_x(), y = Polynomial::variable_y();
    CHECK(parse("x+2*y^3") == x + Rational(2) * y * y * y);
    CHECK(parse("(x+y)^2") == x * x + Rational(2) * x * y + y * y);
    CHECK(parse("2*x-y") == Rational(2) * x - y);
    CHECK(parse("x-y-y") == x - Rational(2) * y);
    CHECK(parse("-x^2") == -(x * x)); // unary minus binds the whole power term
    CHECK(parse("- -x") == x);
}

TEST_CASE("reference map expansion is frozen") {
    Polynomial f = parse("y-(2*x-y)^4");
    CHECK(format(f) == "-16*x^4 + 32*x^3*y + -24*x^2*y^2 + 8*x*y^3 + -1*y^4 + y");
    CHECK(format(parse("0")) == "0");
    CHECK(format(parse("x - x")) == "0");
    CHECK(format(parse("1/2 + x")) == "x + 1/2");
}

TEST_CASE("round trip through format") {
    for (const char* text : {"x", "-1*y", "3/4*x^2 + -2*x*y + y", "7", "-5/3",
                             "x^8 + -1*x^4*y^4 + 2/9"}) {
        Polynomial p = parse(text);
        CHECK(parse(format(p)) == p);
    }
}

TEST_CASE("error positions point at the offending token") {
    SUBCASE("dangling operator") {
        try {
            parse("x+");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position == 2);
        }
    }
    SUBCASE("unclosed parenthesis") {
        try {
            parse("(x+y");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position == 4);
        }
    }
    SUBCASE("zero denominator") {
        try {
            parse("1/0");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position == 2);
        }
    }
    SUBCASE("no implicit multiplication") {
        CHECK_THROWS_AS(parse("2 x"), ParseError);
        CHECK_THROWS_AS(parse("x y"), ParseError);
    }
    SUBCASE("exponent beyond the degree cap") {
        CHECK_THROWS_AS(parse("x^65"), ParseError);
        CHECK(parse("x^64").total_degree() == 64);
    }
    SUBCASE("signed exponents rejected") {
        CHECK_THROWS_AS(parse("x^-2"), ParseError);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(parse(""), ParseError);
        CHECK_THROWS_AS(parse("   "), ParseError);
    }
}

TEST_CASE("messages carry expectations") {
    try {
        parse("x*");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
}

TEST_CASE("caret line") {
    CHECK(caret_line(0) == "^");
    CHECK(caret_line(3) == "   ^");
}
