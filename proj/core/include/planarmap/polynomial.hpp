#pragma once

#include <map>
#include <optional>
#include <vector>

#include "planarmap/errors.hpp"
#include "planarmap/rational.hpp"

namespace planarmap {

// Exponent pair for x^ex * y^ey.
struct Monomial {
    int ex = 0;
    int ey = 0;

    int total() const { return ex + ey; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic order, descending, with x ranked before y.
// Within one total degree the exponent of x alone decides.
struct GradedLexDescending {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.total() != b.total()) return a.total() > b.total();
        return a.ex > b.ex;
    }
};

// Sparse bivariate polynomial with exact rational coefficients.
// Canonical form: no zero coefficients are stored, terms iterate in
// graded-lex descending order. Total degree of any monomial is capped
// at kMaxTotalDegree; products that would exceed the cap throw.
class Polynomial {
public:
    static constexpr int kMaxTotalDegree = 64;

    using TermMap = std::map<Monomial, Rational, GradedLexDescending>;

    Polynomial() = default;

    static Polynomial zero() { return Polynomial{}; }
    static Polynomial constant(Rational c);
    static Polynomial variable_x();
    static Polynomial variable_y();
    // Single term c * x^ex * y^ey. Throws DegreeOverflowError past the cap.
    static Polynomial term(Monomial m, Rational c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term (0 if absent); the whole value when is_constant().
    Rational constant_value() const;

    // nullopt for the zero polynomial (its degree is below every integer).
    std::optional<int> total_degree() const;

    const TermMap& terms() const { return terms_; }
    Rational coefficient(Monomial m) const;
    std::size_t term_count() const { return terms_.size(); }

    void add_term(Monomial m, const Rational& c);

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    TermMap terms_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Rational& c, const Polynomial& p);
Polynomial pow(const Polynomial& p, int n);

Polynomial partial_x(const Polynomial& p);
Polynomial partial_y(const Polynomial& p);

Rational evaluate_exact(const Polynomial& p, const Rational& x, const Rational& y);
double evaluate_float(const Polynomial& p, double x, double y);

// Sum of the degree-k terms; zero when k exceeds the degree.
Polynomial homogeneous_component(const Polynomial& p, int k);
// Top homogeneous component. Throws ZeroPolynomialError on the zero polynomial.
Polynomial leading_form(const Polynomial& p);

enum class RestrictAxis {
    SetXToOne, // coefficients of p(1, w) in ascending powers of w
    SetYToOne, // coefficients of p(w, 1) in ascending powers of w
};
std::vector<Rational> univariate_restrict(const Polynomial& p, RestrictAxis axis);

// Dense Horner form for hot numeric loops (integration, tracing, grid
// scans). One conversion, then allocation-free evaluation. Evaluation is
// compensated (double-double accumulation), so the result stays accurate
// even when individual monomials dwarf the value.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial& p);

    double operator()(double x, double y) const;
    // Sum of |c_ij| |x|^i |y|^j: cheap bound on evaluation roundoff scale.
    double magnitude(double x, double y) const;

private:
    int nx_ = 0; // number of x-slices (max ex + 1)
    int ny_ = 0; // row stride (max ey + 1)
    std::vector<double> c_;
    std::vector<double> abs_c_;
};

} // namespace planarmap
