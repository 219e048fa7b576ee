#include "planarmap/polynomial.hpp"

#include <cmath>
#include <cstdlib>

namespace planarmap {

namespace {

void check_monomial(Monomial m) {
    if (m.ex < 0 || m.ey < 0)
        throw std::invalid_argument("monomial exponents must be nonnegative");
    if (m.total() > Polynomial::kMaxTotalDegree)
        throw DegreeOverflowError("monomial total degree " + std::to_string(m.total()) +
                                  " exceeds cap " + std::to_string(Polynomial::kMaxTotalDegree));
}

} // namespace

Polynomial Polynomial::constant(Rational c) {
    Polynomial p;
    p.add_term({0, 0}, c);
    return p;
}

Polynomial Polynomial::variable_x() {
    Polynomial p;
    p.add_term({1, 0}, 1);
    return p;
}

Polynomial Polynomial::variable_y() {
    Polynomial p;
    p.add_term({0, 1}, 1);
    return p;
}

Polynomial Polynomial::term(Monomial m, Rational c) {
    check_monomial(m);
    Polynomial p;
    p.add_term(m, c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{0, 0});
}

Rational Polynomial::constant_value() const {
    auto it = terms_.find({0, 0});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> Polynomial::total_degree() const {
    if (terms_.empty()) return std::nullopt;
    // Graded-lex descending: the first term carries the top degree.
    return terms_.begin()->first.total();
}

Rational Polynomial::coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    check_monomial(m);
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms()) r.add_term(m, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms()) r.add_term(m, -c);
    return r;
}

Polynomial operator-(const Polynomial& a) {
    Polynomial r;
    for (const auto& [m, c] : a.terms()) r.add_term(m, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial::zero();
    const int da = *a.total_degree();
    const int db = *b.total_degree();
    if (da + db > Polynomial::kMaxTotalDegree)
        throw DegreeOverflowError("product degree " + std::to_string(da + db) +
                                  " exceeds cap " + std::to_string(Polynomial::kMaxTotalDegree));
    Polynomial r;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            r.add_term({ma.ex + mb.ex, ma.ey + mb.ey}, ca * cb);
    return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
    Polynomial r;
    for (const auto& [m, pc] : p.terms()) r.add_term(m, c * pc);
    return r;
}

Polynomial pow(const Polynomial& p, int n) {
    if (n < 0) throw std::invalid_argument("negative exponent");
    Polynomial r = Polynomial::constant(1);
    Polynomial base = p;
    // Repeated squaring; each multiply enforces the degree cap.
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return r;
}

Polynomial partial_x(const Polynomial& p) {
    Polynomial r;
    for (const auto& [m, c] : p.terms())
        if (m.ex > 0) r.add_term({m.ex - 1, m.ey}, c * m.ex);
    return r;
}

Polynomial partial_y(const Polynomial& p) {
    Polynomial r;
    for (const auto& [m, c] : p.terms())
        if (m.ey > 0) r.add_term({m.ex, m.ey - 1}, c * m.ey);
    return r;
}

Rational evaluate_exact(const Polynomial& p, const Rational& x, const Rational& y) {
    // Power cache keyed by exponent; degrees are small so this is plenty.
    auto powr = [](const Rational& b, int e) {
        Rational r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    };
    Rational acc = 0;
    for (const auto& [m, c] : p.terms()) acc += c * powr(x, m.ex) * powr(y, m.ey);
    return acc;
}

double evaluate_float(const Polynomial& p, double x, double y) {
    return CompiledPoly(p)(x, y);
}

Polynomial homogeneous_component(const Polynomial& p, int k) {
    if (k < 0) throw std::invalid_argument("homogeneous degree must be nonnegative");
    Polynomial r;
    for (const auto& [m, c] : p.terms())
        if (m.total() == k) r.add_term(m, c);
    return r;
}

Polynomial leading_form(const Polynomial& p) {
    if (p.is_zero()) throw ZeroPolynomialError("leading form of the zero polynomial");
    return homogeneous_component(p, *p.total_degree());
}

std::vector<Rational> univariate_restrict(const Polynomial& p, RestrictAxis axis) {
    if (p.is_zero()) return {};
    int deg = 0;
    for (const auto& [m, c] : p.terms())
        deg = std::max(deg, axis == RestrictAxis::SetXToOne ? m.ey : m.ex);
    std::vector<Rational> coeffs(static_cast<std::size_t>(deg) + 1, Rational(0));
    for (const auto& [m, c] : p.terms())
        coeffs[static_cast<std::size_t>(axis == RestrictAxis::SetXToOne ? m.ey : m.ex)] += c;
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.size() == 1 && coeffs[0] == 0) coeffs.clear();
    return coeffs;
}

CompiledPoly::CompiledPoly(const Polynomial& p) {
    int mx = 0, my = 0;
    for (const auto& [m, c] : p.terms()) {
        mx = std::max(mx, m.ex);
        my = std::max(my, m.ey);
    }
    nx_ = mx + 1;
    ny_ = my + 1;
    c_.assign(static_cast<std::size_t>(nx_) * ny_, 0.0);
    abs_c_.assign(c_.size(), 0.0);
    for (const auto& [m, c] : p.terms()) {
        const double v = to_double(c);
        c_[static_cast<std::size_t>(m.ex) * ny_ + m.ey] = v;
        abs_c_[static_cast<std::size_t>(m.ex) * ny_ + m.ey] = std::abs(v);
    }
}

namespace {

// Double-double scraps for compensated Horner. two_sum/two_prod are the
// classic error-free transformations; two_prod is exact because std::fma
// rounds a*b-p in one operation.
struct DD {
    double hi, lo;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bv = s - a;
    return {s, (a - (s - bv)) + (b - bv)};
}

inline DD quick_two_sum(double a, double b) { // assumes |a| >= |b| or a == 0
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

// acc * s + c, with c either plain or already double-double.
inline DD horner_step(DD acc, double s, double c_hi, double c_lo = 0.0) {
    DD p = two_prod(acc.hi, s);
    p.lo = std::fma(acc.lo, s, p.lo);
    DD t = two_sum(p.hi, c_hi);
    t.lo += p.lo + c_lo;
    return quick_two_sum(t.hi, t.lo);
}

} // namespace

double CompiledPoly::operator()(double x, double y) const {
    if (c_.empty()) return 0.0;
    // Horner in x of Horner-in-y slices, carried in double-double. Plain
    // Horner loses the value entirely when huge monomials cancel to a small
    // result (e.g. expanded powers of 2x-y evaluated far out near y = 2x,
    // exactly where Hamiltonian orbits of such polynomials run); compensated
    // evaluation keeps ~1 ulp of the compiled coefficients at any point.
    DD acc{0.0, 0.0};
    for (int i = nx_ - 1; i >= 0; --i) {
        const double* row = &c_[static_cast<std::size_t>(i) * ny_];
        DD rowv{0.0, 0.0};
        for (int j = ny_ - 1; j >= 0; --j) rowv = horner_step(rowv, y, row[j]);
        acc = horner_step(acc, x, rowv.hi, rowv.lo);
    }
    return acc.hi + acc.lo;
}

double CompiledPoly::magnitude(double x, double y) const {
    if (abs_c_.empty()) return 0.0;
    const double ax = std::abs(x), ay = std::abs(y);
    double acc = 0.0;
    for (int i = nx_ - 1; i >= 0; --i) {
        const double* row = &abs_c_[static_cast<std::size_t>(i) * ny_];
        double rowv = 0.0;
        for (int j = ny_ - 1; j >= 0; --j) rowv = rowv * ay + row[j];
        acc = acc * ax + rowv;
    }
    return acc;
}

} // namespace planarmap
