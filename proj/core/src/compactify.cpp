#include "planarmap/compactify.hpp"

#include <algorithm>
#include <stdexcept>

namespace planarmap {

namespace {

// ---------------------------------------------------------------------------
// Exact univariate machinery. A polynomial is a coefficient vector in
// ascending degree with a nonzero back(); the empty vector is zero.
// ---------------------------------------------------------------------------

using UniPoly = std::vector<Rational>;

void normalize(UniPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational eval(const UniPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

UniPoly derivative(const UniPoly& p) {
    UniPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<int>(i));
    normalize(d);
    return d;
}

// Divide by the positive content so coefficients become coprime integers.
// Signs are preserved, which is all Sturm chains care about.
UniPoly primitive(UniPoly p) {
    normalize(p);
    if (p.empty()) return p;
    BigInt num_gcd = 0, den_lcm = 1;
    for (const Rational& c : p) {
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::numerator(c));
        den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, boost::multiprecision::denominator(c)) *
                  boost::multiprecision::denominator(c);
    }
    if (num_gcd == 0) return p;
    const Rational content(num_gcd, den_lcm); // positive: gcd of magnitudes
    for (Rational& c : p) c /= content;
    return p;
}

// Euclidean remainder of a by b (b nonzero).
UniPoly remainder(UniPoly a, const UniPoly& b) {
    normalize(a);
    while (!a.empty() && a.size() >= b.size()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        normalize(a);
    }
    return a;
}

UniPoly quotient(UniPoly a, const UniPoly& b) {
    normalize(a);
    UniPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (!a.empty() && a.size() >= b.size()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        normalize(a);
    }
    normalize(q);
    return q;
}

// Monic-free gcd with primitive normalization each round; result is primitive
// with positive leading coefficient.
UniPoly poly_gcd(UniPoly a, UniPoly b) {
    a = primitive(std::move(a));
    b = primitive(std::move(b));
    while (!b.empty()) {
        UniPoly r = primitive(remainder(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() < 0)
        for (Rational& c : a) c = -c;
    return a;
}

// Yun decomposition: p = prod factors[i].poly ^ factors[i].multiplicity with
// every factor square-free. p must be nonconstant.
struct SquareFreeFactor {
    UniPoly poly;
    int multiplicity;
};

std::vector<SquareFreeFactor> square_free_decompose(UniPoly p) {
    std::vector<SquareFreeFactor> out;
    p = primitive(std::move(p));
    UniPoly dp = derivative(p);
    UniPoly g = poly_gcd(p, dp);
    if (degree(g) == 0) {
        out.push_back({std::move(p), 1});
        return out;
    }
    UniPoly a = quotient(p, g);
    UniPoly b = quotient(dp, g);
    int i = 1;
    while (degree(a) > 0) {
        UniPoly c = b;
        UniPoly da = derivative(a);
        c.resize(std::max(c.size(), da.size()), Rational(0));
        for (std::size_t k = 0; k < da.size(); ++k) c[k] -= da[k];
        normalize(c);
        UniPoly d = c.empty() ? a : poly_gcd(a, c);
        if (degree(d) > 0) out.push_back({d, i});
        a = quotient(a, d);
        b = c.empty() ? UniPoly{} : quotient(c, d);
        ++i;
    }
    return out;
}

int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

struct SturmChain {
    std::vector<UniPoly> seq;

    int variations(const Rational& x) const {
        int count = 0, prev = 0;
        for (const UniPoly& s : seq) {
            const int sg = sign_of(eval(s, x));
            if (sg == 0) continue;
            if (prev != 0 && sg != prev) ++count;
            prev = sg;
        }
        return count;
    }

    // Distinct real roots in the half-open interval (a, b].
    int count(const Rational& a, const Rational& b) const {
        return variations(a) - variations(b);
    }
};

SturmChain sturm_chain(const UniPoly& q) {
    SturmChain chain;
    chain.seq.push_back(primitive(q));
    UniPoly d = primitive(derivative(q));
    if (!d.empty()) chain.seq.push_back(d);
    while (chain.seq.size() >= 2) {
        const UniPoly& a = chain.seq[chain.seq.size() - 2];
        const UniPoly& b = chain.seq.back();
        UniPoly r = primitive(remainder(a, b));
        if (r.empty()) break;
        for (Rational& c : r) c = -c;
        chain.seq.push_back(std::move(r));
    }
    return chain;
}

Rational cauchy_bound(const UniPoly& p) {
    Rational m = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        Rational a = p[i] / p.back();
        if (a < 0) a = -a;
        if (a > m) m = a;
    }
    return m + 1;
}

// Divisors of |n| by trial division; empty when the enumeration budget blows.
std::vector<BigInt> divisors(BigInt n, std::size_t cap = 4096) {
    if (n < 0) n = -n;
    if (n == 0) return {};
    std::vector<std::pair<BigInt, int>> factors;
    BigInt rest = n;
    for (BigInt d = 2; d * d <= rest && d <= 1000000; ++d) {
        if (rest % d == 0) {
            int e = 0;
            while (rest % d == 0) {
                rest /= d;
                ++e;
            }
            factors.push_back({d, e});
        }
    }
    if (rest > 1) {
        if (rest > BigInt(1) << 64) return {}; // give up: not fully factored cheaply
        factors.push_back({rest, 1});
    }
    std::vector<BigInt> divs{1};
    for (const auto& [prime, e] : factors) {
        const std::size_t base = divs.size();
        BigInt pe = 1;
        for (int k = 1; k <= e; ++k) {
            pe *= prime;
            for (std::size_t i = 0; i < base; ++i) {
                divs.push_back(divs[i] * pe);
                if (divs.size() > cap) return {};
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// Synthetic division of square-free q by (x - r), exact.
UniPoly deflate(const UniPoly& q, const Rational& r) {
    UniPoly out(q.size() - 1, Rational(0));
    Rational carry = 0;
    for (std::size_t i = q.size(); i-- > 1;) {
        carry = q[i] + carry * r;
        out[i - 1] = carry;
        carry = out[i - 1];
    }
    return out;
}

// All rational roots of a square-free polynomial, extracted exactly and
// divided out. May miss roots only when divisor enumeration hits its budget;
// those still come back as isolating intervals.
std::vector<Rational> extract_rational_roots(UniPoly& q) {
    std::vector<Rational> roots;
    normalize(q);
    if (q.empty() || degree(q) == 0) return roots;
    if (q[0] == 0) {
        roots.push_back(0);
        q.erase(q.begin());
        normalize(q);
    }
    if (degree(q) < 1) return roots;
    UniPoly p = primitive(q);
    const std::vector<BigInt> num_divs = divisors(boost::multiprecision::numerator(p[0]));
    const std::vector<BigInt> den_divs = divisors(boost::multiprecision::numerator(p.back()));
    if (num_divs.empty() || den_divs.empty()) return roots;
    const Rational bound = cauchy_bound(p);
    for (const BigInt& r : num_divs) {
        for (const BigInt& s : den_divs) {
            if (boost::multiprecision::gcd(r, s) != 1) continue;
            for (int sign : {1, -1}) {
                const Rational cand(sign > 0 ? r : -r, s);
                if (cand > bound || cand < -bound) continue;
                if (degree(q) >= 1 && eval(q, cand) == 0) {
                    roots.push_back(cand);
                    q = deflate(q, cand);
                    normalize(q);
                }
            }
            if (degree(q) < 1) return roots;
        }
    }
    return roots;
}

struct RootAccumulator {
    std::vector<IsolatedRoot> roots;

    void add_exact(const Rational& r, int mult) { roots.push_back({r, r, mult}); }
    void add_interval(const Rational& lo, const Rational& hi, int mult) {
        roots.push_back({lo, hi, mult});
    }
};

const Rational kTargetWidth = Rational(1, BigInt(1) << 40);

// Isolate the real roots of a square-free polynomial with no rational roots
// left (an exact zero at a bisection midpoint is still handled defensively).
void isolate_irrational(UniPoly q, int mult, RootAccumulator& acc) {
    normalize(q);
    if (degree(q) < 1) return;
    for (;;) {
        const SturmChain chain = sturm_chain(q);
        const Rational bound = cauchy_bound(q);
        bool restarted = false;
        // Intervals found before a restart would be re-found against the
        // deflated polynomial, so keep them local until the pass completes.
        std::vector<std::pair<Rational, Rational>> found;
        std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            const int n = chain.count(a, b);
            if (n == 0) continue;
            const Rational mid = (a + b) / 2;
            if (eval(q, mid) == 0) {
                acc.add_exact(mid, mult);
                q = deflate(q, mid);
                normalize(q);
                restarted = true;
                break;
            }
            if (n == 1 && b - a <= kTargetWidth) {
                found.push_back({a, b});
                continue;
            }
            stack.push_back({a, mid});
            stack.push_back({mid, b});
        }
        if (!restarted) {
            for (auto& [lo, hi] : found) acc.add_interval(lo, hi, mult);
            break;
        }
        if (degree(q) < 1) break;
    }
}

// Shrink an isolating interval once; the root is simple within its factor so
// the factor changes sign over the interval.
void shrink(IsolatedRoot& r, const UniPoly& factor) {
    const Rational mid = r.midpoint();
    const Rational vm = eval(factor, mid);
    if (vm == 0) {
        r.lo = r.hi = mid;
        return;
    }
    if (sign_of(eval(factor, r.lo)) * sign_of(vm) < 0) r.hi = mid;
    else r.lo = mid;
}

} // namespace

std::vector<IsolatedRoot> real_roots(const std::vector<Rational>& coeffs) {
    UniPoly p = coeffs;
    normalize(p);
    if (p.empty()) throw ZeroPolynomialError("real_roots of the zero polynomial");
    if (degree(p) == 0) return {};

    struct Pending {
        IsolatedRoot root;
        UniPoly factor; // square-free factor owning the root (for refinement)
    };
    std::vector<Pending> pending;

    for (auto& [factor, mult] : square_free_decompose(p)) {
        if (degree(factor) < 1) continue;
        UniPoly q = factor;
        RootAccumulator acc;
        for (const Rational& r : extract_rational_roots(q)) acc.add_exact(r, mult);
        isolate_irrational(q, mult, acc);
        for (IsolatedRoot& r : acc.roots) pending.push_back({std::move(r), factor});
    }

    // Intervals were isolated per factor; make them pairwise disjoint (and
    // clear of every exact root) so each is isolating for the full input.
    for (bool dirty = true; dirty;) {
        dirty = false;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            for (std::size_t j = i + 1; j < pending.size(); ++j) {
                IsolatedRoot& a = pending[i].root;
                IsolatedRoot& b = pending[j].root;
                const bool overlap = !(a.hi < b.lo || b.hi < a.lo);
                if (!overlap) continue;
                if (!a.is_exact()) shrink(a, pending[i].factor);
                if (!b.is_exact()) shrink(b, pending[j].factor);
                dirty = true;
            }
        }
    }

    std::vector<IsolatedRoot> out;
    out.reserve(pending.size());
    for (auto& p2 : pending) out.push_back(std::move(p2.root));
    std::sort(out.begin(), out.end(),
              [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.midpoint() < b.midpoint(); });
    return out;
}

namespace {

// z^(m-1) * h(1/z, w/z) for U1, z^(m-1) * h(w/z, 1/z) for U2, as a polynomial
// in (w, z) with w in the x-slot and z in the y-slot. Requires deg h <= m-1.
Polynomial chart_lift(const Polynomial& h, int m, Chart chart) {
    Polynomial out;
    for (const auto& [mono, c] : h.terms()) {
        const int zexp = (m - 1) - mono.ex - mono.ey;
        const int wexp = chart == Chart::U1 ? mono.ey : mono.ex;
        out.add_term({wexp, zexp}, c);
    }
    return out;
}

} // namespace

ChartSystem chart_system(const Polynomial& f, Chart chart) {
    if (f.is_constant()) throw ConstantInputError("chart_system needs a nonconstant polynomial");
    const int m = *f.total_degree();
    const Polynomial a = chart_lift(partial_y(f), m, chart); // matches f_y
    const Polynomial b = chart_lift(partial_x(f), m, chart); // matches f_x
    const Polynomial z = Polynomial::variable_y();
    const Polynomial w = Polynomial::variable_x();

    ChartSystem sys;
    sys.chart = chart;
    sys.rescale_power = m - 2;
    if (chart == Chart::U1) {
        sys.rhs_first = z * a;
        sys.rhs_second = b + w * a;
    } else {
        sys.rhs_first = -(z * b);
        sys.rhs_second = -a - w * b;
    }
    return sys;
}

std::vector<InfinityDirection> infinity_singularities(const Polynomial& f) {
    if (f.is_constant()) throw ConstantInputError("infinity_singularities needs a nonconstant polynomial");
    const Polynomial fm = leading_form(f);

    std::vector<InfinityDirection> out;
    const std::vector<Rational> on_x1 = univariate_restrict(fm, RestrictAxis::SetXToOne);
    if (static_cast<int>(on_x1.size()) - 1 >= 1)
        for (IsolatedRoot& r : real_roots(on_x1)) {
            InfinityDirection d;
            d.multiplicity = r.multiplicity;
            d.slope = std::move(r);
            out.push_back(std::move(d));
        }

    // Vertical direction: y^m coefficient of the leading form vanishes; its
    // multiplicity is that of the root x = 0 in f_m(x, 1).
    const std::vector<Rational> on_y1 = univariate_restrict(fm, RestrictAxis::SetYToOne);
    std::size_t k = 0;
    while (k < on_y1.size() && on_y1[k] == 0) ++k;
    if (k >= 1 && k < on_y1.size())
        out.push_back({std::nullopt, static_cast<int>(k)});

    std::sort(out.begin(), out.end(), [](const InfinityDirection& a, const InfinityDirection& b) {
        if (a.vertical() != b.vertical()) return b.vertical(); // vertical last
        if (a.vertical()) return false;
        return a.slope->midpoint() < b.slope->midpoint();
    });
    return out;
}

bool infinity_filled_check(const PlanarPolyField& X) {
    if (is_zero(X)) throw ZeroPolynomialError("infinity_filled_check of the zero field");
    int m = 0;
    if (auto d = X.p.total_degree()) m = std::max(m, *d);
    if (auto d = X.q.total_degree()) m = std::max(m, *d);
    const Polynomial pm = homogeneous_component(X.p, m);
    const Polynomial qm = homogeneous_component(X.q, m);
    if (pm.is_zero() || qm.is_zero()) return false;

    Polynomial h1, h2;
    for (const auto& [mono, c] : pm.terms()) {
        if (mono.ex == 0) return false; // p_m not divisible by x
        h1.add_term({mono.ex - 1, mono.ey}, c);
    }
    for (const auto& [mono, c] : qm.terms()) {
        if (mono.ey == 0) return false; // q_m not divisible by y
        h2.add_term({mono.ex, mono.ey - 1}, c);
    }
    return h1 == h2;
}

} // namespace planarmap
