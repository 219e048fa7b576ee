#pragma once

#include <optional>
#include <vector>

#include "planarmap/hamiltonian.hpp"
#include "planarmap/polynomial.hpp"

namespace planarmap {

// Local charts on the sphere boundary: U1 covers [1 : y : z] (x = 1/z),
// U2 covers [x : 1 : z] (y = 1/z). z = 0 is the equator.
enum class Chart { U1, U2 };

// Polynomial system obtained by pushing the Hamiltonian field of f into a
// boundary chart and rescaling time by dt = z^(m-2) dtau, m = deg f.
// Both right-hand sides are polynomials in the chart variables (w, z), where
// w is the hemisphere coordinate (the chart's non-z coordinate) stored in the
// Polynomial x-slot and z in the y-slot.
//   U1:  dz/dtau = z * A(w, z)            A = z^(m-1) * f_y(1/z, w/z)
//        dw/dtau = B(w, z) + w * A(w, z)  B = z^(m-1) * f_x(1/z, w/z)
//   U2:  dz/dtau = -z * B'(w, z)          B' = z^(m-1) * f_x(w/z, 1/z)
//        dw/dtau = -A'(w, z) - w * B'     A' = z^(m-1) * f_y(w/z, 1/z)
// On z = 0 the dw/dtau component reduces to m*f_m(1, w) in U1 and
// -m*f_m(w, 1) in U2, with f_m the leading form of f.
struct ChartSystem {
    Chart chart = Chart::U1;
    Polynomial rhs_first;  // dz/dtau, divisible by z
    Polynomial rhs_second; // dw/dtau
    int rescale_power = 0; // the exponent m-2 in the time rescaling
};

ChartSystem chart_system(const Polynomial& f, Chart chart); // throws ConstantInputError

// One real root of a univariate polynomial: either exact (lo == hi, a rational
// root) or an isolating open interval of width <= 2^-40 containing exactly one
// real root. Intervals of distinct roots are pairwise disjoint.
struct IsolatedRoot {
    Rational lo;
    Rational hi;
    int multiplicity = 1;

    bool is_exact() const { return lo == hi; }
    Rational midpoint() const { return (lo + hi) / 2; }
    double approx() const { return to_double(midpoint()); }
};

// All real roots, ascending, of the polynomial with the given coefficients
// (ascending degree). Rational roots come out exact (rational-root test plus
// exact division); the rest are isolated by Sturm bisection.
// Throws ZeroPolynomialError on the zero polynomial.
std::vector<IsolatedRoot> real_roots(const std::vector<Rational>& coeffs);

// A direction at infinity where the compactified Hamiltonian field of f has an
// equilibrium: a real linear factor of the leading form. Non-vertical
// directions carry the slope (root of f_m(1, w)); the vertical direction
// appears when the coefficient of y^m in f_m vanishes, with multiplicity equal
// to that of x = 0 in f_m(x, 1). Sorted by slope ascending, vertical last.
struct InfinityDirection {
    std::optional<IsolatedRoot> slope; // nullopt = vertical
    int multiplicity = 1;

    bool vertical() const { return !slope.has_value(); }
};

std::vector<InfinityDirection> infinity_singularities(const Polynomial& f); // throws ConstantInputError

// Whether the leading part of X = (p, q) at degree m = max(deg p, deg q) has
// the shape (x*h, y*h) for one homogeneous h: exactly then the whole equator
// consists of equilibria of the compactified field. Hamiltonian fields never
// have this shape; gradient-like fields such as (x, y) do.
bool infinity_filled_check(const PlanarPolyField& X); // throws ZeroPolynomialError on the zero field

} // namespace planarmap
