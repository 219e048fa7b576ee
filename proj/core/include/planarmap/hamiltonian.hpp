#pragma once

#include <optional>
#include <vector>

#include "planarmap/geometry.hpp"
#include "planarmap/polynomial.hpp"

namespace planarmap {

// Polynomial vector field (dx/dt, dy/dt) = (p, q).
struct PlanarPolyField {
    Polynomial p;
    Polynomial q;

    friend bool operator==(const PlanarPolyField&, const PlanarPolyField&) = default;
};

inline bool is_zero(const PlanarPolyField& X) { return X.p.is_zero() && X.q.is_zero(); }

// Hamiltonian field of f: (-df/dy, df/dx). Its orbits run along level curves of f.
PlanarPolyField hamiltonian_field(const Polynomial& f);

// fx*gy - fy*gx.
Polynomial jacobian_det(const Polynomial& f, const Polynomial& g);

// [X,Y] = (JY)X - (JX)Y, computed exactly.
PlanarPolyField lie_bracket(const PlanarPolyField& X, const PlanarPolyField& Y);

// Exact check of the identity [H_f, H_g] = H_D with D = jacobian_det(f, g),
// i.e. the bracket of the two Hamiltonian fields is the Hamiltonian field of
// the jacobian determinant.
struct BracketIdentityCheck {
    bool holds = false;
    PlanarPolyField bracket;    // [H_f, H_g]
    PlanarPolyField expected;   // (-D_y, D_x)
    PlanarPolyField difference; // bracket - expected, zero iff holds
};
BracketIdentityCheck check_bracket_identity(const Polynomial& f, const Polynomial& g);

// The determinant's value when it is a constant polynomial (possibly 0),
// nullopt when it genuinely depends on (x, y).
std::optional<Rational> constant_jacobian(const Polynomial& f, const Polynomial& g);

// Numeric search for common zeros of (p, q) in the window: grid seeding where
// both components change sign or are small, Newton refinement to residual
// 1e-12, duplicates merged within 1e-8. Sorted by (x, y). grid_n >= 2.
std::vector<Point> finite_singularity_scan(const PlanarPolyField& X, const Window& window,
                                           int grid_n);

} // namespace planarmap
