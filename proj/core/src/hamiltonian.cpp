#include "planarmap/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace planarmap {

PlanarPolyField hamiltonian_field(const Polynomial& f) {
    return {-partial_y(f), partial_x(f)};
}

Polynomial jacobian_det(const Polynomial& f, const Polynomial& g) {
    return partial_x(f) * partial_y(g) - partial_y(f) * partial_x(g);
}

PlanarPolyField lie_bracket(const PlanarPolyField& X, const PlanarPolyField& Y) {
    // Component i of (JY)X is <grad Y_i, X>; likewise for (JX)Y.
    auto directional = [](const Polynomial& h, const PlanarPolyField& along) {
        return partial_x(h) * along.p + partial_y(h) * along.q;
    };
    return {directional(Y.p, X) - directional(X.p, Y),
            directional(Y.q, X) - directional(X.q, Y)};
}

BracketIdentityCheck check_bracket_identity(const Polynomial& f, const Polynomial& g) {
    BracketIdentityCheck out;
    out.bracket = lie_bracket(hamiltonian_field(f), hamiltonian_field(g));
    out.expected = hamiltonian_field(jacobian_det(f, g));
    out.difference = {out.bracket.p - out.expected.p, out.bracket.q - out.expected.q};
    out.holds = is_zero(out.difference);
    return out;
}

std::optional<Rational> constant_jacobian(const Polynomial& f, const Polynomial& g) {
    const Polynomial d = jacobian_det(f, g);
    if (!d.is_constant()) return std::nullopt;
    return d.constant_value();
}

std::vector<Point> finite_singularity_scan(const PlanarPolyField& X, const Window& window,
                                           int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("finite_singularity_scan needs grid_n >= 2");

    const CompiledPoly p(X.p), q(X.q);
    const CompiledPoly px(partial_x(X.p)), py(partial_y(X.p));
    const CompiledPoly qx(partial_x(X.q)), qy(partial_y(X.q));

    const int n = grid_n;
    std::vector<double> pv(static_cast<std::size_t>(n + 1) * (n + 1));
    std::vector<double> qv(pv.size());
    auto node_x = [&](int i) { return window.x_min + window.width() * i / n; };
    auto node_y = [&](int j) { return window.y_min + window.height() * j / n; };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * (n + 1) + j;
            pv[k] = p(node_x(i), node_y(j));
            qv[k] = q(node_x(i), node_y(j));
        }

    // A cell is a candidate when each component either changes sign over the
    // cell corners or is tiny on all of them.
    auto candidate = [&](const std::vector<double>& v, int i, int j, double small) {
        const double a = v[static_cast<std::size_t>(i) * (n + 1) + j];
        const double b = v[static_cast<std::size_t>(i + 1) * (n + 1) + j];
        const double c = v[static_cast<std::size_t>(i) * (n + 1) + j + 1];
        const double d = v[static_cast<std::size_t>(i + 1) * (n + 1) + j + 1];
        const double lo = std::min(std::min(a, b), std::min(c, d));
        const double hi = std::max(std::max(a, b), std::max(c, d));
        if (lo <= 0.0 && hi >= 0.0) return true;
        return std::max(std::abs(lo), std::abs(hi)) <= small;
    };

    const double scale_p = p.magnitude(std::max(std::abs(window.x_min), std::abs(window.x_max)),
                                       std::max(std::abs(window.y_min), std::abs(window.y_max)));
    const double scale_q = q.magnitude(std::max(std::abs(window.x_min), std::abs(window.x_max)),
                                       std::max(std::abs(window.y_min), std::abs(window.y_max)));

    std::vector<Point> roots;
    const double far = 10.0 * window.diagonal() + 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!candidate(pv, i, j, 1e-9 * (1.0 + scale_p))) continue;
            if (!candidate(qv, i, j, 1e-9 * (1.0 + scale_q))) continue;
            Point z{0.5 * (node_x(i) + node_x(i + 1)), 0.5 * (node_y(j) + node_y(j + 1))};
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                const double fp = p(z.x, z.y), fq = q(z.x, z.y);
                if (std::max(std::abs(fp), std::abs(fq)) <= 1e-12) {
                    converged = true;
                    break;
                }
                const double a = px(z.x, z.y), b = py(z.x, z.y);
                const double c = qx(z.x, z.y), d = qy(z.x, z.y);
                const double det = a * d - b * c;
                if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
                z.x -= (d * fp - b * fq) / det;
                z.y -= (-c * fp + a * fq) / det;
                if (!std::isfinite(z.x) || !std::isfinite(z.y) || norm(z) > far) break;
            }
            if (!converged) continue;
            if (z.x < window.x_min - 1e-9 || z.x > window.x_max + 1e-9 ||
                z.y < window.y_min - 1e-9 || z.y > window.y_max + 1e-9)
                continue;
            bool duplicate = false;
            for (const Point& r : roots)
                if (distance(r, z) <= 1e-8) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) roots.push_back(z);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    return roots;
}

} // namespace planarmap
