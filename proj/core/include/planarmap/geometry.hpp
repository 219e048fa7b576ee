#pragma once

#include <cmath>

namespace planarmap {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double norm(const Point& p) { return std::hypot(p.x, p.y); }
inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Axis-aligned observation window. All tracing, scanning and counting is
// relative to a window; results are statements about the window, not the plane.
struct Window {
    double x_min = -10.0;
    double x_max = 10.0;
    double y_min = -10.0;
    double y_max = 10.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double diagonal() const { return std::hypot(width(), height()); }
    Point center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    // Same center, sides scaled by `factor`.
    Window scaled(double factor) const {
        const Point c = center();
        const double hw = 0.5 * width() * factor;
        const double hh = 0.5 * height() * factor;
        return {c.x - hw, c.x + hw, c.y - hh, c.y + hh};
    }
};

} // namespace planarmap
