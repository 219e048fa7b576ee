#include "planarmap/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace planarmap {

namespace {

struct Vec2 {
    double x, y;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double vnorm(Vec2 a) { return std::hypot(a.x, a.y); }

constexpr double kMinStep = 1e-14;

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct CompiledField {
    CompiledPoly p, q;
    explicit CompiledField(const PlanarPolyField& X) : p(X.p), q(X.q) {}
    Vec2 operator()(Vec2 v) const { return {p(v.x, v.y), q(v.x, v.y)}; }
};

// Cubic Hermite interpolant over an accepted step (4th-order accurate),
// enough for escape-crossing location and sampling between nodes.
struct HermiteSpan {
    Vec2 y0, y1, f0, f1;
    double h;

    Vec2 at(double theta) const {
        const double t2 = theta * theta;
        const double h00 = (1 + 2 * theta) * (1 - theta) * (1 - theta);
        const double h10 = theta * (1 - theta) * (1 - theta);
        const double h01 = t2 * (3 - 2 * theta);
        const double h11 = t2 * (theta - 1);
        return h00 * y0 + (h * h10) * f0 + h01 * y1 + (h * h11) * f1;
    }
};

struct EscapeHit {
    double theta;
    Vec2 point;
};

// First theta in (0, 1] where |interpolant| reaches the radius.
std::optional<EscapeHit> find_escape(const HermiteSpan& span, double radius) {
    if (vnorm(span.y0) >= radius) return EscapeHit{0.0, span.y0};
    const int kScan = 16;
    double prev = 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double th = static_cast<double>(i) / kScan;
        if (vnorm(span.at(th)) >= radius) {
            double lo = prev, hi = th;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (vnorm(span.at(mid)) >= radius ? hi : lo) = mid;
            }
            return EscapeHit{hi, span.at(hi)};
        }
        prev = th;
    }
    return std::nullopt;
}

} // namespace

const char* terminal_name(Terminal t) {
    switch (t) {
        case Terminal::ReachedTime: return "ReachedTime";
        case Terminal::Escaped: return "Escaped";
        case Terminal::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

FlowTrajectory integrate(const PlanarPolyField& X, Point p0, double t_end,
                         const IntegratorConfig& cfg) {
    const CompiledField field(X);
    FlowTrajectory traj;
    traj.samples.push_back({0.0, p0});

    Vec2 y{p0.x, p0.y};
    if (vnorm(y) >= cfg.escape_radius) {
        traj.terminal = Terminal::Escaped;
        traj.escape_time = 0.0;
        return traj;
    }
    if (t_end == 0.0) return traj;

    const double dir = t_end > 0 ? 1.0 : -1.0;
    double t = 0.0;
    Vec2 k1 = field(y);
    double h = dir * std::min({cfg.max_step, std::abs(t_end),
                               0.01 * (1.0 + vnorm(y)) / (1.0 + vnorm(k1))});
    double facold = 1e-4;

    for (;;) {
        if (std::abs(h) < kMinStep) {
            traj.terminal = Terminal::StepUnderflow;
            return traj;
        }
        bool final_step = false;
        if ((t + h - t_end) * dir >= 0.0) {
            h = t_end - t;
            final_step = true;
        }

        const Vec2 k2 = field(y + (h * a21) * k1);
        const Vec2 k3 = field(y + (h * a31) * k1 + (h * a32) * k2);
        const Vec2 k4 = field(y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
        const Vec2 k5 = field(y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4);
        const Vec2 k6 =
            field(y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 + (h * a65) * k5);
        const Vec2 ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
        const Vec2 k7 = field(ynew); // FSAL stage, also the error stage

        const Vec2 errv = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                          (h * e6) * k6 + (h * e7) * k7;
        auto scaled = [&](double e, double a, double b2) {
            return e / (cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a), std::abs(b2)));
        };
        const double ex = scaled(errv.x, y.x, ynew.x);
        const double ey = scaled(errv.y, y.y, ynew.y);
        double err = std::sqrt(0.5 * (ex * ex + ey * ey));
        if (!std::isfinite(err)) err = 10.0; // overflowing stage: force a rejection

        if (err > 1.0) {
            const double fac = std::max(0.1, 0.9 * std::pow(err, -0.2));
            h *= fac;
            continue;
        }

        const HermiteSpan span{y, ynew, k1, k7, h};
        if (auto hit = find_escape(span, cfg.escape_radius)) {
            traj.escape_time = t + hit->theta * h;
            traj.samples.push_back({traj.escape_time, {hit->point.x, hit->point.y}});
            traj.terminal = Terminal::Escaped;
            return traj;
        }

        t += h;
        y = ynew;
        k1 = k7;
        traj.samples.push_back({t, {y.x, y.y}});
        if (final_step) {
            traj.terminal = Terminal::ReachedTime;
            return traj;
        }

        // PI controller (error exponent 1/5 with a weak integral term).
        const double beta = 0.04;
        const double fac11 = std::pow(std::max(err, 1e-16), 0.2 - 0.75 * beta);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::clamp(fac / 0.9, 0.2, 5.0); // divides h below: growth capped at 5x
        h = dir * std::min(std::abs(h) / fac, cfg.max_step);
        facold = std::max(err, 1e-4);
    }
}

std::optional<double> blow_up_time(const PlanarPolyField& X, Point p0,
                                   const IntegratorConfig& cfg) {
    // One run out to 4R, recording the last upward crossing of each rung.
    const double rungs[3] = {cfg.escape_radius, 2 * cfg.escape_radius, 4 * cfg.escape_radius};
    IntegratorConfig wide = cfg;
    wide.escape_radius = rungs[2];
    const FlowTrajectory traj = integrate(X, p0, cfg.max_time, wide);
    if (traj.terminal != Terminal::Escaped) return std::nullopt;

    double times[3];
    for (int k = 0; k < 3; ++k) {
        times[k] = traj.escape_time;
        for (std::size_t i = 1; i < traj.samples.size(); ++i) {
            const double r0 = norm(traj.samples[i - 1].p);
            const double r1 = norm(traj.samples[i].p);
            if (r0 < rungs[k] && r1 >= rungs[k]) {
                // Linear-in-radius crossing estimate within the step.
                const double w = (rungs[k] - r0) / (r1 - r0);
                times[k] = traj.samples[i - 1].t + w * (traj.samples[i].t - traj.samples[i - 1].t);
            }
        }
    }

    const double d1 = times[1] - times[0];
    const double d2 = times[2] - times[1];
    if (d1 <= 0.0 || d2 <= 0.0) return times[2];
    const double ratio = d2 / d1;
    if (ratio >= 0.9) return std::nullopt; // gaps not shrinking: looks complete
    return times[2] + d2 * ratio / (1.0 - ratio);
}

namespace {

// Endpoint of one flow leg, or nullopt when the leg is incomparable.
std::optional<Point> flow_endpoint(const PlanarPolyField& X, Point p, double t,
                                   const IntegratorConfig& cfg) {
    const FlowTrajectory traj = integrate(X, p, t, cfg);
    if (traj.terminal != Terminal::ReachedTime) return std::nullopt;
    return traj.back().p;
}

} // namespace

std::optional<double> commutation_defect(const Polynomial& f, const Polynomial& g, Point p,
                                         double t, double s, const IntegratorConfig& cfg) {
    const PlanarPolyField hf = hamiltonian_field(f);
    const PlanarPolyField hg = hamiltonian_field(g);
    const auto leg1 = flow_endpoint(hg, p, s, cfg);
    if (!leg1) return std::nullopt;
    const auto path1 = flow_endpoint(hf, *leg1, t, cfg);
    if (!path1) return std::nullopt;
    const auto leg2 = flow_endpoint(hf, p, t, cfg);
    if (!leg2) return std::nullopt;
    const auto path2 = flow_endpoint(hg, *leg2, s, cfg);
    if (!path2) return std::nullopt;
    return distance(*path1, *path2);
}

namespace {

Rational constant_jacobian_or_throw(const Polynomial& f, const Polynomial& g) {
    const auto c = constant_jacobian(f, g);
    if (!c) throw NonconstantJacobianError("transport residual needs a constant jacobian determinant");
    return *c;
}

} // namespace

std::optional<double> transport_residual_f(const Polynomial& f, const Polynomial& g, Point p,
                                           double s, const IntegratorConfig& cfg) {
    const double c = to_double(constant_jacobian_or_throw(f, g));
    const auto end = flow_endpoint(hamiltonian_field(g), p, s, cfg);
    if (!end) return std::nullopt;
    const CompiledPoly fc(f);
    return std::abs(fc(end->x, end->y) - (fc(p.x, p.y) - c * s));
}

std::optional<double> transport_residual_g(const Polynomial& f, const Polynomial& g, Point p,
                                           double t, const IntegratorConfig& cfg) {
    const double c = to_double(constant_jacobian_or_throw(f, g));
    const auto end = flow_endpoint(hamiltonian_field(f), p, t, cfg);
    if (!end) return std::nullopt;
    const CompiledPoly gc(g);
    return std::abs(gc(end->x, end->y) - (gc(p.x, p.y) + c * t));
}

double first_integral_drift(const Polynomial& f, const FlowTrajectory& traj) {
    const CompiledPoly fc(f);
    const double base = fc(traj.samples.front().p.x, traj.samples.front().p.y);
    double drift = 0.0;
    for (const FlowSample& s : traj.samples)
        drift = std::max(drift, std::abs(fc(s.p.x, s.p.y) - base));
    return drift;
}

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj) {
    os << "t,x,y\n";
    char buf[128];
    for (const FlowSample& s : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.p.x, s.p.y);
        os << buf;
    }
    os << "# terminal=" << terminal_name(traj.terminal);
    if (traj.terminal == Terminal::Escaped) {
        std::snprintf(buf, sizeof buf, "(t=%.17g)", traj.escape_time);
        os << buf;
    }
    os << "\n";
}

} // namespace planarmap
