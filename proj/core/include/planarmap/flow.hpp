#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "planarmap/hamiltonian.hpp"

namespace planarmap {

struct IntegratorConfig {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double max_step = 0.1;
    double escape_radius = 1e6;
    double max_time = 1e3; // horizon used by blow_up_time
};

enum class Terminal {
    ReachedTime,   // integrated through the requested time
    Escaped,       // |state| crossed escape_radius; crossing time interpolated
    StepUnderflow, // step control collapsed below 1e-14
};

const char* terminal_name(Terminal t);

struct FlowSample {
    double t;
    Point p;
};

struct FlowTrajectory {
    std::vector<FlowSample> samples; // one per accepted step, first is (0, p0)
    Terminal terminal = Terminal::ReachedTime;
    double escape_time = 0.0; // valid when terminal == Escaped

    const FlowSample& back() const { return samples.back(); }
};

// Integrate dp/dt = X(p) from p0 over [0, t_end] (t_end < 0 runs backwards,
// sample times then decrease). Dormand-Prince 5(4) with PI step-size control;
// escape crossings are located on the dense (Hermite) interpolant.
FlowTrajectory integrate(const PlanarPolyField& X, Point p0, double t_end,
                         const IntegratorConfig& cfg = {});

// Forward blow-up estimate: escape times t_R for radii R, 2R, 4R taken from a
// single run; when their gaps shrink geometrically the limit is extrapolated,
// otherwise (slow unbounded growth, or the horizon max_time is reached first)
// returns nullopt.
std::optional<double> blow_up_time(const PlanarPolyField& X, Point p0,
                                   const IntegratorConfig& cfg = {});

// | phi_t(psi_s(p)) - psi_s(phi_t(p)) | with phi the flow of H_f and psi the
// flow of H_g; nullopt when any leg escapes or underflows (incomparable).
std::optional<double> commutation_defect(const Polynomial& f, const Polynomial& g, Point p,
                                         double t, double s, const IntegratorConfig& cfg = {});

// Transport along the partner flow: with constant jacobian c, f decreases at
// rate c along H_g and g grows at rate c along H_f. Returns the numeric
// residual |f(psi_s(p)) - (f(p) - c*s)| resp. |g(phi_t(p)) - (g(p) + c*t)|;
// nullopt when the flow leg is incomparable (escape/underflow).
// Throws NonconstantJacobianError unless jacobian_det(f, g) is constant.
std::optional<double> transport_residual_f(const Polynomial& f, const Polynomial& g, Point p,
                                           double s, const IntegratorConfig& cfg = {});
std::optional<double> transport_residual_g(const Polynomial& f, const Polynomial& g, Point p,
                                           double t, const IntegratorConfig& cfg = {});

// max_k |f(p_k) - f(p_0)| over the trajectory samples: how well the flow of
// H_f conserves its own first integral.
double first_integral_drift(const Polynomial& f, const FlowTrajectory& traj);

// CSV: header "t,x,y", one sample per row, trailing "# terminal=..." comment.
void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj);

} // namespace planarmap
