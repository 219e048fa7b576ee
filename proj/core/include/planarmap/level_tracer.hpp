#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "planarmap/geometry.hpp"
#include "planarmap/polynomial.hpp"

namespace planarmap {

// Direction of the ray from the origin through the point where a branch
// leaves the window: y/x, or vertical when the ray is (numerically) the
// y-axis. Refined across window ladders by asymptotic_slope.
struct ExitSlope {
    bool vertical = false;
    double slope = 0.0;
};

// One connected piece of { f = level } as observed inside a window.
struct LevelCurveBranch {
    double level = 0.0;
    std::vector<Point> points;
    std::optional<ExitSlope> exit_begin; // where points.front() leaves the window
    std::optional<ExitSlope> exit_end;   // where points.back() leaves the window
    bool closed_in_window = false;
    bool stalled = false; // truncated: corrector failed (gradient collapse or cap)
};

struct TraceOptions {
    double initial_step = 1e-2;
    double min_step = 1e-5;
    double max_step = 0.5;
};

// Predictor-corrector continuation of { f = u } through `seed` (projected onto
// the curve first), traced in both directions until the branch leaves the
// window, closes up, or stalls. Points satisfy |f - u| <= 1e-9 * (1 + |u|)
// up to evaluation roundoff at window scale.
LevelCurveBranch trace_branch_from(const Polynomial& f, double u, Point seed, const Window& window,
                                   const TraceOptions& opts = {});

// All branches of { f = u } meeting the window: seeds from the window-boundary
// edges and an interior grid, deduplicated against already-traced branches.
// Deterministic: fixed seed order, branches sorted by first point.
std::vector<LevelCurveBranch> trace_level(const Polynomial& f, double u, const Window& window,
                                          const TraceOptions& opts = {});

// Independent component count: marching-squares cell classification on a
// grid_n x grid_n cell grid, union-find over curve-carrying cells (neighbors
// connect when the curve crosses their shared edge). Zero node values count
// as positive.
int count_components(const Polynomial& f, double u, const Window& window, int grid_n);

// Nested observation windows, ascending; the default ladder over `base` is
// {base, 2x, 4x, 8x}.
std::vector<Window> default_ladder(const Window& base);

struct AngleEstimate {
    bool converged = false;
    double theta = 0.0; // direction of the branch end, radians in (-pi, pi]
};

// Exit-ray directions of both branch ends refined across the ladder: the
// branch is re-traced in the largest window, the last crossing of each rung
// gives one direction sample, and the sequence is extrapolated. Convergence
// requires the gaps to shrink monotonically. Index 0 is the points.front()
// end, index 1 the points.back() end.
std::array<AngleEstimate, 2> ladder_exit_angles(const Polynomial& f, const LevelCurveBranch& branch,
                                                const std::vector<Window>& ladder);

struct SlopeEstimate {
    enum class Kind { Finite, Vertical, Diverged };
    Kind kind = Kind::Diverged;
    double slope = 0.0; // valid when kind == Finite
};

// ladder_exit_angles reduced to slopes: tan(theta), or Vertical when the
// limit direction is within 0.05 rad of the y-axis, or Diverged when the
// ladder does not stabilize.
std::vector<SlopeEstimate> asymptotic_slope(const Polynomial& f, const LevelCurveBranch& branch,
                                            const std::vector<Window>& ladder);

// CSV: header "level,branch,x,y", one row per polyline point.
void write_branches_csv(std::ostream& os, const std::vector<LevelCurveBranch>& branches);

} // namespace planarmap
