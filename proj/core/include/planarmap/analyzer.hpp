#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "planarmap/compactify.hpp"
#include "planarmap/geometry.hpp"
#include "planarmap/level_tracer.hpp"
#include "planarmap/polynomial.hpp"
#include "planarmap/rational.hpp"

namespace planarmap {

enum class EndpointCase { A1, A2, A3, A4, A5, Indeterminate };

const char* endpoint_case_name(EndpointCase c);

// Where the representative level curves of f and g end: each curve has two
// window exits whose directions are ladder-converged; a curve is "coincident"
// when both its exits point the same way. A1 both maps distinct and the
// direction sets disjoint, A2 both distinct but overlapping, A3 f distinct
// with g coincident, A4 the mirror of A3, A5 both coincident. A3 and A4 are
// kept as separate labels even though one subsumes the other in the source
// taxonomy.
struct EndpointConfig {
    std::vector<InfinityDirection> f_directions;
    std::vector<InfinityDirection> g_directions;
    EndpointCase kind = EndpointCase::Indeterminate;
    std::array<AngleEstimate, 2> f_angles{};
    std::array<AngleEstimate, 2> g_angles{};
    // Every converged exit direction matches some infinity direction of the
    // same polynomial.
    bool consistent_with_infinity = false;
};

// Both polynomials must be nonconstant (ConstantInputError otherwise).
// Ladder divergence is reported as Indeterminate, never coerced.
EndpointConfig classify_endpoints(const Polynomial& f, const Polynomial& g, const Window& window);

struct CollisionPair {
    Point p;
    Point q;
    double residual;   // |F(p) - F(q)|
    double separation; // |p - q|
};

// Witness search for F(p) = F(q) with p != q: bucket grid values, pair
// close values from distant nodes, refine by Gauss-Newton on (p, rho) with
// q = p + rho * (fixed seed direction). Keeps pairs with residual <= 1e-10
// and separation >= 1e-4. Empty result is a valid outcome. grid_n >= 16.
std::vector<CollisionPair> collision_search(const Polynomial& f, const Polynomial& g,
                                            const Window& window, int grid_n);

enum class Verdict {
    InjectiveByTheorem1,     // jacobian determinant is a nonzero constant
    JacobianVanishes,        // identically zero, or a real zero was scanned up
    NonconstantNonvanishing, // nonconstant, no real zero found in the window
    MultiBranchObstruction,  // some sampled level splits into >= 2 components
};

const char* verdict_name(Verdict v);

// analyze: 0; JacobianVanishes: 2; NonconstantNonvanishing: 3;
// MultiBranchObstruction: 4. (1 is reserved for usage and parse errors.)
int verdict_exit_code(Verdict v);

struct LevelCount {
    double level;
    int count;
};

struct FlowCheckSummary {
    std::string status = "skipped"; // "ok", "skipped", or "error: ..."
    bool bracket_identity = false;
    bool singularity_scan_empty = false;
    std::optional<double> commutation_max_defect;
    std::optional<double> transport_max_residual;
    bool forward_complete = false;
    bool backward_complete = false;
};

struct AnalyzeOptions {
    Window window{-10.0, 10.0, -10.0, 10.0};
    int sampled_levels = 21; // evenly spaced over the observed value range
    int count_grid = 512;
    int collision_grid = 64;
    bool flow_checks = true;
};

struct MapAnalysisReport {
    std::string f_text;
    std::string g_text;
    Polynomial determinant;
    std::optional<Rational> jacobian_constant; // nullopt = nonconstant
    std::vector<InfinityDirection> infinity_f;
    std::vector<InfinityDirection> infinity_g;
    EndpointConfig endpoint_case;
    std::vector<LevelCount> branch_counts_f;
    std::vector<LevelCount> branch_counts_g;
    FlowCheckSummary flow_checks;
    std::vector<CollisionPair> collisions;
    Verdict verdict = Verdict::NonconstantNonvanishing;
    std::vector<std::string> check_errors; // sub-check failures, never fatal
};

// Verdict precedence: a constant nonzero jacobian decides injectivity and
// wins outright (window clipping can split one unbounded branch into several
// visible pieces at extreme levels, so counts alone must not override it);
// then a multi-component sampled level; then a vanishing determinant; the
// collision search runs only in the remaining case.
MapAnalysisReport analyze(const Polynomial& f, const Polynomial& g, const AnalyzeOptions& opts = {});

// Stable field names and ordering; byte-identical for identical inputs.
std::string report_to_json(const MapAnalysisReport& report);

} // namespace planarmap
