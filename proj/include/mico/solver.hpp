#pragma once

#include <optional>

#include "mico/core.hpp"

namespace mico {

struct SolveStats {
    long separation_queries = 0;
    long first_order_queries = 0;
    long ellipsoid_updates = 0;
    long recursion_nodes = 0;
    long feasibility_calls = 0;  // level-set probes made by the binary search
    double wall_ms = 0.0;
};

/// FoundPoint carries a feasible point with exactly integral leading
/// coordinates; empty means no point with a delta-deep Euclidean ball exists.
struct FeasibilityResult {
    std::optional<Point> point;
    SolveStats stats;

    bool found() const { return point.has_value(); }
};

/// EpsOptimal carries a feasible point and its objective value; empty means
/// NoDeepOptimum (no suitably deep feasible point, or empty in exact mode).
struct OptimizeResult {
    std::optional<Point> point;
    double value = 0.0;
    SolveStats stats;

    bool found() const { return point.has_value(); }
};

/// Ellipsoid recursion over the integer dimension: either a mixed-integer
/// point of the body, or a certificate that no such point is delta-deep.
/// Caller contract: body is contained in the Euclidean ball of radius p.R.
FeasibilityResult feasibility(const ConvexBodySpec& body, const ProblemParameters& p);

/// Binary search on the objective level over feasibility runs with
/// delta = eps * rho / (4 M R); at most ceil(log2(4 M R / eps)) guesses
/// after the initial feasible point.
OptimizeResult optimize(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                        const ProblemParameters& p);

/// One feasibility-style run with subgradient cuts at feasible points;
/// returns the best point seen. delta = eps * rho / (2 M R).
OptimizeResult optimize_single_pass(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                    const ProblemParameters& p);

/// Classical central-cut ellipsoid method for n = 0.
OptimizeResult ellipsoid_continuous(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                    const ProblemParameters& p);

/// Exact optimization over body intersect Z^n for d = 0. No eps/rho/M
/// dependence; empty result means the body contains no integer point.
OptimizeResult pure_integer_optimize(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                     const ProblemParameters& p);

}  // namespace mico
