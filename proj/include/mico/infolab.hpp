#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mico/solver.hpp"

namespace mico {

struct CertificateUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resisting separation oracle over the ambient frame [0,1]^n x [0,R]^d.
/// Maintains one box per integer fiber; answers are always consistent with
/// two instances whose mixed-integer parts are disjoint, as long as the
/// counted-query budget d * 2^n * log2(R / (3 rho)) has not been reached.
struct AdversaryState {
    int n = 0;
    int d = 1;
    double R = 1.0;
    double rho = 1.0;

    struct Fiber {
        Vec lo, hi;  // current box in the continuous coordinates
        long counter = 0;
        bool alive = true;
    };
    std::vector<Fiber> fibers;  // indexed by the bitmask of x in {0,1}^n

    std::vector<Halfspace> recorded;  // every separator answered so far
    std::vector<Vec> inside_points;   // every point answered Inside

    struct LogEntry {
        long index = 0;
        long fiber = -1;  // -1: query did not land on an integer fiber in X
        long counter = 0;
        std::string kind;  // "inside" | "halving" | "kill" | "outside"
        double max_width = 0.0;
        Vec query;
        OracleAnswer answer;
    };
    std::vector<LogEntry> log;
    long counted_queries = 0;

    double per_fiber_cap() const;  // d * log2(R / (3 rho))
    long budget() const;           // floor(d * 2^n * log2(R / (3 rho)))
};

AdversaryState make_adversary(int n, int d, double R, double rho);

/// One oracle answer; mutates the state (boxes, counters, transcript).
OracleAnswer adversary_answer(AdversaryState& state, const Point& z);

/// Two hull bodies that replay the whole transcript identically and whose
/// mixed-integer parts are disjoint width-rho fiber boxes. Throws
/// CertificateUnavailable once the counted-query budget has been spent.
std::pair<ConvexBodySpec, ConvexBodySpec> adversary_certificate(const AdversaryState& state,
                                                                double eps);

/// Checks every transcript entry of `state` against `body`: Inside entries
/// must be members, separator entries must be valid and violated.
bool adversary_replay_consistent(const AdversaryState& state, const ConvexBodySpec& body);

/// Adversary state rendered as the CSV match log defined by this module.
std::string adversary_match_csv(const AdversaryState& state);

enum class MatchStrategy { Centerpoint, Bisection, Random };

/// Drive one strategy against the adversary until `counted_target` counted
/// queries (or a raw-query safety cap); returns raw queries issued.
long run_adversary_match(AdversaryState& state, MatchStrategy strategy, std::uint64_t seed,
                         long counted_target);

// --- Mixed-integer volume and centerpoints --------------------------------

/// nu(S): sum over integer x of the d-volume of the fiber slice; the lattice
/// point count when d = 0. Exact for linear constraint families; Euclidean
/// balls are polygonized in d = 2. Supports d <= 2.
double mixed_integer_volume(const ConvexBodySpec& body, int n, int d);
double mixed_integer_volume_serial(const ConvexBodySpec& body, int n, int d);

struct CenterpointEstimate {
    Vec point;
    double h = 0.0;   // worst sampled-halfspace mass at `point`
    double nu = 0.0;  // nu of the whole body
    int grid_res = 0;
    int directions = 0;
};

/// Grid search for a point maximizing the minimum mixed-integer volume on a
/// halfspace through it. Candidate x are integral; directions are sampled.
/// Brute-force scale: n + d <= 3 (the cap the published bound tests use).
CenterpointEstimate approx_centerpoint(const ConvexBodySpec& body, int n, int d, int grid_res);
CenterpointEstimate approx_centerpoint_serial(const ConvexBodySpec& body, int n, int d,
                                              int grid_res);

/// Theoretical centerpoint mass fraction: (d/(d+1))^d when n = 0, else
/// 1 / (2^n (d + 1)).
double centerpoint_bound(int n, int d);

/// Query strategy that repeatedly cuts the search region at its approximate
/// centerpoint. Stops when nu falls below [rho eps / (M (2R+1))]^{n+d}.
std::pair<OptimizeResult, long> centerpoint_strategy_run(const ConvexBodySpec& body,
                                                         const ObjectiveSpec& obj,
                                                         const ProblemParameters& p,
                                                         int grid_res = 17);

}  // namespace mico
