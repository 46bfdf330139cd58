#pragma once

#include "mico/linalg.hpp"

namespace mico {

/// minimize c^T x  subject to  A x <= b,  x free.
struct LpProblem {
    Matrix a;
    Vec b;
    Vec c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    double value = 0.0;
};

/// Dense tableau simplex, two phases, Bland's rule throughout. Deterministic:
/// the same problem always produces the same vertex, which the branch-and-cut
/// tests rely on.
LpResult solve_lp(const LpProblem& p);

/// Convenience: maximize <c, x> over A x <= b. Returns the maximum value via
/// LpResult::value (negated back), same status semantics.
LpResult maximize_lp(const Matrix& a, const Vec& b, const Vec& c);

}  // namespace mico
