#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mico/geometry.hpp"

namespace mico {

using IntegerVector = std::vector<std::int64_t>;

/// Default dimension cap for the exact enumeration solvers.
inline constexpr std::size_t kLatticeDimCap = 8;

/// Integer solutions of <w, x> = m: x0 plus the primitive kernel lattice.
struct SliceBasis {
    IntegerVector x0;
    std::vector<IntegerVector> basis;  // n - 1 vectors spanning {x : <w, x> = 0}
};

/// Shortest nonzero integer vector under ||w||_A = sqrt(w^T A^{-1} w).
/// Exact minimum; dimensions above the cap raise CapabilityError.
IntegerVector svp(const PDMatrix& a, std::size_t dim_cap = kLatticeDimCap);

/// Integer vector minimizing ||v - c||_A. Exact minimum.
IntegerVector cvp(const PDMatrix& a, const Vec& c, std::size_t dim_cap = kLatticeDimCap);

/// Lattice width minimizer of the ellipsoid with projected shape Aproj:
/// w* = svp(1/4 Aproj^{-1}), so width(E', w*) = 2 sqrt(w*^T Aproj w*).
IntegerVector flatness_direction(const PDMatrix& aproj, std::size_t dim_cap = kLatticeDimCap);

/// Width of the shape-Aproj ellipsoid along integer direction w.
double ellipsoid_width(const PDMatrix& aproj, const IntegerVector& w);

/// Particular solution and primitive kernel basis for <w, x> = m;
/// nullopt iff gcd(w) does not divide m.
std::optional<SliceBasis> kernel_slice_basis(const IntegerVector& w, std::int64_t m);

}  // namespace mico
