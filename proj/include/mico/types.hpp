#pragma once

#include <stdexcept>
#include <string>

#include "mico/linalg.hpp"

namespace mico {

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Norm { Sup, Euclidean };

/// Membership tolerance and linear-algebra tolerance used across the library.
inline constexpr double kTauFeas = 1e-7;
inline constexpr double kTauLin = 1e-9;
inline constexpr double kTauInt = 1e-6;

/// (n, d, R, M, rho, eps, delta): the parameter record every bound is stated in.
struct ProblemParameters {
    int n = 0;          // integer variables
    int d = 0;          // continuous variables
    double R = 1.0;     // boundedness radius
    double M = 0.0;     // Lipschitz constant of the objective
    double rho = 1.0;   // strict-feasibility radius
    double eps = 0.0;   // objective tolerance
    double delta = 1e-3;  // deep-point radius
    Norm norm = Norm::Euclidean;

    int dim() const { return n + d; }
    void validate() const;
};

/// A point of the decision space; the first n coordinates are integer
/// constrained (by convention of the ambient parameters).
struct Point {
    Vec coords;

    Point() = default;
    explicit Point(Vec c) : coords(std::move(c)) {}
    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
};

/// Feasible side is { z : <normal, z> <= offset }. Normal must be nonzero.
struct Halfspace {
    Vec normal;
    double offset = 0.0;

    Halfspace() = default;
    Halfspace(Vec a, double b);

    /// Same halfspace with unit Euclidean normal.
    Halfspace normalized() const;
    bool contains(const Vec& z, double tol = 0.0) const {
        return dot(normal, z) <= offset + tol;
    }
};

}  // namespace mico
