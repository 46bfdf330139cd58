#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "mico/geometry.hpp"

namespace mico {

/// Separation verdict: Inside, or a halfspace containing the body with the
/// query point strictly on the wrong side.
struct OracleAnswer {
    std::optional<Halfspace> separator;

    bool inside() const { return !separator.has_value(); }
    static OracleAnswer make_inside() { return {}; }
    static OracleAnswer make_separator(Halfspace h) { return {std::move(h)}; }
};

struct FirstOrderAnswer {
    double value = 0.0;
    Vec subgradient;
};

// --- Convex body specs -----------------------------------------------------

struct ConvexBodySpec;

struct BallBody {
    Vec center;
    double radius = 1.0;
    Norm norm = Norm::Euclidean;
};

struct BoxBody {
    Vec lower, upper;
};

struct PolyhedronBody {
    std::vector<Halfspace> rows;
};

struct EllipsoidBodySpec {
    Ellipsoid e;
};

/// Convex hull of finitely many points; membership/separation via LP.
struct HullBody {
    std::vector<Vec> points;
};

struct IntersectionBody {
    std::vector<ConvexBodySpec> parts;
};

/// Stateful oracle body (e.g. the infolab adversary): separation answers come
/// from a callback; the bounding box is declared up front.
struct OracleBody {
    std::function<OracleAnswer(const Vec&)> separate;
    Vec bbox_lower, bbox_upper;
};

struct ConvexBodySpec {
    std::variant<BallBody, BoxBody, PolyhedronBody, EllipsoidBodySpec, HullBody,
                 IntersectionBody, OracleBody>
        v;

    static ConvexBodySpec ball(Vec center, double radius, Norm norm = Norm::Euclidean);
    static ConvexBodySpec box(Vec lower, Vec upper);
    static ConvexBodySpec polyhedron(std::vector<Halfspace> rows);
    static ConvexBodySpec ellipsoid(Ellipsoid e);
    static ConvexBodySpec hull(std::vector<Vec> points);
    static ConvexBodySpec intersection(std::vector<ConvexBodySpec> parts);
    static ConvexBodySpec oracle(std::function<OracleAnswer(const Vec&)> f, Vec lo, Vec hi);

    std::size_t dim() const;
};

// --- Objective specs -------------------------------------------------------

struct LinearObjective {
    Vec c;
};

/// max_i <a_i, z> + b_i; subgradient ties break to the lowest piece index.
struct MaxAffineObjective {
    std::vector<std::pair<Vec, double>> pieces;
};

/// f(z) = 1/2 z^T Q z + <q, z>; gradient Q z + q. Q symmetric PSD.
struct QuadraticObjective {
    Matrix q_mat;
    Vec q_vec;
};

struct ConstantObjective {
    double value = 0.0;
};

struct ObjectiveSpec {
    std::variant<LinearObjective, MaxAffineObjective, QuadraticObjective, ConstantObjective> v;

    static ObjectiveSpec linear(Vec c) { return {LinearObjective{std::move(c)}}; }
    static ObjectiveSpec max_affine(std::vector<std::pair<Vec, double>> pieces);
    static ObjectiveSpec quadratic(Matrix q, Vec lin);
    static ObjectiveSpec constant(double v) { return {ConstantObjective{v}}; }
};

// --- Oracles ---------------------------------------------------------------

/// Inside iff z is in the body within tau_feas; otherwise a valid separating
/// halfspace (unit Euclidean normal) strictly violated by z. Intersection:
/// first violated constituent wins.
OracleAnswer query_separation(const ConvexBodySpec& body, const Point& z,
                              double tau_feas = kTauFeas);

bool body_contains(const ConvexBodySpec& body, const Vec& z, double tol = kTauFeas);

FirstOrderAnswer query_first_order(const ObjectiveSpec& obj, const Point& z);

double objective_value(const ObjectiveSpec& obj, const Vec& z);

/// Euclidean depth of z inside the body (distance to the complement, negative
/// outside). Supported for balls, boxes, polyhedra and intersections thereof;
/// other kinds raise CapabilityError. Used by the brute-force oracles.
double euclidean_depth(const ConvexBodySpec& body, const Vec& z);

/// Axis-aligned bounding box (may be loose). OracleBody uses its declared box.
std::pair<Vec, Vec> bounding_box(const ConvexBodySpec& body);

// --- Transcript ------------------------------------------------------------

enum class QueryKind { Separation, FirstOrder };

struct TranscriptEntry {
    Point query;
    QueryKind kind = QueryKind::Separation;
    std::variant<OracleAnswer, FirstOrderAnswer> answer;
};

/// Ordered query/response log. Values are immutable; append copies.
struct Transcript {
    std::vector<TranscriptEntry> entries;

    std::size_t size() const { return entries.size(); }
    Transcript truncate(std::size_t k) const;
};

Transcript transcript_append(const Transcript& t, TranscriptEntry entry);

}  // namespace mico
