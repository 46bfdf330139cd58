#pragma once

#include <string>

#include "mico/branchcut.hpp"
#include "mico/core.hpp"

namespace mico {

struct ParsedInstance {
    ProblemParameters params;
    ConvexBodySpec body = ConvexBodySpec::box({0.0}, {1.0});
    ObjectiveSpec objective = ObjectiveSpec::constant(0.0);
};

/// Line-oriented instance text:
///   params <n> <d> <R> <M> <rho> <eps> <delta>
///   body ball <c...> <r> | body supball <c...> <r> | body box <l...> <u...>
///   row <a...> <b>                    (accumulates polyhedron rows)
///   objective linear <c...> | objective constant <v> | objective maxaffine
///   piece <a...> <b>                  (accumulates max-affine pieces)
///   generator jeroslow <n> | generator triangle <h>
/// '#' starts a comment. Multiple body parts intersect. Errors carry the
/// offending line number.
ParsedInstance parse_instance(const std::string& text);

/// Canonical text form; parse_instance(print_instance(x)) reproduces x.
std::string print_instance(const ParsedInstance& inst);

/// PolyInstance view of a parsed polyhedral instance with linear objective.
PolyInstance to_poly_instance(const ParsedInstance& inst);

}  // namespace mico
