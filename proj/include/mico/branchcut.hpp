#pragma once

#include <optional>
#include <vector>

#include "mico/lattice.hpp"
#include "mico/lp.hpp"
#include "mico/solver.hpp"

namespace mico {

/// min <c, z> over { z : rows hold }, first n coordinates integer.
struct PolyInstance {
    std::vector<Halfspace> rows;
    Vec c;
    int n = 0;
    int d = 0;

    int dim() const { return n + d; }
};

/// Union of polyhedra covering Z^n x R^d (each given by rows in full dim).
struct Disjunction {
    std::vector<std::vector<Halfspace>> terms;

    /// {z_i <= pi0} union {z_i >= pi0 + 1}.
    static Disjunction variable(std::size_t i, long pi0, std::size_t dim);
    /// {<pi, x> <= pi0} union {<pi, x> >= pi0 + 1}, pi on integer coords only.
    static Disjunction split(const IntegerVector& pi, long pi0, std::size_t dim);
};

enum class NodeSelection { BestBound, DepthFirst };

struct BnCConfig {
    bool use_branching = true;
    bool use_cg_cuts = false;
    NodeSelection selection = NodeSelection::BestBound;
    long max_nodes = 1'000'000;
    int max_cut_rounds = 50;
};

struct RunStats {
    long nodes = 0;
    long cuts = 0;
    long lp_solves = 0;
    double best_value = 0.0;
    long proof_size = 0;  // nodes + cuts
};

std::pair<OptimizeResult, RunStats> run_branch_and_cut(const PolyInstance& inst,
                                                       const BnCConfig& config);

/// Chvatal-Gomory rounding of a row with integer normal on the integer
/// coordinates and zero continuous part: <a/g, x> <= floor(b/g).
Halfspace cg_cut(const Halfspace& h, int n, int d);

/// Most violated cut for conv((P cap Q1) union (P cap Q2)) at zhat, found by
/// the lift-and-project LP; nullopt when zhat is already in the closure.
std::optional<Halfspace> disjunctive_cut(const std::vector<Halfspace>& p, const Disjunction& dis,
                                         const Vec& zhat);

/// max sum x_i over sum x_i <= N/2, x in [0,1]^N with N = n odd-ized (n or
/// n + 1), stored as a minimization. Even sizes get one extra variable so the
/// right-hand side stays fractional and the cut/branch contrast is visible.
PolyInstance jeroslow_instance(int n);

/// max x2 over conv{(0,0), (1,0), (1/2, h)}, both variables integer.
PolyInstance hidden_triangle_instance(double h);

/// Iterated CG rounding over a fixed generator family until the objective
/// bound stops improving; returns the strengthened rows and the number of
/// rounds that added at least one cut.
std::pair<std::vector<Halfspace>, int> cg_round_closure(const std::vector<Halfspace>& rows,
                                                        const Vec& objective_max, int n, int d,
                                                        int max_rounds = 1000);

}  // namespace mico
