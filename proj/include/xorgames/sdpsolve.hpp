#pragma once

#include <vector>

#include "xorgames/exec.hpp"
#include "xorgames/game.hpp"

namespace xorgames {

// Feasible point of the unit-vector relaxation of the game bias:
// objective = sum_ij G_ij x_i . y_j with all vectors on the unit sphere.
struct VectorStrategy {
    Eigen::Index r = 0;
    std::vector<RVec> xs;
    std::vector<RVec> ys;
    double objective = 0.0;
    bool converged = true;
    // Objective after every half-sweep of the best restart (monotone).
    std::vector<double> history;

    void validate() const;
};

struct SolveOptions {
    Eigen::Index rank = 0;  // 0 -> default rank rule
    int maxSweeps = 100000;
    double tol = 1e-10;
    std::int64_t seed = 0;
    int restarts = 8;
    Exec exec = Exec::openmp;
};

// Largest r with r(r+1)/2 <= nA+nB, capped at min(nA, nB), plus one spare
// dimension so coordinate ascent is running above the rank where the
// relaxation is tight.
Eigen::Index default_rank(Eigen::Index nA, Eigen::Index nB);

// Block-coordinate ascent over the unit vectors: x_i <- normalize(G y)_i,
// y_j <- normalize(G^T x)_j, repeated from `restarts` random starts, best
// objective kept. The objective never decreases within a restart, and the
// returned value is a valid lower bound on the optimum.
VectorStrategy solve_bias(const XorGame& game, const SolveOptions& options = {});

// (nA+nB)/2 * lambda_max([[0, G], [G^T, 0]]) = (nA+nB)/2 * sigma_max(G),
// an upper bound on the relaxation optimum.
double certify_upper(const XorGame& game);

double vector_objective(const RMat& matrix, const std::vector<RVec>& xs,
                        const std::vector<RVec>& ys);

}  // namespace xorgames
