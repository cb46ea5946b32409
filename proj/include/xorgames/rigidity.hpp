#pragma once

#include "xorgames/exec.hpp"
#include "xorgames/game.hpp"

namespace xorgames {

// Per-pair diagnostics for a CHSH(n)-shaped strategy. Vectors run over the
// pairs i < j in lexicographic order.
struct RigidityReport {
    Eigen::Index n = 0;
    double bias = 0.0;
    double epsilon = 0.0;  // 1 - bias / (sqrt(2)/2)
    struct Pair {
        Eigen::Index i = 0, j = 0;   // 1-based
        double bias = 0.0;           // conditional CHSH bias of the embedded game
        double epsilon = 0.0;        // 1 - bias / (sqrt(2)/2)
        double aliceAnticomm = 0.0;  // ||{A_i, A_j} (x) Id |psi>||
        double bobAnticomm = 0.0;    // ||Id (x) {Atilde_ij, Atilde_ji} |psi>||
        double crossAi = 0.0;        // ||(A_i (x) Id - Id (x) Atilde_ij) |psi>||
        double crossAj = 0.0;        // ||(A_j (x) Id - Id (x) Atilde_ji) |psi>||
    };
    std::vector<Pair> pairs;
    double meanPairEpsilon = 0.0;
    double meanAliceAnticomm = 0.0;
    double meanBobAnticomm = 0.0;
    double meanCross = 0.0;
    double meanAnticomm = 0.0;  // pooled Alice + Bob anti-commutator mean
};

struct QubitPairs {
    Eigen::Index m = 0;  // floor(n/3)
    std::vector<CMat> aliceX, aliceZ;
    std::vector<CMat> bobX, bobZ;
    // residuals(k,l), k != l: max commutator norm over P,Q in {X,Z} and both
    // sides; residuals(k,k): max_P || P_k (x) P'_k |psi> - |psi> ||.
    RMat residuals;
    double stage1Shift = 0.0;  // mean repair distance, first stage
    double stage2Shift = 0.0;  // mean repair distance, second stage
};

struct EntropyCertificate {
    double entropyBits = 0.0;
    Eigen::Index r = 0;
    double delta = 0.0;
    double fannesLowerBound = 0.0;
    double eta = 0.0;  // max pairwise residual on the selected subset
    double maxConsistency = 0.0;
    double epsilon = 0.0;
    std::vector<Eigen::Index> subset;
};

// Atilde_ij = sign(B_ij + B_ji), Atilde_ji = sign(B_ij - B_ji), each completed
// to an exact observable by identity on the kernel.
std::pair<CMat, CMat> tilde_observables(const CMat& bij, const CMat& bji);

RigidityReport embedded_chsh_report(const QuantumStrategy& strategy, Eigen::Index n,
                                    Exec exec = Exec::openmp);

// Exact anti-commutation repair: given balanced observables x, z on even
// dimension, returns Ztilde with {x, Ztilde} = 0 and
// ||(z - Ztilde) (x) Id |psi>|| <= sqrt(3/2) ||{x,z} (x) Id |psi>||.
// The construction depends only on (x, z); the bound holds for every state.
CMat exact_anticommute_repair(const CMat& x, const CMat& z);
CMat exact_anticommute_repair(const CMat& x, const CMat& z, const BipartiteState& state);

// A -> A (+) (-A) on both sides, state embedded with zero mass on the new
// summand; bias is unchanged and every observable becomes balanced.
QuantumStrategy balance_pad(const QuantumStrategy& strategy);

QubitPairs build_qubit_pairs(const QuantumStrategy& strategy, Eigen::Index n,
                             Exec exec = Exec::openmp);

struct SubsetResult {
    std::vector<Eigen::Index> indices;
    double maxResidual = 0.0;  // max pairwise (off-diagonal) residual inside S
};
// Exhaustive search for m <= 12, threshold-graph greedy deletion above.
SubsetResult select_good_subset(const RMat& pairResiduals, Eigen::Index r, double threshold);
SubsetResult select_good_subset_exact(const RMat& pairResiduals, Eigen::Index r);
SubsetResult select_good_subset_greedy(const RMat& pairResiduals, Eigen::Index r,
                                       double threshold);

// Von Neumann entropy of the reduced state, in bits.
double entanglement_entropy(const BipartiteState& state);

// r - 4 delta r + 2 delta log2(delta), the entropy floor for states within
// trace distance delta of r EPR pairs plus an ancilla.
double fannes_lower_bound(Eigen::Index r, double delta);

EntropyCertificate certify_entropy(const QuantumStrategy& strategy, Eigen::Index n,
                                   Eigen::Index r = 0, double delta = 0.01,
                                   Exec exec = Exec::openmp);

}  // namespace xorgames
