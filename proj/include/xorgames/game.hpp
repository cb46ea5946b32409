#pragma once

#include <string>
#include <vector>

#include "xorgames/exec.hpp"
#include "xorgames/matcore.hpp"

namespace xorgames {

// Two-player XOR game: real matrix with |entries| summing to 1. Rows index
// Alice's questions, columns Bob's.
struct XorGame {
    Eigen::Index nA = 0;
    Eigen::Index nB = 0;
    RMat matrix;
    std::vector<std::string> aliceLabels;  // optional, may be empty
    std::vector<std::string> bobLabels;

    void validate() const;
};

struct QuantumStrategy {
    std::vector<CMat> aliceObs;
    std::vector<CMat> bobObs;
    BipartiteState state;

    Eigen::Index dimA() const { return state.dimA; }
    Eigen::Index dimB() const { return state.dimB; }
    void validate(double obsTol = 1e-9) const;
};

struct BiasValue {
    double bias = 0.0;
    double successProbability = 0.0;
};

struct SimulationResult {
    double empiricalSuccess = 0.0;
    double stderrEstimate = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t wins = 0;
};

// Slofstra's CHSH(n) family: n questions for Alice, n(n-1) for Bob indexed by
// ordered pairs (i, j), i != j, in lexicographic column order.
XorGame chsh_n(Eigen::Index n);

// Column position of Bob's question (i, j) in chsh_n (1-based i, j).
Eigen::Index chsh_column(Eigen::Index n, Eigen::Index i, Eigen::Index j);

// Sum_{ij} G_ij <psi| A_i (x) B_j |psi>, without the game normalization check;
// building block for bias_of and for linearity tests.
double raw_bias(const RMat& matrix, const QuantumStrategy& strategy);

BiasValue bias_of(const QuantumStrategy& strategy, const XorGame& game);

// Monte Carlo play: questions drawn with probability |G_ij|, outcomes from the
// Born rule of the +-1 eigenprojectors, win when the outcome product matches
// sign(G_ij). Rounds are split over `partitions` blocks, each with its own
// seed stream, so the result depends only on (seed, partitions).
SimulationResult simulate_rounds(const QuantumStrategy& strategy, const XorGame& game,
                                 std::uint64_t rounds, std::int64_t seed,
                                 int partitions = 64, Exec exec = Exec::openmp);

}  // namespace xorgames
