#pragma once

#include "xorgames/game.hpp"
#include "xorgames/sdpsolve.hpp"

namespace xorgames {

// Pairwise anti-commuting Hermitian generators with gamma^2 = Id and
// tr(gamma_k gamma_l) = dim * delta_kl.
struct CliffordBasis {
    Eigen::Index r = 0;
    Eigen::Index dim = 0;  // 2^floor(r/2)
    std::vector<CMat> generators;
};

// Jordan-Wigner generators on floor(r/2) qubits; odd r appends the parity
// string Z^(x)q as the last generator.
CliffordBasis clifford_generators(Eigen::Index r);

// Lift unit vectors to observables on a maximally entangled state so that
// <psi| A_i (x) B_j |psi> = x_i . y_j exactly: A_i = sum_k (x_i)_k gamma_k,
// B_j = (sum_k (y_j)_k gamma_k)^T.
QuantumStrategy tsirelson_lift(const VectorStrategy& vstrat);

// Optimal CHSH(n) strategy: A_i = gamma_i, B_ij = ((-1)^[j<i] A_i^T + A_j^T)/sqrt(2),
// maximally entangled state in dimension 2^floor(n/2).
QuantumStrategy slofstra_strategy(Eigen::Index n);

// Noisy variant driven by one detuning angle t: each EPR pair's Schmidt angle
// becomes pi/4 - t, Alice's generators are rotated pairwise by t, and Bob's
// combinations are re-projected onto observables. t = 0 reproduces
// slofstra_strategy exactly; residuals and bias deficit vary smoothly in t.
QuantumStrategy detuned_slofstra_strategy(Eigen::Index n, double t);

}  // namespace xorgames
