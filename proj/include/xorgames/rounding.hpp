#pragma once

#include "xorgames/exec.hpp"
#include "xorgames/game.hpp"
#include "xorgames/rng.hpp"
#include "xorgames/sdpsolve.hpp"

namespace xorgames {

// One randomized dimension-reduction trial: the reduced real vector strategy
// (dimension 2*targetD after realification), the sampled twist parameter, and
// bookkeeping for reproducibility.
struct RoundingOutcome {
    VectorStrategy reduced;
    Eigen::Index targetD = 0;
    double alpha = 0.0;
    std::int64_t seed = 0;
    std::uint64_t trial = 0;
    int resamples = 0;
    double objective = 0.0;
};

// Inverse-CDF sample from the hyperbolic secant distribution
// (density sech(pi a / 2) / 2, characteristic function sech(t)).
double sample_sech(RandomStream& stream);

// Objective-preserving realification: Re(u . conj(v)) = realify(u) . realify(v)
// exactly, so a complex solution pairs into a real one of twice the dimension.
RVec realify(const CVec& v);

// Row vectors x_s = <psi| A_s (x) Id and y_t = <psi| Id (x) B_t, each of unit
// norm, with sum_st G_st x_s . conj(y_t) equal to the strategy bias.
struct StrategyVectors {
    std::vector<CVec> xs;
    std::vector<CVec> ys;
};
StrategyVectors strategy_vectors(const QuantumStrategy& strategy);

// Single trial: project onto d complex dimensions with quaternary signs,
// twist by |.|^{i alpha}, normalize, and realify to 2d real unit vectors.
// The objective is preserved exactly by the realification.
RoundingOutcome reduce_strategy(const QuantumStrategy& strategy, const XorGame& game,
                                Eigen::Index d, std::int64_t seed, std::uint64_t trial = 0);

// Same, starting from precomputed strategy vectors (the hot path for sweeps).
RoundingOutcome reduce_vectors(const StrategyVectors& vectors, const XorGame& game,
                               Eigen::Index d, std::int64_t seed, std::uint64_t trial);

struct RoundingSweep {
    std::vector<RoundingOutcome> outcomes;  // trial order
    double meanObjective = 0.0;
    double stderrObjective = 0.0;
    std::size_t bestTrial = 0;
};
RoundingSweep rounding_sweep(const QuantumStrategy& strategy, const XorGame& game,
                             Eigen::Index d, std::uint64_t trials, std::int64_t seed,
                             Exec exec = Exec::openmp);

// Best-of-trials reduction lifted back to observables of local dimension 2^d.
QuantumStrategy reduce_to_quantum(const QuantumStrategy& strategy, const XorGame& game,
                                  Eigen::Index d, std::uint64_t trials, std::int64_t seed,
                                  Exec exec = Exec::openmp);

}  // namespace xorgames
