#include "xorgames/rounding.hpp"

#include <cmath>

#include "xorgames/clifford.hpp"
#include "xorgames/rng.hpp"

namespace xorgames {

double sample_sech(RandomStream& stream) {
    const double u = stream.next_open01();
    return (2.0 / M_PI) * std::log(std::tan(0.5 * M_PI * u));
}

StrategyVectors strategy_vectors(const QuantumStrategy& strategy) {
    strategy.validate();
    StrategyVectors out;
    out.xs.reserve(strategy.aliceObs.size());
    out.ys.reserve(strategy.bobObs.size());
    // <psi| M (x) Id as a row vector has components conj((M (x) Id)|psi>).
    for (const CMat& a : strategy.aliceObs) out.xs.push_back(apply_left(a, strategy.state).conjugate());
    for (const CMat& b : strategy.bobObs) out.ys.push_back(apply_right(b, strategy.state).conjugate());
    return out;
}

RVec realify(const CVec& v) {
    RVec out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

RoundingOutcome reduce_vectors(const StrategyVectors& vectors, const XorGame& game,
                               Eigen::Index d, std::int64_t seed, std::uint64_t trial) {
    require(d >= 1, "reduce: target dimension must be >= 1");
    require(game.nA == static_cast<Eigen::Index>(vectors.xs.size()) &&
                game.nB == static_cast<Eigen::Index>(vectors.ys.size()),
            "reduce: game shape does not match the strategy vectors");
    const Eigen::Index bigD = vectors.xs.empty() ? 0 : vectors.xs[0].size();
    require(bigD > 0, "reduce: empty strategy vectors");

    const std::size_t nx = vectors.xs.size(), ny = vectors.ys.size();
    std::vector<CVec> up(nx), vp(ny);
    int resamples = 0;
    // A projected vector can land exactly on zero (certain at d = 1 for
    // strategies whose vectors share two coordinates), so the resample loop
    // is capped; leftover zero vectors fall back to a fixed unit direction.
    constexpr int kMaxResamples = 16;
    bool degenerate = false;
    for (std::uint64_t attempt = 0;; ++attempt) {
        RandomStream gstream(seed, trial, StreamRole::projection, attempt);
        // One quaternary sign matrix shared by Alice's and Bob's vectors.
        CMat g(d, bigD);
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index p = 0; p < bigD; ++p) g(k, p) = gstream.next_quaternary();
        g /= std::sqrt(static_cast<double>(d));
        degenerate = false;
        for (std::size_t s = 0; s < nx; ++s) {
            up[s] = g * vectors.xs[s];
            if (up[s].norm() < 1e-14) degenerate = true;
        }
        for (std::size_t t = 0; t < ny; ++t) {
            vp[t] = g * vectors.ys[t];
            if (vp[t].norm() < 1e-14) degenerate = true;
        }
        if (!degenerate || resamples >= kMaxResamples) break;
        ++resamples;
    }
    if (degenerate) {
        for (CVec& u : up)
            if (u.norm() < 1e-14) u = CVec::Unit(d, 0);
        for (CVec& v : vp)
            if (v.norm() < 1e-14) v = CVec::Unit(d, 0);
    }

    RandomStream astream(seed, trial, StreamRole::twist);
    const double alpha = sample_sech(astream);

    // Normalize and twist: Alice gets |.|^{+i alpha}, Bob |.|^{-i alpha}, so the
    // phases combine as (|x'| |y'|)^{i alpha} inside the objective.
    auto twist = [alpha](CVec& v, double sign) {
        const double n = v.norm();
        const double phase = sign * alpha * std::log(n);
        v *= std::polar(1.0 / n, phase);
    };
    for (CVec& u : up) twist(u, +1.0);
    for (CVec& v : vp) twist(v, -1.0);

    RoundingOutcome out;
    out.targetD = d;
    out.alpha = alpha;
    out.seed = seed;
    out.trial = trial;
    out.resamples = resamples;

    out.reduced.r = 2 * d;
    out.reduced.xs.reserve(nx);
    out.reduced.ys.reserve(ny);
    for (const CVec& u : up) out.reduced.xs.push_back(realify(u));
    for (const CVec& v : vp) out.reduced.ys.push_back(realify(v));
    out.objective = vector_objective(game.matrix, out.reduced.xs, out.reduced.ys);
    out.reduced.objective = out.objective;
    return out;
}

RoundingOutcome reduce_strategy(const QuantumStrategy& strategy, const XorGame& game,
                                Eigen::Index d, std::int64_t seed, std::uint64_t trial) {
    game.validate();
    require(game.nA == static_cast<Eigen::Index>(strategy.aliceObs.size()) &&
                game.nB == static_cast<Eigen::Index>(strategy.bobObs.size()),
            "reduce: game shape does not match the strategy");
    return reduce_vectors(strategy_vectors(strategy), game, d, seed, trial);
}

RoundingSweep rounding_sweep(const QuantumStrategy& strategy, const XorGame& game,
                             Eigen::Index d, std::uint64_t trials, std::int64_t seed,
                             Exec exec) {
    require(trials >= 1, "rounding_sweep: trials must be >= 1");
    game.validate();
    const StrategyVectors vectors = strategy_vectors(strategy);

    RoundingSweep sweep;
    sweep.outcomes.resize(trials);
    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(trials); ++tr)
            sweep.outcomes[tr] =
                reduce_vectors(vectors, game, d, seed, static_cast<std::uint64_t>(tr));
    } else {
        for (std::uint64_t tr = 0; tr < trials; ++tr)
            sweep.outcomes[tr] = reduce_vectors(vectors, game, d, seed, tr);
    }

    // Fixed-order aggregation; argmax breaks ties towards the lowest trial.
    double sum = 0.0, sumsq = 0.0;
    std::size_t best = 0;
    for (std::size_t tr = 0; tr < trials; ++tr) {
        const double obj = sweep.outcomes[tr].objective;
        sum += obj;
        sumsq += obj * obj;
        if (obj > sweep.outcomes[best].objective) best = tr;
    }
    const double n = static_cast<double>(trials);
    sweep.meanObjective = sum / n;
    const double var = std::max(0.0, sumsq / n - sweep.meanObjective * sweep.meanObjective);
    sweep.stderrObjective = trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    sweep.bestTrial = best;
    return sweep;
}

QuantumStrategy reduce_to_quantum(const QuantumStrategy& strategy, const XorGame& game,
                                  Eigen::Index d, std::uint64_t trials, std::int64_t seed,
                                  Exec exec) {
    require_capacity(d <= 12, "reduce_to_quantum: dimension 2^d exceeds the matrix cap");
    RoundingSweep sweep = rounding_sweep(strategy, game, d, trials, seed, exec);
    return tsirelson_lift(sweep.outcomes[sweep.bestTrial].reduced);
}

}  // namespace xorgames
