#include "xorgames/game.hpp"

#include <cmath>

#include "xorgames/rng.hpp"

namespace xorgames {

void XorGame::validate() const {
    require(nA >= 1 && nB >= 1, "game: question counts must be positive");
    require(matrix.rows() == nA && matrix.cols() == nB, "game: matrix shape mismatch");
    if (!matrix.allFinite()) throw ContractError("game: non-finite entries");
    require(std::abs(matrix.cwiseAbs().sum() - 1.0) <= 1e-12,
            "game: |entries| must sum to 1");
    require(aliceLabels.empty() || static_cast<Eigen::Index>(aliceLabels.size()) == nA,
            "game: alice label count mismatch");
    require(bobLabels.empty() || static_cast<Eigen::Index>(bobLabels.size()) == nB,
            "game: bob label count mismatch");
}

void QuantumStrategy::validate(double obsTol) const {
    require_normalized(state);
    require(!aliceObs.empty() && !bobObs.empty(), "strategy: empty observable list");
    for (const CMat& a : aliceObs) {
        require(a.rows() == state.dimA && a.cols() == state.dimA,
                "strategy: Alice observable dim mismatch");
        require(is_observable(a, obsTol),
                "strategy: Alice operator is not an observable (Hermitian, squares to Id)");
    }
    for (const CMat& b : bobObs) {
        require(b.rows() == state.dimB && b.cols() == state.dimB,
                "strategy: Bob observable dim mismatch");
        require(is_observable(b, obsTol),
                "strategy: Bob operator is not an observable (Hermitian, squares to Id)");
    }
}

Eigen::Index chsh_column(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    require(i >= 1 && i <= n && j >= 1 && j <= n && i != j, "chsh_column: bad pair");
    return (i - 1) * (n - 1) + (j - 1) - (j > i ? 1 : 0);
}

XorGame chsh_n(Eigen::Index n) {
    require(n >= 2, "chsh_n: n must be >= 2");
    require_capacity(n * (n - 1) <= kDimCap, "chsh_n: n(n-1) exceeds the matrix cap");
    XorGame g;
    g.nA = n;
    g.nB = n * (n - 1);
    g.matrix = RMat::Zero(g.nA, g.nB);
    const double w = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(n - 1));
    g.aliceLabels.reserve(n);
    for (Eigen::Index k = 1; k <= n; ++k) g.aliceLabels.push_back(std::to_string(k));
    g.bobLabels.resize(g.nB);
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            if (i == j) continue;
            const Eigen::Index col = chsh_column(n, i, j);
            g.bobLabels[col] = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            // Nonzero only in rows i and j; negative exactly when k = i > j.
            g.matrix(i - 1, col) = (i > j) ? -w : w;
            g.matrix(j - 1, col) = w;
        }
    }
    return g;
}

double raw_bias(const RMat& matrix, const QuantumStrategy& strategy) {
    require(matrix.rows() == static_cast<Eigen::Index>(strategy.aliceObs.size()) &&
                matrix.cols() == static_cast<Eigen::Index>(strategy.bobObs.size()),
            "bias: game shape does not match the strategy");
    double total = 0.0;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            const double gij = matrix(i, j);
            if (gij == 0.0) continue;
            total += gij * sandwich(strategy.aliceObs[i], strategy.bobObs[j], strategy.state).real();
        }
    }
    return total;
}

BiasValue bias_of(const QuantumStrategy& strategy, const XorGame& game) {
    game.validate();
    strategy.validate();
    BiasValue out;
    out.bias = raw_bias(game.matrix, strategy);
    out.successProbability = 0.5 * (1.0 + out.bias);
    return out;
}

namespace {

// Outcome distribution over (a, b) in {+1, -1}^2 for one question pair,
// from the sign-grouped eigenprojectors of the two observables.
struct PairDistribution {
    double p[4];  // order: (+,+), (+,-), (-,+), (-,-)
};

CMat positive_projector(const CMat& obs) {
    HermEig eig = herm_eig(obs);
    const double tau = kKernelTolScale * (eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
    CMat p = CMat::Zero(obs.rows(), obs.cols());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        if (eig.values(k) > tau) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
    return p;
}

struct QuestionTable {
    // Cells with |G_ij| > 0, cumulative probabilities for inverse-CDF draws.
    std::vector<Eigen::Index> cellI, cellJ;
    std::vector<double> cumulative;
    std::vector<int> winSign;  // sign(G_ij)
    std::vector<PairDistribution> dist;
};

QuestionTable build_table(const QuantumStrategy& strategy, const XorGame& game) {
    QuestionTable t;
    std::vector<CMat> aliceP(strategy.aliceObs.size()), bobP(strategy.bobObs.size());
    for (size_t i = 0; i < strategy.aliceObs.size(); ++i)
        aliceP[i] = positive_projector(strategy.aliceObs[i]);
    for (size_t j = 0; j < strategy.bobObs.size(); ++j)
        bobP[j] = positive_projector(strategy.bobObs[j]);

    double acc = 0.0;
    const CMat idA = CMat::Identity(strategy.dimA(), strategy.dimA());
    const CMat idB = CMat::Identity(strategy.dimB(), strategy.dimB());
    for (Eigen::Index i = 0; i < game.nA; ++i) {
        for (Eigen::Index j = 0; j < game.nB; ++j) {
            const double gij = game.matrix(i, j);
            if (gij == 0.0) continue;
            acc += std::abs(gij);
            t.cellI.push_back(i);
            t.cellJ.push_back(j);
            t.cumulative.push_back(acc);
            t.winSign.push_back(gij > 0 ? 1 : -1);
            const CMat& pa = aliceP[i];
            const CMat& pb = bobP[j];
            PairDistribution d;
            d.p[0] = std::max(0.0, sandwich(pa, pb, strategy.state).real());
            d.p[1] = std::max(0.0, sandwich(pa, CMat(idB - pb), strategy.state).real());
            d.p[2] = std::max(0.0, sandwich(CMat(idA - pa), pb, strategy.state).real());
            d.p[3] = std::max(0.0, 1.0 - d.p[0] - d.p[1] - d.p[2]);
            t.dist.push_back(d);
        }
    }
    t.cumulative.back() = 1.0;  // guard the final bin against round-off
    return t;
}

std::uint64_t play_partition(const QuestionTable& table, std::uint64_t rounds,
                             std::int64_t seed, int partition) {
    RandomStream rng(seed, static_cast<std::uint64_t>(partition), StreamRole::simulate);
    std::uint64_t wins = 0;
    const size_t cells = table.cumulative.size();
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const double uq = rng.next_unit();
        size_t c = 0;
        while (c + 1 < cells && uq >= table.cumulative[c]) ++c;
        const PairDistribution& d = table.dist[c];
        const double uo = rng.next_unit();
        int outcome;  // product a*b
        if (uo < d.p[0]) outcome = 1;
        else if (uo < d.p[0] + d.p[1]) outcome = -1;
        else if (uo < d.p[0] + d.p[1] + d.p[2]) outcome = -1;
        else outcome = 1;
        if (outcome == table.winSign[c]) ++wins;
    }
    return wins;
}

}  // namespace

SimulationResult simulate_rounds(const QuantumStrategy& strategy, const XorGame& game,
                                 std::uint64_t rounds, std::int64_t seed, int partitions,
                                 Exec exec) {
    require(rounds >= 1, "simulate_rounds: rounds must be >= 1");
    require(partitions >= 1, "simulate_rounds: partitions must be >= 1");
    game.validate();
    strategy.validate();
    require(game.nA == static_cast<Eigen::Index>(strategy.aliceObs.size()) &&
                game.nB == static_cast<Eigen::Index>(strategy.bobObs.size()),
            "simulate_rounds: game shape does not match the strategy");
    const QuestionTable table = build_table(strategy, game);

    const int nparts = static_cast<int>(std::min<std::uint64_t>(partitions, rounds));
    std::vector<std::uint64_t> wins(nparts, 0);
    const std::uint64_t base = rounds / nparts;
    const std::uint64_t rem = rounds % nparts;
    auto partition_rounds = [&](int p) {
        return base + (static_cast<std::uint64_t>(p) < rem ? 1 : 0);
    };

    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int p = 0; p < nparts; ++p)
            wins[p] = play_partition(table, partition_rounds(p), seed, p);
    } else {
        for (int p = 0; p < nparts; ++p)
            wins[p] = play_partition(table, partition_rounds(p), seed, p);
    }

    SimulationResult out;
    out.rounds = rounds;
    for (int p = 0; p < nparts; ++p) out.wins += wins[p];
    out.empiricalSuccess = static_cast<double>(out.wins) / static_cast<double>(rounds);
    out.stderrEstimate = std::sqrt(out.empiricalSuccess * (1.0 - out.empiricalSuccess) /
                                   static_cast<double>(rounds));
    return out;
}

}  // namespace xorgames
