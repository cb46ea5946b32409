#include "xorgames/sdpsolve.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "xorgames/rng.hpp"

namespace xorgames {

void VectorStrategy::validate() const {
    require(r >= 1, "vector strategy: rank must be >= 1");
    require(!xs.empty() && !ys.empty(), "vector strategy: empty vector list");
    for (const RVec& x : xs) {
        require(x.size() == r, "vector strategy: x dimension mismatch");
        require(std::abs(x.norm() - 1.0) <= 1e-10, "vector strategy: x not unit norm");
    }
    for (const RVec& y : ys) {
        require(y.size() == r, "vector strategy: y dimension mismatch");
        require(std::abs(y.norm() - 1.0) <= 1e-10, "vector strategy: y not unit norm");
    }
}

Eigen::Index default_rank(Eigen::Index nA, Eigen::Index nB) {
    Eigen::Index r = 1;
    while ((r + 1) * (r + 2) / 2 <= nA + nB) ++r;
    return std::min(r, std::min(nA, nB)) + 1;
}

double vector_objective(const RMat& matrix, const std::vector<RVec>& xs,
                        const std::vector<RVec>& ys) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < matrix.cols(); ++j)
            if (matrix(i, j) != 0.0) total += matrix(i, j) * xs[i].dot(ys[j]);
    return total;
}

namespace {

struct RestartResult {
    std::vector<RVec> xs, ys;
    double objective = -2.0;
    bool converged = false;
    std::vector<double> history;
};

RestartResult run_restart(const XorGame& game, Eigen::Index rank, int maxSweeps, double tol,
                          std::int64_t seed, int restartIndex) {
    RandomStream rng(seed, static_cast<std::uint64_t>(restartIndex), StreamRole::sdp_restart);
    const Eigen::Index nA = game.nA, nB = game.nB;

    auto random_unit = [&]() {
        RVec v(rank);
        for (Eigen::Index k = 0; k < rank; ++k) v(k) = rng.next_gauss();
        const double n = v.norm();
        if (n < 1e-300) return RVec(RVec::Unit(rank, 0));
        return RVec(v / n);
    };

    RestartResult res;
    res.xs.resize(nA);
    res.ys.resize(nB);
    for (Eigen::Index i = 0; i < nA; ++i) res.xs[i] = random_unit();
    for (Eigen::Index j = 0; j < nB; ++j) res.ys[j] = random_unit();

    double prev = vector_objective(game.matrix, res.xs, res.ys);
    res.history.push_back(prev);
    for (int sweep = 0; sweep < maxSweeps; ++sweep) {
        // x half-sweep: x_i <- normalize(sum_j G_ij y_j); zero gradient keeps x_i.
        for (Eigen::Index i = 0; i < nA; ++i) {
            RVec g = RVec::Zero(rank);
            for (Eigen::Index j = 0; j < nB; ++j)
                if (game.matrix(i, j) != 0.0) g += game.matrix(i, j) * res.ys[j];
            const double n = g.norm();
            if (n > 1e-300) res.xs[i] = g / n;
        }
        res.history.push_back(vector_objective(game.matrix, res.xs, res.ys));
        // y half-sweep.
        for (Eigen::Index j = 0; j < nB; ++j) {
            RVec g = RVec::Zero(rank);
            for (Eigen::Index i = 0; i < nA; ++i)
                if (game.matrix(i, j) != 0.0) g += game.matrix(i, j) * res.xs[i];
            const double n = g.norm();
            if (n > 1e-300) res.ys[j] = g / n;
        }
        const double obj = vector_objective(game.matrix, res.xs, res.ys);
        res.history.push_back(obj);
        if (obj - prev < tol) {
            res.converged = true;
            prev = obj;
            break;
        }
        prev = obj;
    }
    res.objective = prev;
    return res;
}

}  // namespace

VectorStrategy solve_bias(const XorGame& game, const SolveOptions& options) {
    game.validate();
    require(options.rank >= 0, "solve_bias: rank must be positive when given");
    require(options.maxSweeps >= 1, "solve_bias: maxSweeps must be >= 1");
    require(options.tol > 0.0, "solve_bias: tol must be positive");
    require(options.restarts >= 1, "solve_bias: restarts must be >= 1");
    const Eigen::Index rank =
        options.rank > 0 ? options.rank : default_rank(game.nA, game.nB);

    std::vector<RestartResult> results(options.restarts);
    if (options.exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int rs = 0; rs < options.restarts; ++rs)
            results[rs] = run_restart(game, rank, options.maxSweeps, options.tol,
                                      options.seed, rs);
    } else {
        for (int rs = 0; rs < options.restarts; ++rs)
            results[rs] = run_restart(game, rank, options.maxSweeps, options.tol,
                                      options.seed, rs);
    }

    // Argmax with lowest-restart-index tie-break.
    int best = 0;
    for (int rs = 1; rs < options.restarts; ++rs)
        if (results[rs].objective > results[best].objective) best = rs;

    VectorStrategy out;
    out.r = rank;
    out.xs = std::move(results[best].xs);
    out.ys = std::move(results[best].ys);
    out.objective = results[best].objective;
    out.converged = results[best].converged;
    out.history = std::move(results[best].history);
    return out;
}

double certify_upper(const XorGame& game) {
    game.validate();
    Eigen::JacobiSVD<RMat> solver(game.matrix);
    const double sigmaMax = solver.singularValues().size() ? solver.singularValues()(0) : 0.0;
    return 0.5 * static_cast<double>(game.nA + game.nB) * sigmaMax;
}

}  // namespace xorgames
