#include "xorgames/rigidity.hpp"

#include <algorithm>
#include <cmath>

namespace xorgames {

namespace {

constexpr double kOptimalBias = 0.70710678118654752440;  // sqrt(2)/2

void require_chsh_shape(const QuantumStrategy& strategy, Eigen::Index n) {
    require(n >= 2, "chsh shape: n must be >= 2");
    require(static_cast<Eigen::Index>(strategy.aliceObs.size()) == n,
            "chsh shape: expected n Alice observables");
    require(static_cast<Eigen::Index>(strategy.bobObs.size()) == n * (n - 1),
            "chsh shape: expected n(n-1) Bob observables");
}

double state_norm_left(const CMat& m, const BipartiteState& state) {
    return apply_left(m, state).norm();
}

double state_norm_right(const CMat& m, const BipartiteState& state) {
    return apply_right(m, state).norm();
}

CMat anticommutator(const CMat& a, const CMat& b) { return a * b + b * a; }
CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

}  // namespace

std::pair<CMat, CMat> tilde_observables(const CMat& bij, const CMat& bji) {
    require(is_observable(bij, 1e-9) && is_observable(bji, 1e-9),
            "tilde_observables: inputs must be observables within 1e-9");
    return {signum_completed(bij + bji), signum_completed(bij - bji)};
}

RigidityReport embedded_chsh_report(const QuantumStrategy& strategy, Eigen::Index n,
                                    Exec exec) {
    require_chsh_shape(strategy, n);
    strategy.validate();

    RigidityReport report;
    report.n = n;
    const Eigen::Index npairs = n * (n - 1) / 2;
    report.pairs.resize(npairs);

    std::vector<std::pair<Eigen::Index, Eigen::Index>> index(npairs);
    {
        Eigen::Index p = 0;
        for (Eigen::Index i = 1; i <= n; ++i)
            for (Eigen::Index j = i + 1; j <= n; ++j) index[p++] = {i, j};
    }

    auto evaluate_pair = [&](Eigen::Index p) {
        const auto [i, j] = index[p];
        const CMat& ai = strategy.aliceObs[i - 1];
        const CMat& aj = strategy.aliceObs[j - 1];
        const CMat& bij = strategy.bobObs[chsh_column(n, i, j)];
        const CMat& bji = strategy.bobObs[chsh_column(n, j, i)];
        RigidityReport::Pair out;
        out.i = i;
        out.j = j;
        // Conditional CHSH bias of the embedded game on questions {i, j};
        // the sign pattern matches the game matrix columns (i,j) and (j,i).
        out.bias = 0.25 * (sandwich(ai, bij, strategy.state).real() +
                           sandwich(aj, bij, strategy.state).real() +
                           sandwich(ai, bji, strategy.state).real() -
                           sandwich(aj, bji, strategy.state).real());
        out.epsilon = 1.0 - out.bias / kOptimalBias;
        auto [tij, tji] = tilde_observables(bij, bji);
        out.aliceAnticomm = state_norm_left(anticommutator(ai, aj), strategy.state);
        out.bobAnticomm = state_norm_right(anticommutator(tij, tji), strategy.state);
        out.crossAi =
            (apply_left(ai, strategy.state) - apply_right(tij, strategy.state)).norm();
        out.crossAj =
            (apply_left(aj, strategy.state) - apply_right(tji, strategy.state)).norm();
        report.pairs[p] = out;
    };

    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (Eigen::Index p = 0; p < npairs; ++p) evaluate_pair(p);
    } else {
        for (Eigen::Index p = 0; p < npairs; ++p) evaluate_pair(p);
    }

    double biasSum = 0.0, epsSum = 0.0, aaSum = 0.0, bbSum = 0.0, crossSum = 0.0;
    for (const auto& pr : report.pairs) {
        biasSum += pr.bias;
        epsSum += pr.epsilon;
        aaSum += pr.aliceAnticomm;
        bbSum += pr.bobAnticomm;
        crossSum += 0.5 * (pr.crossAi + pr.crossAj);
    }
    const double np = static_cast<double>(npairs);
    report.bias = biasSum / np;
    report.epsilon = 1.0 - report.bias / kOptimalBias;
    report.meanPairEpsilon = epsSum / np;
    report.meanAliceAnticomm = aaSum / np;
    report.meanBobAnticomm = bbSum / np;
    report.meanCross = crossSum / np;
    report.meanAnticomm = 0.5 * (report.meanAliceAnticomm + report.meanBobAnticomm);
    return report;
}

namespace {

void require_balanced_observable(const CMat& m, const char* what) {
    require(m.rows() % 2 == 0, std::string(what) + ": dimension must be even");
    require(is_observable(m, 1e-9), std::string(what) + ": not an observable within 1e-9");
    require(std::abs(m.trace().real()) <= 1e-8 && std::abs(m.trace().imag()) <= 1e-8,
            std::string(what) + ": not balanced (trace 0 within 1e-8)");
}

}  // namespace

CMat exact_anticommute_repair(const CMat& x, const CMat& z) {
    require_balanced_observable(x, "repair: x");
    require_balanced_observable(z, "repair: z");
    require(x.rows() == z.rows(), "repair: x and z must share a dimension");

    const Eigen::Index d = x.rows();
    const Eigen::Index h = d / 2;

    // Basis where x = diag(Id, -Id): descending eigenvalues put the +1 space first.
    HermEig xe = herm_eig(x);
    Eigen::Index positives = 0;
    for (Eigen::Index k = 0; k < d; ++k)
        if (xe.values(k) > 0) ++positives;
    require(positives == h, "repair: x eigenvalue split is not balanced");
    const CMat& u1 = xe.vectors;

    const CMat w = u1.adjoint() * z * u1;
    const CMat c = w.topRightCorner(h, h);

    // Diagonalize the off-diagonal block; the block-diagonal change of basis
    // commutes with diag(Id, -Id).
    SvdResult cs = svd(c);
    CMat inner = CMat::Zero(d, d);
    inner.topRightCorner(h, h) = cs.u * cs.v.adjoint();
    inner.bottomLeftCorner(h, h) = cs.v * cs.u.adjoint();

    CMat out = u1 * inner * u1.adjoint();
    return 0.5 * (out + out.adjoint()).eval();
}

CMat exact_anticommute_repair(const CMat& x, const CMat& z, const BipartiteState& state) {
    require(state.dimA == x.rows(), "repair: state A-side dimension mismatch");
    require_normalized(state, 1e-10);
    return exact_anticommute_repair(x, z);
}

QuantumStrategy balance_pad(const QuantumStrategy& strategy) {
    strategy.validate();
    const Eigen::Index dA = strategy.dimA(), dB = strategy.dimB();
    require_capacity(2 * dA <= kDimCap && 2 * dB <= kDimCap,
                     "balance_pad: doubled dimension exceeds cap");

    auto pad = [](const CMat& m) {
        CMat out = CMat::Zero(2 * m.rows(), 2 * m.cols());
        out.topLeftCorner(m.rows(), m.cols()) = m;
        out.bottomRightCorner(m.rows(), m.cols()) = -m;
        return out;
    };

    QuantumStrategy out;
    out.aliceObs.reserve(strategy.aliceObs.size());
    out.bobObs.reserve(strategy.bobObs.size());
    for (const CMat& a : strategy.aliceObs) out.aliceObs.push_back(pad(a));
    for (const CMat& b : strategy.bobObs) out.bobObs.push_back(pad(b));

    out.state.dimA = 2 * dA;
    out.state.dimB = 2 * dB;
    out.state.amplitudes = CVec::Zero(4 * dA * dB);
    for (Eigen::Index a = 0; a < dA; ++a)
        for (Eigen::Index b = 0; b < dB; ++b)
            out.state.amplitudes(a * out.state.dimB + b) =
                strategy.state.amplitudes(a * dB + b);
    return out;
}

QubitPairs build_qubit_pairs(const QuantumStrategy& strategy, Eigen::Index n, Exec exec) {
    require(n >= 3, "build_qubit_pairs: n must be >= 3");
    require_chsh_shape(strategy, n);
    strategy.validate();
    for (const CMat& a : strategy.aliceObs)
        require_balanced_observable(a, "build_qubit_pairs: Alice observable");

    const BipartiteState& psi = strategy.state;

    // Bob's proxies for Alice's observables: Atilde[i][j] approximates A_i,
    // extracted from the pair {i, j}; the consensus pick minimizes the
    // cross-consistency residual.
    std::vector<std::vector<CMat>> tilde(n, std::vector<CMat>(n));
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = i + 1; j <= n; ++j) {
            auto [tij, tji] = tilde_observables(strategy.bobObs[chsh_column(n, i, j)],
                                                strategy.bobObs[chsh_column(n, j, i)]);
            tilde[i - 1][j - 1] = std::move(tij);
            tilde[j - 1][i - 1] = std::move(tji);
        }
    }
    std::vector<CMat> proxy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double res =
                (apply_left(strategy.aliceObs[i], psi) - apply_right(tilde[i][j], psi)).norm();
            if (best < 0.0 || res < best) {
                best = res;
                proxy[i] = tilde[i][j];
            }
        }
        require_balanced_observable(proxy[i], "build_qubit_pairs: Bob proxy");
    }

    QubitPairs qp;
    qp.m = n / 3;
    qp.aliceX.resize(qp.m);
    qp.aliceZ.resize(qp.m);
    qp.bobX.resize(qp.m);
    qp.bobZ.resize(qp.m);
    std::vector<double> shift1(qp.m, 0.0), shift2(qp.m, 0.0);

    const cplx iunit(0.0, 1.0);
    auto build_one = [&](Eigen::Index k) {
        const Eigen::Index a = 3 * k, b = 3 * k + 1, c = 3 * k + 2;  // 0-based triple
        // Alice: repair the outer observables against the middle one, combine,
        // then repair the combined pair.
        CMat ta = exact_anticommute_repair(strategy.aliceObs[b], strategy.aliceObs[a]);
        CMat tc = exact_anticommute_repair(strategy.aliceObs[b], strategy.aliceObs[c]);
        shift1[k] += 0.5 * (state_norm_left(CMat(strategy.aliceObs[a] - ta), psi) +
                            state_norm_left(CMat(strategy.aliceObs[c] - tc), psi));
        CMat xk = iunit * ta * strategy.aliceObs[b];
        CMat zt = iunit * strategy.aliceObs[b] * tc;
        xk = 0.5 * (xk + xk.adjoint()).eval();
        zt = 0.5 * (zt + zt.adjoint()).eval();
        CMat zk = exact_anticommute_repair(xk, zt);
        shift2[k] += 0.5 * state_norm_left(CMat(zt - zk), psi);
        qp.aliceX[k] = std::move(xk);
        qp.aliceZ[k] = std::move(zk);

        // Bob: the same construction with products reversed, so that proxies
        // of transposed operators stay transpose-consistent.
        CMat tpa = exact_anticommute_repair(proxy[b], proxy[a]);
        CMat tpc = exact_anticommute_repair(proxy[b], proxy[c]);
        shift1[k] += 0.5 * (state_norm_right(CMat(proxy[a] - tpa), psi) +
                            state_norm_right(CMat(proxy[c] - tpc), psi));
        CMat xpk = iunit * proxy[b] * tpa;
        CMat zpt = iunit * tpc * proxy[b];
        xpk = 0.5 * (xpk + xpk.adjoint()).eval();
        zpt = 0.5 * (zpt + zpt.adjoint()).eval();
        CMat zpk = exact_anticommute_repair(xpk, zpt);
        shift2[k] += 0.5 * state_norm_right(CMat(zpt - zpk), psi);
        qp.bobX[k] = std::move(xpk);
        qp.bobZ[k] = std::move(zpk);
    };

    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (Eigen::Index k = 0; k < qp.m; ++k) build_one(k);
    } else {
        for (Eigen::Index k = 0; k < qp.m; ++k) build_one(k);
    }

    qp.stage1Shift = 0.0;
    qp.stage2Shift = 0.0;
    for (Eigen::Index k = 0; k < qp.m; ++k) {
        qp.stage1Shift += shift1[k] / (2.0 * static_cast<double>(qp.m));
        qp.stage2Shift += shift2[k] / (2.0 * static_cast<double>(qp.m));
    }

    qp.residuals = RMat::Zero(qp.m, qp.m);
    for (Eigen::Index k = 0; k < qp.m; ++k) {
        const CMat* pk[2] = {&qp.aliceX[k], &qp.aliceZ[k]};
        const CMat* ppk[2] = {&qp.bobX[k], &qp.bobZ[k]};
        double diag = 0.0;
        for (int p = 0; p < 2; ++p) {
            const CVec lhs = apply_left(*pk[p], psi);
            const CVec rhs = apply_right(*ppk[p], psi);
            diag = std::max(diag, (lhs - rhs).norm());
        }
        qp.residuals(k, k) = diag;
        for (Eigen::Index l = k + 1; l < qp.m; ++l) {
            const CMat* ql[2] = {&qp.aliceX[l], &qp.aliceZ[l]};
            const CMat* qpl[2] = {&qp.bobX[l], &qp.bobZ[l]};
            double worst = 0.0;
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) {
                    worst = std::max(worst,
                                     state_norm_left(commutator(*pk[p], *ql[q]), psi));
                    worst = std::max(worst,
                                     state_norm_right(commutator(*ppk[p], *qpl[q]), psi));
                }
            qp.residuals(k, l) = worst;
            qp.residuals(l, k) = worst;
        }
    }
    return qp;
}

namespace {

double subset_max_residual(const RMat& res, const std::vector<Eigen::Index>& s) {
    double worst = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            worst = std::max(worst, res(s[a], s[b]));
    return worst;
}

}  // namespace

SubsetResult select_good_subset_exact(const RMat& res, Eigen::Index r) {
    const Eigen::Index m = res.rows();
    std::vector<Eigen::Index> current(r);
    for (Eigen::Index k = 0; k < r; ++k) current[k] = k;

    SubsetResult best;
    best.indices = current;
    best.maxResidual = subset_max_residual(res, current);

    // Enumerate combinations in lexicographic order; strict improvement keeps
    // the lexicographically smallest optimum.
    while (true) {
        Eigen::Index k = r - 1;
        while (k >= 0 && current[k] == m - r + k) --k;
        if (k < 0) break;
        ++current[k];
        for (Eigen::Index l = k + 1; l < r; ++l) current[l] = current[l - 1] + 1;
        const double val = subset_max_residual(res, current);
        if (val < best.maxResidual) {
            best.indices = current;
            best.maxResidual = val;
        }
    }
    return best;
}

SubsetResult select_good_subset_greedy(const RMat& res, Eigen::Index r, double threshold) {
    const Eigen::Index m = res.rows();

    auto survivors_for = [&](double t) {
        std::vector<bool> alive(m, true);
        Eigen::Index aliveCount = m;
        while (true) {
            // Degrees on the thresholded graph.
            Eigen::Index worstV = -1, worstDeg = 0;
            double worstRow = -1.0;
            for (Eigen::Index v = 0; v < m; ++v) {
                if (!alive[v]) continue;
                Eigen::Index deg = 0;
                double row = 0.0;
                for (Eigen::Index u = 0; u < m; ++u) {
                    if (u == v || !alive[u]) continue;
                    if (res(v, u) > t) ++deg;
                    row += res(v, u);
                }
                if (deg > worstDeg || (deg == worstDeg && deg > 0 && row > worstRow)) {
                    worstDeg = deg;
                    worstV = v;
                    worstRow = row;
                }
            }
            if (worstDeg == 0) break;  // edgeless
            alive[worstV] = false;
            --aliveCount;
        }
        std::vector<Eigen::Index> out;
        out.reserve(aliveCount);
        for (Eigen::Index v = 0; v < m; ++v)
            if (alive[v]) out.push_back(v);
        return out;
    };

    std::vector<double> candidates;
    if (threshold > 0.0) {
        candidates.push_back(threshold);
    } else {
        candidates.push_back(0.0);
        for (Eigen::Index k = 0; k < m; ++k)
            for (Eigen::Index l = k + 1; l < m; ++l) candidates.push_back(res(k, l));
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    }

    for (double t : candidates) {
        auto alive = survivors_for(t);
        if (static_cast<Eigen::Index>(alive.size()) >= r) {
            SubsetResult out;
            out.indices.assign(alive.begin(), alive.begin() + r);
            out.maxResidual = subset_max_residual(res, out.indices);
            return out;
        }
    }
    // Even the loosest threshold over-deleted; fall back to smallest row sums.
    std::vector<Eigen::Index> order(m);
    for (Eigen::Index v = 0; v < m; ++v) order[v] = v;
    std::vector<double> rows(m, 0.0);
    for (Eigen::Index v = 0; v < m; ++v)
        for (Eigen::Index u = 0; u < m; ++u)
            if (u != v) rows[v] += res(v, u);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return rows[a] < rows[b]; });
    SubsetResult out;
    out.indices.assign(order.begin(), order.begin() + r);
    std::sort(out.indices.begin(), out.indices.end());
    out.maxResidual = subset_max_residual(res, out.indices);
    return out;
}

SubsetResult select_good_subset(const RMat& res, Eigen::Index r, double threshold) {
    require(res.rows() == res.cols() && res.rows() >= 1,
            "select_good_subset: square residual matrix required");
    require(r >= 1, "select_good_subset: r must be >= 1");
    require(r <= res.rows(), "select_good_subset: r exceeds the pair count");
    if (res.rows() <= 12) return select_good_subset_exact(res, r);
    return select_good_subset_greedy(res, r, threshold);
}

double entanglement_entropy(const BipartiteState& state) {
    require_normalized(state, 1e-10);
    HermEig eig = herm_eig(partial_trace(state, Keep::A));
    double s = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double l = eig.values(k);
        if (l > 1e-300) s -= l * std::log2(l);
    }
    return s;
}

double fannes_lower_bound(Eigen::Index r, double delta) {
    require(delta > 0.0 && delta < 1.0, "fannes_lower_bound: delta must lie in (0,1)");
    require(r >= 0, "fannes_lower_bound: r must be nonnegative");
    return static_cast<double>(r) - 4.0 * delta * static_cast<double>(r) +
           2.0 * delta * std::log2(delta);
}

EntropyCertificate certify_entropy(const QuantumStrategy& strategy, Eigen::Index n,
                                   Eigen::Index r, double delta, Exec exec) {
    require_chsh_shape(strategy, n);
    require(n >= 3, "certify_entropy: n must be >= 3");

    RigidityReport report = embedded_chsh_report(strategy, n, exec);

    auto balanced = [](const QuantumStrategy& s) {
        if (s.dimA() % 2 != 0 || s.dimB() % 2 != 0) return false;
        for (const CMat& a : s.aliceObs)
            if (std::abs(a.trace().real()) > 1e-8) return false;
        for (const CMat& b : s.bobObs)
            if (std::abs(b.trace().real()) > 1e-8) return false;
        return true;
    };
    const QuantumStrategy padded = balanced(strategy) ? strategy : balance_pad(strategy);
    QubitPairs qp = build_qubit_pairs(padded, n, exec);

    EntropyCertificate cert;
    cert.r = (r == 0) ? qp.m : r;
    require(cert.r >= 1 && cert.r <= qp.m, "certify_entropy: r must lie in [1, floor(n/3)]");
    cert.delta = delta;

    SubsetResult subset = select_good_subset(qp.residuals, cert.r, 0.0);
    cert.subset = subset.indices;
    cert.eta = subset.maxResidual;
    cert.maxConsistency = 0.0;
    for (Eigen::Index v : subset.indices)
        cert.maxConsistency = std::max(cert.maxConsistency, qp.residuals(v, v));

    cert.entropyBits = entanglement_entropy(strategy.state);
    cert.fannesLowerBound = fannes_lower_bound(cert.r, delta);
    cert.epsilon = report.epsilon;
    return cert;
}

}  // namespace xorgames
