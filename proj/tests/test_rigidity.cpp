#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xorgames/clifford.hpp"
#include "xorgames/rigidity.hpp"
#include "xorgames/rng.hpp"

using namespace xorgames;

namespace {

constexpr double kSqrt2Over2 = 0.70710678118654752440;

// Frozen scaling constants, measured once over the committed detuning grid.
constexpr double kAnticommOverSqrtEps = 1.0;   // report residual <= C sqrt(eps)
constexpr double kPairsOverDelta = 4.0;        // pair residual <= C' delta

CMat pauli(char p) {
    CMat m(2, 2);
    switch (p) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0); break;
        default: m << 1, 0, 0, -1;
    }
    return m;
}

// Exact balanced observable via a random unitary conjugation of diag(+-1).
CMat random_balanced(Eigen::Index d, RandomStream& rng) {
    CMat h(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) h(i, j) = cplx(rng.next_gauss(), rng.next_gauss());
    HermEig eig = herm_eig(CMat(0.5 * (h + h.adjoint())));
    RVec vals(d);
    for (Eigen::Index k = 0; k < d; ++k) vals(k) = k < d / 2 ? 1.0 : -1.0;
    CMat m = eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (m + m.adjoint()).eval();
}

BipartiteState random_state(Eigen::Index dA, Eigen::Index dB, RandomStream& rng) {
    BipartiteState s;
    s.dimA = dA;
    s.dimB = dB;
    s.amplitudes.resize(dA * dB);
    for (Eigen::Index k = 0; k < dA * dB; ++k)
        s.amplitudes(k) = cplx(rng.next_gauss(), rng.next_gauss());
    s.amplitudes /= s.amplitudes.norm();
    return s;
}

double repair_lhs(const CMat& z, const CMat& zt, const BipartiteState& psi) {
    return apply_left(CMat(z - zt), psi).norm();
}

double repair_rhs(const CMat& x, const CMat& z, const BipartiteState& psi) {
    return std::sqrt(1.5) * apply_left(CMat(x * z + z * x), psi).norm();
}

}  // namespace

TEST_CASE("tilde observables of the exact strategy are the transposes") {
    QuantumStrategy s = slofstra_strategy(2);
    auto [t12, t21] = tilde_observables(s.bobObs[0], s.bobObs[1]);
    CHECK(max_abs(t12 - pauli('X').transpose()) <= 1e-12);
    CHECK(max_abs(t21 - pauli('Y').transpose()) <= 1e-12);
}

TEST_CASE("tilde observables complete the kernel with identity") {
    auto [tsum, tdiff] = tilde_observables(pauli('Z'), pauli('Z'));
    CHECK(max_abs(tsum - pauli('Z')) <= 1e-12);
    CHECK(max_abs(tdiff - CMat::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("tilde observables vary continuously under perturbation") {
    QuantumStrategy s = slofstra_strategy(2);
    auto [t12, t21] = tilde_observables(s.bobObs[0], s.bobObs[1]);
    // Rotate both inputs by a fixed small unitary.
    const double eps = 1e-3;
    CMat k = cplx(0.0, 1.0) * eps * pauli('Y');
    CMat u = (CMat::Identity(2, 2) + k + 0.5 * k * k);  // second-order expansion
    // Re-project to an exact unitary via polar decomposition.
    SvdResult sv = svd(u);
    u = sv.u * sv.v.adjoint();
    CMat b0 = u.adjoint() * s.bobObs[0] * u;
    CMat b1 = u.adjoint() * s.bobObs[1] * u;
    auto [p12, p21] = tilde_observables(b0, b1);
    CHECK(max_abs(p12 - t12) <= 1e-2);
    CHECK(max_abs(p21 - t21) <= 1e-2);
}

TEST_CASE("tilde observables reject non-observable input") {
    CMat notObs = 0.5 * pauli('Z');
    CHECK_THROWS_AS(tilde_observables(notObs, pauli('X')), ContractError);
}

TEST_CASE("zero-noise report on exact strategies") {
    for (Eigen::Index n : {3, 4}) {
        RigidityReport rep = embedded_chsh_report(slofstra_strategy(n), n);
        CHECK(std::abs(rep.epsilon) <= 1e-9);
        CHECK(std::abs(rep.meanPairEpsilon - rep.epsilon) <= 1e-9);
        for (const auto& p : rep.pairs) {
            CHECK(std::abs(p.epsilon) <= 1e-9);
            CHECK(p.aliceAnticomm <= 1e-8);
            CHECK(p.bobAnticomm <= 1e-8);
            CHECK(p.crossAi <= 1e-8);
            CHECK(p.crossAj <= 1e-8);
        }
    }
}

TEST_CASE("identity strategy report hits the classical embedded bias") {
    QuantumStrategy s;
    s.state = maximally_entangled(2);
    s.aliceObs.assign(2, CMat::Identity(2, 2));
    s.bobObs.assign(2, CMat::Identity(2, 2));
    RigidityReport rep = embedded_chsh_report(s, 2);
    CHECK(rep.pairs[0].bias == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.pairs[0].epsilon ==
          doctest::Approx(1.0 - 0.5 / kSqrt2Over2).epsilon(1e-9));
    CHECK(rep.pairs[0].aliceAnticomm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.pairs[0].bobAnticomm == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("report bias decomposition matches the game matrix") {
    for (double t : {0.0, 0.03}) {
        QuantumStrategy s = detuned_slofstra_strategy(4, t);
        RigidityReport rep = embedded_chsh_report(s, 4);
        CHECK(rep.bias == doctest::Approx(bias_of(s, chsh_n(4)).bias).epsilon(1e-12));
        CHECK(rep.meanPairEpsilon == doctest::Approx(rep.epsilon).epsilon(1e-12));
    }
}

TEST_CASE("anti-commutator residuals scale like sqrt(eps)") {
    double lx = 0, ly = 0, lxx = 0, lxy = 0;
    int count = 0;
    for (double t : {4e-4, 1e-3, 2.5e-3, 6e-3, 1.5e-2, 3.5e-2}) {
        QuantumStrategy s = detuned_slofstra_strategy(4, t);
        RigidityReport rep = embedded_chsh_report(s, 4);
        if (rep.epsilon < 1e-6 || rep.epsilon > 1e-2) continue;
        CHECK(rep.meanAnticomm <= kAnticommOverSqrtEps * std::sqrt(rep.epsilon));
        const double X = std::log(rep.epsilon), Y = std::log(rep.meanAnticomm);
        lx += X;
        ly += Y;
        lxx += X * X;
        lxy += X * Y;
        ++count;
    }
    REQUIRE(count >= 4);
    const double slope = (count * lxy - lx * ly) / (count * lxx - lx * lx);
    CHECK(slope >= 0.45);
}

TEST_CASE("repair leaves an already anti-commuting pair untouched") {
    RandomStream rng(1, 0, StreamRole::generic);
    BipartiteState psi = random_state(2, 3, rng);
    CMat zt = exact_anticommute_repair(pauli('X'), pauli('Z'), psi);
    CHECK(repair_lhs(pauli('Z'), zt, psi) <= 1e-10);
    CHECK(max_abs(pauli('X') * zt + zt * pauli('X')) <= 1e-10);
}

TEST_CASE("repair bound on a perturbed observable") {
    CMat z = signum_completed(CMat(pauli('Z') + 0.1 * pauli('X')));
    BipartiteState phi = maximally_entangled(2);
    CMat zt = exact_anticommute_repair(pauli('X'), z, phi);
    CHECK(max_abs(pauli('X') * zt + zt * pauli('X')) <= 1e-10);
    CHECK(repair_lhs(z, zt, phi) <= repair_rhs(pauli('X'), z, phi) + 1e-8);
}

TEST_CASE("repair contract holds over random balanced pairs") {
    int checked = 0;
    for (Eigen::Index d : {2, 4, 8}) {
        for (int rep = 0; rep < 40; ++rep) {
            RandomStream rng(100 * d + rep, 0, StreamRole::generic);
            CMat x = random_balanced(d, rng);
            CMat z = random_balanced(d, rng);
            BipartiteState psi = random_state(d, d, rng);
            CMat zt = exact_anticommute_repair(x, z, psi);
            CHECK(max_abs(x * zt + zt * x) <= 1e-10);
            CHECK(is_observable(zt, 1e-9));
            CHECK(repair_lhs(z, zt, psi) <= repair_rhs(x, z, psi) + 1e-8);
            ++checked;
        }
    }
    CHECK(checked == 120);
}

TEST_CASE("repair rejects unbalanced and odd-dimension inputs") {
    RandomStream rng(2, 0, StreamRole::generic);
    BipartiteState psi = random_state(2, 2, rng);
    CHECK_THROWS_AS(exact_anticommute_repair(CMat::Identity(2, 2), pauli('Z'), psi),
                    ContractError);
    BipartiteState psi3 = random_state(3, 3, rng);
    CHECK_THROWS_AS(
        exact_anticommute_repair(CMat::Identity(3, 3), CMat::Identity(3, 3), psi3),
        ContractError);
}

TEST_CASE("balance padding zeroes traces and preserves bias and entropy") {
    QuantumStrategy id;
    id.state = maximally_entangled(2);
    id.aliceObs.assign(2, CMat::Identity(2, 2));
    id.bobObs.assign(2, CMat::Identity(2, 2));
    QuantumStrategy padded = balance_pad(id);
    CHECK(std::abs(padded.aliceObs[0].trace()) <= 1e-15);
    CHECK(padded.dimA() == 4);

    QuantumStrategy s = slofstra_strategy(3);
    QuantumStrategy sp = balance_pad(s);
    const double before = bias_of(s, chsh_n(3)).bias;
    const double after = bias_of(sp, chsh_n(3)).bias;
    CHECK(std::abs(before - after) <= 1e-12);
    CHECK(std::abs(entanglement_entropy(sp.state) - entanglement_entropy(s.state)) <= 1e-9);
}

TEST_CASE("exact qubit pairs for n = 6") {
    QuantumStrategy s = slofstra_strategy(6);
    QubitPairs qp = build_qubit_pairs(s, 6);
    CHECK(qp.m == 2);
    CliffordBasis basis = clifford_generators(6);
    const cplx iu(0.0, 1.0);
    CHECK(max_abs(qp.aliceX[0] - iu * basis.generators[0] * basis.generators[1]) <= 1e-10);
    CHECK(max_abs(qp.aliceZ[0] - iu * basis.generators[1] * basis.generators[2]) <= 1e-10);
    for (Eigen::Index k = 0; k < 2; ++k) {
        CHECK(max_abs(qp.aliceX[k] * qp.aliceZ[k] + qp.aliceZ[k] * qp.aliceX[k]) <= 1e-10);
        CHECK(max_abs(qp.bobX[k] * qp.bobZ[k] + qp.bobZ[k] * qp.bobX[k]) <= 1e-10);
        CHECK(qp.residuals(k, k) <= 1e-8);
    }
    CHECK(qp.residuals(0, 1) <= 1e-8);
    CHECK(qp.stage1Shift <= 1e-8);
    CHECK(qp.stage2Shift <= 1e-8);
}

TEST_CASE("single exact pair for n = 3") {
    QubitPairs qp = build_qubit_pairs(slofstra_strategy(3), 3);
    CHECK(qp.m == 1);
    CHECK(max_abs(qp.aliceX[0] * qp.aliceZ[0] + qp.aliceZ[0] * qp.aliceX[0]) <= 1e-10);
    CHECK(qp.residuals(0, 0) <= 1e-8);
}

TEST_CASE("noisy qubit-pair residuals stay proportional to the input scale") {
    for (double t : {1e-3, 1e-2, 5e-2}) {
        QuantumStrategy s = detuned_slofstra_strategy(6, t);
        RigidityReport rep = embedded_chsh_report(s, 6);
        QubitPairs qp = build_qubit_pairs(s, 6);
        const double delta = 0.5 * (rep.meanAliceAnticomm + rep.meanCross);
        double worst = 0.0;
        for (Eigen::Index k = 0; k < qp.m; ++k)
            for (Eigen::Index l = 0; l < qp.m; ++l)
                worst = std::max(worst, qp.residuals(k, l));
        CHECK(worst <= kPairsOverDelta * delta);
    }
}

TEST_CASE("qubit pairs reject small n and unbalanced strategies") {
    CHECK_THROWS_AS(build_qubit_pairs(slofstra_strategy(2), 2, Exec::serial), ContractError);
    QuantumStrategy id;
    id.state = maximally_entangled(2);
    id.aliceObs.assign(3, CMat::Identity(2, 2));
    id.bobObs.assign(6, CMat::Identity(2, 2));
    CHECK_THROWS_AS(build_qubit_pairs(id, 3), ContractError);  // identity is unbalanced
}

TEST_CASE("subset selection basics") {
    RMat zero = RMat::Zero(5, 5);
    SubsetResult all = select_good_subset(zero, 3, 0.0);
    CHECK(all.indices == std::vector<Eigen::Index>{0, 1, 2});
    CHECK(all.maxResidual == 0.0);

    RMat oneBad = RMat::Zero(5, 5);
    for (Eigen::Index k = 0; k < 5; ++k)
        if (k != 2) {
            oneBad(2, k) = 1.0;
            oneBad(k, 2) = 1.0;
        }
    SubsetResult s = select_good_subset(oneBad, 4, 0.0);
    CHECK(s.indices == std::vector<Eigen::Index>{0, 1, 3, 4});
    CHECK(s.maxResidual == 0.0);

    CHECK_THROWS_AS(select_good_subset(zero, 6, 0.0), ContractError);
}

TEST_CASE("greedy subset selection is near-optimal") {
    for (int seed = 0; seed < 10; ++seed) {
        RandomStream rng(seed, 4, StreamRole::generic);
        RMat res = RMat::Zero(8, 8);
        for (Eigen::Index i = 0; i < 8; ++i)
            for (Eigen::Index j = i + 1; j < 8; ++j) {
                const double v = rng.next_unit();
                res(i, j) = v;
                res(j, i) = v;
            }
        SubsetResult exact = select_good_subset_exact(res, 4);
        SubsetResult greedy = select_good_subset_greedy(res, 4, 0.0);
        CHECK(greedy.maxResidual <= 2.0 * exact.maxResidual + 1e-12);
    }
}

TEST_CASE("entanglement entropy reference values") {
    BipartiteState phi = maximally_entangled(2);
    CHECK(entanglement_entropy(phi) == doctest::Approx(1.0).epsilon(1e-12));

    BipartiteState three = state_tensor(state_tensor(phi, phi), phi);
    CHECK(entanglement_entropy(three) == doctest::Approx(3.0).epsilon(1e-9));

    const double theta = M_PI / 6.0;
    BipartiteState tilted;
    tilted.dimA = 2;
    tilted.dimB = 2;
    tilted.amplitudes = CVec::Zero(4);
    tilted.amplitudes(0) = std::cos(theta);
    tilted.amplitudes(3) = std::sin(theta);
    // Binary entropy of cos^2(pi/6) = 3/4, evaluated independently.
    const double p = 0.75;
    const double expected = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
    CHECK(entanglement_entropy(tilted) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("entropy is symmetric under swapping the parties") {
    RandomStream rng(6, 0, StreamRole::generic);
    BipartiteState s = random_state(3, 4, rng);
    BipartiteState swapped;
    swapped.dimA = s.dimB;
    swapped.dimB = s.dimA;
    swapped.amplitudes.resize(s.amplitudes.size());
    for (Eigen::Index a = 0; a < s.dimA; ++a)
        for (Eigen::Index b = 0; b < s.dimB; ++b)
            swapped.amplitudes(b * s.dimA + a) = s.amplitudes(a * s.dimB + b);
    CHECK(std::abs(entanglement_entropy(s) - entanglement_entropy(swapped)) <= 1e-9);
    CHECK(entanglement_entropy(s) >= 0.0);
    CHECK(entanglement_entropy(s) <= std::log2(3.0) + 1e-9);
}

TEST_CASE("fannes bound evaluation") {
    CHECK(fannes_lower_bound(4, 0.01) == doctest::Approx(3.7071228762).epsilon(1e-9));
    CHECK(std::abs(fannes_lower_bound(5, 1e-12) - 5.0) <= 1e-9);
    CHECK_THROWS_AS(fannes_lower_bound(3, 0.0), ContractError);
    CHECK_THROWS_AS(fannes_lower_bound(3, 1.0), ContractError);
}

TEST_CASE("perturbed EPR products respect the fannes floor") {
    BipartiteState phi = maximally_entangled(2);
    BipartiteState target = state_tensor(state_tensor(phi, phi), phi);
    BipartiteState extra;
    extra.dimA = 2;
    extra.dimB = 2;
    extra.amplitudes = CVec::Zero(4);
    extra.amplitudes(0) = 1.0;
    target = state_tensor(target, extra);

    for (int dir = 0; dir < 3; ++dir) {
        RandomStream rng(70 + dir, 0, StreamRole::generic);
        CVec chi(target.amplitudes.size());
        for (Eigen::Index k = 0; k < chi.size(); ++k)
            chi(k) = cplx(rng.next_gauss(), rng.next_gauss());
        chi -= target.amplitudes.dot(chi) * target.amplitudes;
        chi /= chi.norm();
        for (double halfDelta : {0.005, 0.01, 0.02}) {
            const double c = 1.0 - halfDelta * halfDelta / 2.0;
            BipartiteState pert = target;
            pert.amplitudes = c * target.amplitudes + std::sqrt(1.0 - c * c) * chi;
            CHECK(std::abs((pert.amplitudes - target.amplitudes).norm() - halfDelta) <= 1e-12);
            CHECK(entanglement_entropy(pert) >= fannes_lower_bound(3, 2.0 * halfDelta));
        }
    }
}

TEST_CASE("entropy certificate on exact strategies") {
    EntropyCertificate c6 = certify_entropy(slofstra_strategy(6), 6);
    CHECK(c6.entropyBits == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(c6.eta <= 1e-8);
    CHECK(c6.maxConsistency <= 1e-8);
    CHECK(c6.r == 2);

    EntropyCertificate c8 = certify_entropy(slofstra_strategy(8), 8);
    CHECK(c8.entropyBits == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("detuned sweep trades entropy for bias deficit monotonically") {
    double lastEntropy = 1e300, lastEps = -1.0;
    for (double t : {0.01, 0.03, 0.06, 0.1}) {
        QuantumStrategy s = detuned_slofstra_strategy(6, t);
        EntropyCertificate c = certify_entropy(s, 6);
        CHECK(c.entropyBits < lastEntropy);
        CHECK(c.epsilon > lastEps);
        lastEntropy = c.entropyBits;
        lastEps = c.epsilon;
    }
}
