#include "xorgames/clifford.hpp"

#include <cmath>

namespace xorgames {

namespace {

CMat pauli(char p) {
    CMat m(2, 2);
    switch (p) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0); break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m = CMat::Identity(2, 2);
    }
    return m;
}

// Tensor product of single-qubit letters, e.g. "ZZX I" patterns.
CMat pauli_string(const std::vector<char>& letters) {
    CMat m = CMat::Identity(1, 1);
    for (char c : letters) m = kron(m, pauli(c));
    return m;
}

}  // namespace

CliffordBasis clifford_generators(Eigen::Index r) {
    require(r >= 1, "clifford_generators: r must be >= 1");
    const Eigen::Index q = r / 2;
    require_capacity(q <= 12, "clifford_generators: dimension 2^floor(r/2) exceeds cap");
    CliffordBasis basis;
    basis.r = r;
    basis.dim = Eigen::Index(1) << q;
    if (r == 1) {
        basis.generators.push_back(CMat::Identity(1, 1));
        return basis;
    }
    for (Eigen::Index k = 1; k <= q; ++k) {
        std::vector<char> sx(q, 'I'), sy(q, 'I');
        for (Eigen::Index l = 0; l + 1 < k; ++l) sx[l] = sy[l] = 'Z';
        sx[k - 1] = 'X';
        sy[k - 1] = 'Y';
        basis.generators.push_back(pauli_string(sx));
        basis.generators.push_back(pauli_string(sy));
    }
    if (r % 2 == 1) basis.generators.push_back(pauli_string(std::vector<char>(q, 'Z')));
    return basis;
}

QuantumStrategy tsirelson_lift(const VectorStrategy& vstrat) {
    vstrat.validate();
    const Eigen::Index r = vstrat.r;
    const CliffordBasis basis = clifford_generators(r);
    const Eigen::Index d = basis.dim;

    auto combine = [&](const RVec& v) {
        CMat m = CMat::Zero(d, d);
        for (Eigen::Index k = 0; k < r; ++k) m += cplx(v(k), 0.0) * basis.generators[k];
        return m;
    };

    QuantumStrategy s;
    s.state = maximally_entangled(d);
    s.aliceObs.reserve(vstrat.xs.size());
    s.bobObs.reserve(vstrat.ys.size());
    for (const RVec& x : vstrat.xs) s.aliceObs.push_back(combine(x));
    // Bob takes transposes so that <psi| A (x) B |psi> = tr(A^T B)/d = x . y.
    for (const RVec& y : vstrat.ys) s.bobObs.push_back(CMat(combine(y).transpose()));
    return s;
}

QuantumStrategy slofstra_strategy(Eigen::Index n) {
    require(n >= 2, "slofstra_strategy: n must be >= 2");
    const CliffordBasis basis = clifford_generators(n);
    const double invSqrt2 = 1.0 / std::sqrt(2.0);

    QuantumStrategy s;
    s.state = maximally_entangled(basis.dim);
    s.aliceObs = basis.generators;
    s.bobObs.resize(n * (n - 1));
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double sign = (j < i) ? -1.0 : 1.0;
            CMat b = invSqrt2 * (sign * basis.generators[i - 1].transpose() +
                                 basis.generators[j - 1].transpose());
            s.bobObs[chsh_column(n, i, j)] = std::move(b);
        }
    }
    return s;
}

QuantumStrategy detuned_slofstra_strategy(Eigen::Index n, double t) {
    require(n >= 2, "detuned_slofstra_strategy: n must be >= 2");
    const CliffordBasis basis = clifford_generators(n);
    const double c = std::cos(t), sn = std::sin(t);

    // Alice: rotate each generator towards its cyclic successor. The rotated
    // operators are still observables but no longer anti-commute pairwise.
    std::vector<CMat> alice(n);
    for (Eigen::Index i = 0; i < n; ++i)
        alice[i] = c * basis.generators[i] + sn * basis.generators[(i + 1) % n];

    QuantumStrategy s;
    s.aliceObs = alice;
    s.bobObs.resize(n * (n - 1));
    const double invSqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double sign = (j < i) ? -1.0 : 1.0;
            CMat raw = invSqrt2 * (sign * alice[i - 1].transpose() + alice[j - 1].transpose());
            // Project back onto an exact observable; the kernel is empty for
            // small t, where raw^2 is close to Id.
            s.bobObs[chsh_column(n, i, j)] = signum_completed(raw);
        }
    }

    // Per-EPR-pair Schmidt detuning of the state.
    const double theta = 0.25 * M_PI - t;
    BipartiteState pair;
    pair.dimA = 2;
    pair.dimB = 2;
    pair.amplitudes = CVec::Zero(4);
    pair.amplitudes(0) = std::cos(theta);
    pair.amplitudes(3) = std::sin(theta);
    const Eigen::Index q = n / 2;
    if (q == 0) {
        s.state = maximally_entangled(1);
    } else {
        BipartiteState st = pair;
        for (Eigen::Index k = 1; k < q; ++k) st = state_tensor(st, pair);
        s.state = st;
    }
    return s;
}

}  // namespace xorgames
