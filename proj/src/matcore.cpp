#include "xorgames/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace xorgames {

CMat BipartiteState::as_matrix() const {
    CMat m(dimA, dimB);
    for (Eigen::Index a = 0; a < dimA; ++a)
        for (Eigen::Index b = 0; b < dimB; ++b) m(a, b) = amplitudes(a * dimB + b);
    return m;
}

double max_abs(const CMat& m) {
    double v = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) v = std::max(v, std::abs(m(i, j)));
    return v;
}

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

bool is_observable(const CMat& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    CMat sq = m * m;
    return max_abs(sq - CMat::Identity(m.rows(), m.cols())) <= tol;
}

void require_finite(const CMat& m, const char* what) {
    if (!m.allFinite()) throw ContractError(std::string(what) + ": non-finite entries");
}

void require_normalized(const BipartiteState& state, double tol) {
    require(state.dimA > 0 && state.dimB > 0, "state: dims must be positive");
    require(state.amplitudes.size() == state.dimA * state.dimB,
            "state: amplitude count must equal dimA*dimB");
    if (!state.amplitudes.allFinite()) throw ContractError("state: non-finite amplitudes");
    require(std::abs(state.amplitudes.norm() - 1.0) <= tol, "state: norm must be 1");
}

CMat kron(const CMat& a, const CMat& b) {
    const Eigen::Index rows = a.rows() * b.rows();
    const Eigen::Index cols = a.cols() * b.cols();
    require_capacity(rows <= kDimCap && cols <= kDimCap,
                     "kron: result exceeds the dense-matrix cap");
    CMat out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermEig herm_eig(const CMat& m) {
    require(m.rows() == m.cols() && m.rows() > 0, "herm_eig: square input required");
    require_finite(m, "herm_eig");
    require(is_hermitian(m, 1e-10), "herm_eig: input not Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<CMat> solver(m);
    if (solver.info() != Eigen::Success) throw SolverError("herm_eig: eigensolver failed");
    // Eigen sorts ascending; flip to descending.
    HermEig out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

SvdResult svd(const CMat& m) {
    require_finite(m, "svd");
    Eigen::JacobiSVD<CMat> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out;
    out.u = solver.matrixU();
    out.singular = solver.singularValues();
    out.v = solver.matrixV();
    return out;
}

AbsSignum op_abs_signum(const CMat& m) {
    HermEig eig = herm_eig(m);
    const Eigen::Index n = m.rows();
    const double norm = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    const double tau = kKernelTolScale * norm;
    RVec absv(n), sgnv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = eig.values(i);
        if (std::abs(l) <= tau) {
            absv(i) = 0.0;
            sgnv(i) = 0.0;
        } else {
            absv(i) = std::abs(l);
            sgnv(i) = l > 0 ? 1.0 : -1.0;
        }
    }
    AbsSignum out;
    out.abs = eig.vectors * absv.asDiagonal() * eig.vectors.adjoint();
    out.signum = eig.vectors * sgnv.asDiagonal() * eig.vectors.adjoint();
    // Kill the anti-Hermitian round-off drift.
    out.abs = 0.5 * (out.abs + out.abs.adjoint()).eval();
    out.signum = 0.5 * (out.signum + out.signum.adjoint()).eval();
    return out;
}

CMat signum_completed(const CMat& m) {
    AbsSignum parts = op_abs_signum(m);
    // signum^2 projects onto the support; fill the kernel with identity.
    CMat out = parts.signum +
               (CMat::Identity(m.rows(), m.cols()) - parts.signum * parts.signum);
    return 0.5 * (out + out.adjoint()).eval();
}

CMat partial_trace(const BipartiteState& state, Keep keep) {
    require_normalized(state, 1e-10);
    const CMat psi = state.as_matrix();
    switch (keep) {
        case Keep::A:
            return psi * psi.adjoint();
        case Keep::B:
            return psi.transpose() * psi.conjugate();
        case Keep::AB: {
            require_capacity(state.amplitudes.size() <= kDimCap,
                             "partial_trace: full projector exceeds the dense-matrix cap");
            return state.amplitudes * state.amplitudes.adjoint();
        }
    }
    throw ContractError("partial_trace: unknown keep selector");
}

BipartiteState maximally_entangled(Eigen::Index d) {
    require(d >= 1, "maximally_entangled: dimension must be >= 1");
    require_capacity(d <= kDimCap, "maximally_entangled: dimension exceeds cap");
    BipartiteState s;
    s.dimA = d;
    s.dimB = d;
    s.amplitudes = CVec::Zero(d * d);
    const double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i) s.amplitudes(i * d + i) = w;
    return s;
}

BipartiteState state_tensor(const BipartiteState& s1, const BipartiteState& s2) {
    BipartiteState out;
    out.dimA = s1.dimA * s2.dimA;
    out.dimB = s1.dimB * s2.dimB;
    out.amplitudes = CVec::Zero(out.dimA * out.dimB);
    for (Eigen::Index a1 = 0; a1 < s1.dimA; ++a1)
        for (Eigen::Index a2 = 0; a2 < s2.dimA; ++a2)
            for (Eigen::Index b1 = 0; b1 < s1.dimB; ++b1)
                for (Eigen::Index b2 = 0; b2 < s2.dimB; ++b2) {
                    const Eigen::Index a = a1 * s2.dimA + a2;
                    const Eigen::Index b = b1 * s2.dimB + b2;
                    out.amplitudes(a * out.dimB + b) =
                        s1.amplitudes(a1 * s1.dimB + b1) * s2.amplitudes(a2 * s2.dimB + b2);
                }
    return out;
}

namespace {
// Flatten a dimA x dimB amplitude matrix back to the (a,b) -> a*dimB + b layout.
CVec flatten(const CMat& m) {
    CVec v(m.size());
    for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) v(a * m.cols() + b) = m(a, b);
    return v;
}
}  // namespace

CVec apply_left(const CMat& m, const BipartiteState& state) {
    require(m.rows() == state.dimA && m.cols() == state.dimA,
            "apply_left: operator does not match dimA");
    return flatten(m * state.as_matrix());
}

CVec apply_right(const CMat& m, const BipartiteState& state) {
    require(m.rows() == state.dimB && m.cols() == state.dimB,
            "apply_right: operator does not match dimB");
    return flatten(state.as_matrix() * m.transpose());
}

cplx sandwich(const CMat& a, const CMat& b, const BipartiteState& state) {
    // <psi| A (x) B |psi> = tr(Psi^dagger A Psi B^T) with Psi the amplitude matrix.
    require(a.rows() == state.dimA && b.rows() == state.dimB,
            "sandwich: operator dims do not match the state");
    const CMat psi = state.as_matrix();
    return ((psi.adjoint() * a * psi) * b.transpose()).trace();
}

}  // namespace xorgames
