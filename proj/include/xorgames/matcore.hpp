#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "xorgames/errors.hpp"

namespace xorgames {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

// Dense matrices larger than this (per side) are refused with CapacityError.
inline constexpr Eigen::Index kDimCap = 4096;

// Eigenvalues below kKernelTolScale * spectral norm count as kernel when
// forming |M| and sign(M).
inline constexpr double kKernelTolScale = 1e-9;

// Pure bipartite state on C^dimA (x) C^dimB.
// Amplitude layout: index (a, b) -> a * dimB + b.
struct BipartiteState {
    Eigen::Index dimA = 0;
    Eigen::Index dimB = 0;
    CVec amplitudes;

    // View of the amplitudes as a dimA x dimB matrix (row index = A side).
    CMat as_matrix() const;
};

enum class Keep { A, B, AB };

struct HermEig {
    RVec values;   // descending
    CMat vectors;  // unitary, columns match values
};

struct SvdResult {
    CMat u;
    RVec singular;  // nonnegative, descending
    CMat v;         // m = u * diag(singular) * v.adjoint()
};

// All operations below are pure; inputs are never mutated.

CMat kron(const CMat& a, const CMat& b);

// Requires ||m - m^dagger||_max <= 1e-10.
HermEig herm_eig(const CMat& m);

SvdResult svd(const CMat& m);

// For Hermitian m: abs = sum |l_i| P_i, signum = sum sign(l_i) P_i with
// sign(0) = 0 under the kernel cutoff (pseudo-inverse convention).
struct AbsSignum {
    CMat abs;
    CMat signum;
};
AbsSignum op_abs_signum(const CMat& m);

// sign(m) completed to an exact observable by acting as identity on the
// kernel of |m|.
CMat signum_completed(const CMat& m);

// Reduced density matrix of a normalized pure state. Keep::AB returns the
// full projector |psi><psi| (subject to the dimension cap).
CMat partial_trace(const BipartiteState& state, Keep keep);

// --- small utilities shared across modules ---

double max_abs(const CMat& m);

bool is_hermitian(const CMat& m, double tol = 1e-10);

// Hermitian + squares to identity within tol.
bool is_observable(const CMat& m, double tol = 1e-9);

void require_finite(const CMat& m, const char* what);

void require_normalized(const BipartiteState& state, double tol = 1e-12);

// Maximally entangled state D^{-1/2} sum_i |ii> on C^D (x) C^D.
BipartiteState maximally_entangled(Eigen::Index d);

// Tensor product of bipartite states, regrouped so that the A factors stay
// together: amplitudes((a1 a2), (b1 b2)) = s1(a1, b1) * s2(a2, b2).
BipartiteState state_tensor(const BipartiteState& s1, const BipartiteState& s2);

// <psi| (M (x) Id) |psi'> style contractions without forming Kronecker
// products; all strategy evaluation goes through these.
CVec apply_left(const CMat& m, const BipartiteState& state);   // (M (x) Id) |psi>
CVec apply_right(const CMat& m, const BipartiteState& state);  // (Id (x) M) |psi>

// <psi| A (x) B |psi>.
cplx sandwich(const CMat& a, const CMat& b, const BipartiteState& state);

}  // namespace xorgames
