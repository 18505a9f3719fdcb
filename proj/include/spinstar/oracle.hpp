#pragma once

// Brute-force reference dynamics for the spin star. Nothing here uses the
// closed-form amplitudes: Hamiltonians are assembled from ladder matrix
// elements and propagated through a dense Hermitian eigendecomposition.
//
// Two bases are supported:
//   collective   |1, M_S> (x) |J, M_J>, ordered M_S = +1, 0, -1 (outer) and
//                M_J = -J .. J (inner); dimension 3 (2J + 1)
//   full         (2 + N) spin-1/2 factors, central spins first; bit value 0
//                is spin up, so the pair index of |uu>,|ud>,|du>,|dd> is
//                0,1,2,3

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "spinstar/closed_form.hpp"
#include "spinstar/xstate.hpp"

namespace spinstar::oracle {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kStateTol = 1e-10;
inline constexpr int kMaxFullBath = 10;

class DenseHermitianOperator {
 public:
  /// Throws Error(NotAState) if m is not square and Hermitian within tol.
  explicit DenseHermitianOperator(Eigen::MatrixXcd m, double tol = kHermitianTol);

  Eigen::Index dimension() const { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

class PureStateVector {
 public:
  explicit PureStateVector(Eigen::VectorXcd v, double tol = kNormTol);

  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  Eigen::VectorXcd amplitudes_;
};

class PairDensityMatrix {
 public:
  /// Checks Hermiticity, unit trace and positivity (smallest eigenvalue
  /// >= -tol); throws Error(NotAState) otherwise.
  explicit PairDensityMatrix(const Eigen::Matrix4cd& m, double tol = kStateTol);

  const Eigen::Matrix4cd& entries() const { return entries_; }

 private:
  Eigen::Matrix4cd entries_;
};

/// exp(-i H t) through a cached eigendecomposition H = V diag(w) V^+.
class Propagator {
 public:
  explicit Propagator(const DenseHermitianOperator& h);

  PureStateVector evolve(const PureStateVector& psi0, double t) const;

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
  /// ||H V - V diag(w)|| / ||H||
  double relative_residual() const { return residual_; }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
  double residual_ = 0.0;
};

PureStateVector propagate(const DenseHermitianOperator& h, const PureStateVector& psi0, double t);

// -- collective basis --------------------------------------------------------

Eigen::Index collective_dimension(HalfInteger j);
Eigen::Index collective_index(HalfInteger j, int m_s, HalfInteger m_j);

DenseHermitianOperator build_collective_hamiltonian(HalfInteger j, double omega, double alpha);

/// Separate free and interaction parts, H = H0 + HI.
DenseHermitianOperator collective_free_part(HalfInteger j, double omega);
DenseHermitianOperator collective_interaction_part(HalfInteger j, double alpha);

PureStateVector collective_product_state(HalfInteger j, int m_s, HalfInteger m_j);

/// Traces out the bath of a collective-basis state and embeds the 3x3 triplet
/// block into the 4x4 pair basis.
PairDensityMatrix collective_reduce_to_pair(const PureStateVector& psi, HalfInteger j);

// -- full tensor product -----------------------------------------------------

DenseHermitianOperator build_full_hamiltonian(int n_bath, double omega, double alpha);

/// Symmetric Dicke state of n_bath spins with k up spins.
PureStateVector dicke_state(int n_bath, int k);

/// Central pair state |S, M_S> as a 4-vector in the pair basis; s = 0 gives
/// the singlet (|ud> - |du>)/sqrt(2).
Eigen::Vector4cd central_pair_state(int s, int m_s);

PureStateVector full_product_state(const Eigen::Vector4cd& pair, const PureStateVector& bath);

PairDensityMatrix partial_trace_to_pair(const PureStateVector& psi, int n_bath);

/// Collective operators on the full space (used for conservation checks).
Eigen::MatrixXcd full_pair_s_squared(int n_bath);
Eigen::MatrixXcd full_bath_j_squared(int n_bath);
Eigen::MatrixXcd full_total_sz(int n_bath);

// -- concurrence -------------------------------------------------------------

/// max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy).
double wootters_concurrence(const PairDensityMatrix& rho);

Eigen::Matrix4cd pair_matrix(const XState& s);
Eigen::Matrix4cd pair_matrix(const SymmetricXState& s);

}  // namespace spinstar::oracle
