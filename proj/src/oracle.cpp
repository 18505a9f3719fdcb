#include "spinstar/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace spinstar::oracle {

namespace {

// sqrt(S(S+1) - M(M+dir)) from doubled quantum numbers; zero past the edge.
double ladder_element(int twice_s, int twice_m, int dir) {
  const long long radicand4 = static_cast<long long>(twice_s) * (twice_s + 2) -
                              static_cast<long long>(twice_m) * (twice_m + 2 * dir);
  return radicand4 > 0 ? 0.5 * std::sqrt(static_cast<double>(radicand4)) : 0.0;
}

void require_full_bath(int n_bath) {
  if (n_bath < 1 || n_bath > kMaxFullBath) {
    std::ostringstream os;
    os << "n_bath = " << n_bath << " outside [1, " << kMaxFullBath << "]";
    throw Error(ErrorCode::Domain, os.str());
  }
}

Eigen::Index full_dimension(int n_bath) { return Eigen::Index{1} << (n_bath + 2); }

bool site_is_up(Eigen::Index state, int site, int n_sites) {
  return ((state >> (n_sites - 1 - site)) & 1) == 0;
}

// Dense matrix of a single-site 2x2 operator (basis up, down) on the full space.
Eigen::MatrixXcd site_operator(int n_sites, int site, const Eigen::Matrix2cd& op) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  const Eigen::Index mask = Eigen::Index{1} << (n_sites - 1 - site);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int in = (s & mask) ? 1 : 0;
    for (int o = 0; o < 2; ++o) {
      if (op(o, in) == cplx{}) continue;
      const Eigen::Index target = o ? (s | mask) : (s & ~mask);
      out(target, s) += op(o, in);
    }
  }
  return out;
}

// S^2 of the spins in [first, last).
Eigen::MatrixXcd collective_s_squared(int n_sites, int first, int last) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Eigen::Matrix2cd* op : {&sx, &sy, &sz}) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = first; i < last; ++i) comp += site_operator(n_sites, i, *op);
    total += comp * comp;
  }
  return total;
}

Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

// Eigenvalues of a reduced state below this are rounding noise.
constexpr double kSpectrumCutoff = 0.0;

}  // namespace

DenseHermitianOperator::DenseHermitianOperator(Eigen::MatrixXcd m, double tol)
    : entries_(std::move(m)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be square and nonempty");
  }
  const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    std::ostringstream os;
    os << "operator is not Hermitian (max deviation " << dev << ")";
    throw Error(ErrorCode::NotAState, os.str());
  }
}

PureStateVector::PureStateVector(Eigen::VectorXcd v, double tol) : amplitudes_(std::move(v)) {
  const double norm = amplitudes_.norm();
  if (amplitudes_.size() == 0 || std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "state vector norm " << norm << " differs from 1";
    throw Error(ErrorCode::NotAState, os.str());
  }
}

PairDensityMatrix::PairDensityMatrix(const Eigen::Matrix4cd& m, double tol) : entries_(m) {
  std::ostringstream os;
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const cplx trace = m.trace();
  if (herm > tol) {
    os << "not Hermitian (deviation " << herm << ")";
  } else if (std::abs(trace - 1.0) > tol) {
    os << "trace " << trace << " differs from 1";
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    const double smallest = es.eigenvalues().minCoeff();
    if (smallest >= -tol) return;
    os << "smallest eigenvalue " << smallest << " is negative";
  }
  throw Error(ErrorCode::NotAState, os.str());
}

Propagator::Propagator(const DenseHermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NotAState, "Hermitian eigensolver did not converge");
  }
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  const double scale = h.entries().norm();
  const double res = (h.entries() * vectors_ - vectors_ * values_.asDiagonal()).norm();
  residual_ = scale > 0.0 ? res / scale : res;
}

PureStateVector Propagator::evolve(const PureStateVector& psi0, double t) const {
  if (psi0.dimension() != vectors_.rows()) {
    std::ostringstream os;
    os << "state dimension " << psi0.dimension() << " vs operator " << vectors_.rows();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  Eigen::VectorXcd coeffs = vectors_.adjoint() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) *= std::exp(cplx(0.0, -values_(i) * t));
  }
  return PureStateVector(vectors_ * coeffs, kStateTol);
}

PureStateVector propagate(const DenseHermitianOperator& h, const PureStateVector& psi0, double t) {
  if (psi0.dimension() != h.dimension()) {
    std::ostringstream os;
    os << "state dimension " << psi0.dimension() << " vs operator " << h.dimension();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return Propagator(h).evolve(psi0, t);
}

Eigen::Index collective_dimension(HalfInteger j) {
  if (j.twice() < 0) throw Error(ErrorCode::Domain, "J must be non-negative");
  return 3 * (j.twice() + 1);
}

Eigen::Index collective_index(HalfInteger j, int m_s, HalfInteger m_j) {
  if (m_s < -1 || m_s > 1 || std::abs(m_j.twice()) > j.twice() ||
      (j.twice() - m_j.twice()) % 2 != 0) {
    throw Error(ErrorCode::Domain, "quantum numbers outside the collective basis");
  }
  const Eigen::Index width = j.twice() + 1;
  return (1 - m_s) * width + (m_j.twice() + j.twice()) / 2;
}

DenseHermitianOperator collective_free_part(HalfInteger j, double omega) {
  const Eigen::Index dim = collective_dimension(j);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ms = 1; ms >= -1; --ms) {
    for (int tm = -j.twice(); tm <= j.twice(); tm += 2) {
      const auto m = HalfInteger::from_twice(tm);
      const Eigen::Index i = collective_index(j, ms, m);
      h(i, i) = omega * (ms + m.value());
    }
  }
  return DenseHermitianOperator(std::move(h));
}

DenseHermitianOperator collective_interaction_part(HalfInteger j, double alpha) {
  const Eigen::Index dim = collective_dimension(j);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ms = 1; ms >= -1; --ms) {
    for (int tm = -j.twice(); tm <= j.twice(); tm += 2) {
      const auto m = HalfInteger::from_twice(tm);
      const Eigen::Index src = collective_index(j, ms, m);
      // S_+ J_- ; the conjugate S_- J_+ fills the transposed entry
      if (ms < 1 && tm > -j.twice()) {
        const double amp = alpha * ladder_element(2, 2 * ms, +1) * ladder_element(j.twice(), tm, -1);
        const Eigen::Index dst = collective_index(j, ms + 1, m - 1);
        h(dst, src) += amp;
        h(src, dst) += amp;
      }
    }
  }
  return DenseHermitianOperator(std::move(h));
}

DenseHermitianOperator build_collective_hamiltonian(HalfInteger j, double omega, double alpha) {
  return DenseHermitianOperator(collective_free_part(j, omega).entries() +
                                collective_interaction_part(j, alpha).entries());
}

PureStateVector collective_product_state(HalfInteger j, int m_s, HalfInteger m_j) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(collective_dimension(j));
  v(collective_index(j, m_s, m_j)) = 1.0;
  return PureStateVector(std::move(v));
}

PairDensityMatrix collective_reduce_to_pair(const PureStateVector& psi, HalfInteger j) {
  const Eigen::Index width = j.twice() + 1;
  if (psi.dimension() != collective_dimension(j)) {
    throw Error(ErrorCode::DimensionMismatch, "state is not in the collective basis of J");
  }
  // rows: M_S = +1, 0, -1; columns: bath M_J
  const Eigen::MatrixXcd blocks =
      psi.amplitudes().reshaped<Eigen::RowMajor>(3, width);
  const Eigen::Matrix3cd triplet = blocks * blocks.adjoint();

  Eigen::Matrix<cplx, 4, 3> embed = Eigen::Matrix<cplx, 4, 3>::Zero();
  embed(0, 0) = 1.0;
  embed(1, 1) = embed(2, 1) = 1.0 / std::sqrt(2.0);
  embed(3, 2) = 1.0;
  return PairDensityMatrix(embed * triplet * embed.adjoint());
}

DenseHermitianOperator build_full_hamiltonian(int n_bath, double omega, double alpha) {
  require_full_bath(n_bath);
  const int n_sites = n_bath + 2;
  const Eigen::Index dim = full_dimension(n_bath);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double mz = 0.0;
    for (int i = 0; i < n_sites; ++i) mz += site_is_up(s, i, n_sites) ? 0.5 : -0.5;
    h(s, s) = omega * mz;
    // sigma_+^(c) sigma_-^(b) for a down central spin c and an up bath spin b
    for (int c = 0; c < 2; ++c) {
      if (site_is_up(s, c, n_sites)) continue;
      for (int b = 2; b < n_sites; ++b) {
        if (!site_is_up(s, b, n_sites)) continue;
        const Eigen::Index t = s ^ (Eigen::Index{1} << (n_sites - 1 - c)) ^
                               (Eigen::Index{1} << (n_sites - 1 - b));
        h(t, s) += alpha;
        h(s, t) += alpha;
      }
    }
  }
  return DenseHermitianOperator(std::move(h));
}

PureStateVector dicke_state(int n_bath, int k) {
  if (n_bath < 1 || n_bath > 24 || k < 0 || k > n_bath) {
    std::ostringstream os;
    os << "no Dicke state with n_bath = " << n_bath << ", k = " << k;
    throw Error(ErrorCode::Domain, os.str());
  }
  const Eigen::Index dim = Eigen::Index{1} << n_bath;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    int up = 0;
    for (int i = 0; i < n_bath; ++i) up += site_is_up(s, i, n_bath) ? 1 : 0;
    if (up == k) v(s) = 1.0;
  }
  v /= v.norm();
  return PureStateVector(std::move(v));
}

Eigen::Vector4cd central_pair_state(int s, int m_s) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double h = 1.0 / std::sqrt(2.0);
  if (s == 1 && m_s == 1) {
    v(0) = 1.0;
  } else if (s == 1 && m_s == 0) {
    v(1) = v(2) = h;
  } else if (s == 1 && m_s == -1) {
    v(3) = 1.0;
  } else if (s == 0 && m_s == 0) {
    v(1) = h;
    v(2) = -h;
  } else {
    throw Error(ErrorCode::Domain, "central pair state needs S in {0, 1} and |M_S| <= S");
  }
  return v;
}

PureStateVector full_product_state(const Eigen::Vector4cd& pair, const PureStateVector& bath) {
  const Eigen::Index nb = bath.dimension();
  Eigen::VectorXcd v(4 * nb);
  for (Eigen::Index p = 0; p < 4; ++p) v.segment(p * nb, nb) = pair(p) * bath.amplitudes();
  return PureStateVector(std::move(v));
}

PairDensityMatrix partial_trace_to_pair(const PureStateVector& psi, int n_bath) {
  require_full_bath(n_bath);
  const Eigen::Index nb = Eigen::Index{1} << n_bath;
  if (psi.dimension() != 4 * nb) {
    std::ostringstream os;
    os << "state dimension " << psi.dimension() << " vs 2^(n_bath+2) = " << 4 * nb;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  const Eigen::MatrixXcd m = psi.amplitudes().reshaped<Eigen::RowMajor>(4, nb);
  return PairDensityMatrix(m * m.adjoint());
}

Eigen::MatrixXcd full_pair_s_squared(int n_bath) {
  require_full_bath(n_bath);
  return collective_s_squared(n_bath + 2, 0, 2);
}

Eigen::MatrixXcd full_bath_j_squared(int n_bath) {
  require_full_bath(n_bath);
  return collective_s_squared(n_bath + 2, 2, n_bath + 2);
}

Eigen::MatrixXcd full_total_sz(int n_bath) {
  require_full_bath(n_bath);
  return build_full_hamiltonian(n_bath, 1.0, 0.0).entries();
}

double wootters_concurrence(const PairDensityMatrix& rho) {
  // Write rho = W W^+ with columns w_i = sqrt(mu_i) v_i over the nonzero
  // spectrum. The singular values of tau = W^T (sy x sy) W are the square
  // roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), without taking
  // square roots of rounding noise.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.entries());
  const Eigen::Vector4d mu = es.eigenvalues();
  std::vector<int> kept;
  for (int i = 0; i < 4; ++i) {
    if (mu(i) > kSpectrumCutoff) kept.push_back(i);
  }
  Eigen::MatrixXcd w(4, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) = std::sqrt(mu(kept[c])) * es.eigenvectors().col(kept[c]);
  }
  const Eigen::MatrixXcd tau = w.transpose() * spin_flip() * w;

  std::array<double, 4> lam{};
  if (tau.size() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
    const Eigen::VectorXd sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) lam[static_cast<std::size_t>(i)] = sv(i);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

Eigen::Matrix4cd pair_matrix(const XState& s) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = s.a;
  m(1, 1) = s.b;
  m(1, 2) = s.c;
  m(2, 1) = std::conj(s.c);
  m(2, 2) = s.d;
  m(3, 3) = s.e;
  return m;
}

Eigen::Matrix4cd pair_matrix(const SymmetricXState& s) { return pair_matrix(s.to_xstate()); }

}  // namespace spinstar::oracle
