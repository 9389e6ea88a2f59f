#include "qthermo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qthermo {

double hermitian_tolerance(const CMat& a) { return 1e-9 * (1.0 + a.norm()); }

double positivity_floor(const RVec& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return 1e-10 * std::max(0.0, eigenvalues.maxCoeff());
}

namespace {

void fix_phases(CMat& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) best = std::max(best, std::abs(u(r, c)));
    if (best == 0.0) continue;
    Eigen::Index pick = 0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (std::abs(u(r, c)) >= best * (1.0 - 1e-12)) {
        pick = r;
        break;
      }
    }
    const cplx z = u(pick, c);
    u.col(c) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

HermitianSpectrum herm_eig(const CMat& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ValidationError("herm_eig: matrix must be square and non-empty");
  if (!a.allFinite()) throw ValidationError("herm_eig: non-finite entries");
  const double skew = (a - a.adjoint()).norm();
  if (skew > hermitian_tolerance(a))
    throw ValidationError("herm_eig: matrix is not Hermitian (||A-A*|| = " +
                          std::to_string(skew) + ")");
  const CMat sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  if (es.info() != Eigen::Success) throw ConsistencyError("herm_eig: eigensolver failed");
  HermitianSpectrum out{es.eigenvalues(), es.eigenvectors()};
  fix_phases(out.eigenvectors);
  return out;
}

CMat reconstruct(const HermitianSpectrum& s) {
  return s.eigenvectors * s.eigenvalues.cast<cplx>().asDiagonal() * s.eigenvectors.adjoint();
}

CMat func_calc(const CMat& a, MatrixFunction f) {
  const HermitianSpectrum s = herm_eig(a);
  const Eigen::Index n = s.eigenvalues.size();
  CVec fx(n);
  if (f.kind != SpectralFunction::Exp) {
    const double floor = positivity_floor(s.eigenvalues);
    if (s.eigenvalues.minCoeff() <= floor || s.eigenvalues.maxCoeff() <= 0.0)
      throw SingularityError("func_calc: eigenvalue at or below positivity floor (min " +
                             std::to_string(s.eigenvalues.minCoeff()) + ")");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = s.eigenvalues(k);
    switch (f.kind) {
      case SpectralFunction::Log: fx(k) = std::log(x); break;
      case SpectralFunction::Exp: fx(k) = std::exp(x); break;
      case SpectralFunction::ImagPower: fx(k) = std::polar(1.0, f.t * std::log(x)); break;
    }
  }
  return s.eigenvectors * fx.asDiagonal() * s.eigenvectors.adjoint();
}

CMat mat_log(const CMat& a) { return func_calc(a, MatrixFunction::log()); }
CMat mat_exp(const CMat& a) { return func_calc(a, MatrixFunction::exp()); }
CMat mat_ipow(const CMat& a, double t) { return func_calc(a, MatrixFunction::ipow(t)); }

CMat mat_pow(const CMat& a, double p) {
  const HermitianSpectrum s = herm_eig(a);
  const double floor = positivity_floor(s.eigenvalues);
  const double neg_tol = hermitian_tolerance(a);
  RVec fx(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < fx.size(); ++k) {
    const double x = s.eigenvalues(k);
    if (x < -neg_tol) throw ValidationError("mat_pow: matrix is not positive semidefinite");
    fx(k) = (x <= floor) ? 0.0 : std::pow(x, p);
  }
  return s.eigenvectors * fx.cast<cplx>().asDiagonal() * s.eigenvectors.adjoint();
}

CMat mat_sqrt(const CMat& a) { return mat_pow(a, 0.5); }

PerronFrobenius pf_eigen(const RMat& d) {
  if (d.size() == 0) throw ValidationError("pf_eigen: empty matrix");
  if ((d.array() < 0.0).any()) throw ValidationError("pf_eigen: negative entry");
  if (!(d.array() > 0.0).any()) throw ValidationError("pf_eigen: all-zero matrix");
  const RMat g = d.transpose() * d;
  Eigen::SelfAdjointEigenSolver<RMat> es(g);
  const Eigen::Index top = g.rows() - 1;
  PerronFrobenius out;
  out.norm = std::sqrt(std::max(0.0, es.eigenvalues()(top)));
  out.right = es.eigenvectors().col(top).cwiseAbs();
  out.right /= out.right.norm();
  out.left = d * out.right;
  out.left /= out.left.norm();
  return out;
}

double op_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat range_basis(const CMat& psd, double rel_cut) {
  const HermitianSpectrum s = herm_eig(psd);
  const double top = std::max(0.0, s.eigenvalues.maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = s.eigenvalues.size() - 1; k >= 0; --k)
    if (top > 0.0 && s.eigenvalues(k) > rel_cut * top) keep.push_back(k);
  CMat out(psd.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(c) = s.eigenvectors.col(keep[c]);
  return out;
}

CMat pinv(const CMat& a, double rel_cut) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  RVec inv(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    inv(k) = (top > 0.0 && sv(k) > rel_cut * top) ? 1.0 / sv(k) : 0.0;
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

CMat block_diag(const std::vector<CMat>& blocks) {
  Eigen::Index n = 0, m = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    m += b.cols();
  }
  CMat out = CMat::Zero(n, m);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}


}  // namespace qthermo
