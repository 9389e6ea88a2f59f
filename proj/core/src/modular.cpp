#include "qthermo/modular.hpp"

#include <cmath>
#include <string>

namespace qthermo {

namespace {

CMat apply_spectral(const HermitianSpectrum& s, const CVec& f) {
  return s.eigenvectors * f.asDiagonal() * s.eigenvectors.adjoint();
}

bool spectrum_faithful(const HermitianSpectrum& s) {
  return s.eigenvalues.minCoeff() > positivity_floor(s.eigenvalues) && s.eigenvalues.maxCoeff() > 0.0;
}

CMat log_of(const HermitianSpectrum& s) {
  if (!spectrum_faithful(s)) throw SingularityError("log of a singular density");
  CVec f(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = std::log(s.eigenvalues(k));
  return apply_spectral(s, f);
}

CMat ipow_of(const HermitianSpectrum& s, double t) {
  if (!spectrum_faithful(s)) throw SingularityError("imaginary power of a singular density");
  CVec f(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = std::polar(1.0, t * std::log(s.eigenvalues(k)));
  return apply_spectral(s, f);
}

CMat inverse_of(const HermitianSpectrum& s) {
  if (!spectrum_faithful(s)) throw SingularityError("inverse of a singular density");
  return apply_spectral(s, s.eigenvalues.cwiseInverse().cast<cplx>());
}

}  // namespace

StandardForm::StandardForm(MultiMatrixAlgebra m) : m_(std::move(m)) {
  int off = 0;
  for (int n : m_.block_dims()) {
    offsets_.push_back(off);
    off += n * n;
  }
}

CVec StandardForm::vec(const AlgebraElement& x) const {
  CVec v(dim());
  for (int i = 0; i < m_.num_blocks(); ++i) {
    const int n = m_.block_dim(i);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v(offsets_[static_cast<std::size_t>(i)] + a * n + b) = x.blocks[static_cast<std::size_t>(i)](a, b);
  }
  return v;
}

AlgebraElement StandardForm::unvec(const CVec& v) const {
  AlgebraElement x = AlgebraElement::zero(m_);
  for (int i = 0; i < m_.num_blocks(); ++i) {
    const int n = m_.block_dim(i);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) x.blocks[static_cast<std::size_t>(i)](a, b) = v(offsets_[static_cast<std::size_t>(i)] + a * n + b);
  }
  return x;
}

CMat StandardForm::left(const AlgebraElement& m) const {
  std::vector<CMat> blocks;
  for (int i = 0; i < m_.num_blocks(); ++i) {
    const int n = m_.block_dim(i);
    blocks.push_back(kron(m.blocks[static_cast<std::size_t>(i)], CMat::Identity(n, n)));
  }
  return block_diag(blocks);
}

CMat StandardForm::right(const AlgebraElement& m) const {
  std::vector<CMat> blocks;
  for (int i = 0; i < m_.num_blocks(); ++i) {
    const int n = m_.block_dim(i);
    blocks.push_back(kron(CMat::Identity(n, n), m.blocks[static_cast<std::size_t>(i)].transpose()));
  }
  return block_diag(blocks);
}

CVec StandardForm::J(const CVec& v) const { return vec(unvec(v).adjoint()); }

CVec vector_rep(const State& phi) {
  if (!phi.faithful) throw SingularityError("vector_rep: state is not faithful");
  AlgebraElement x;
  for (int i = 0; i < phi.algebra.num_blocks(); ++i) x.blocks.push_back(mat_sqrt(phi.weighted(i)));
  return StandardForm(phi.algebra).vec(x);
}

RelativeModular::RelativeModular(const State& phi, const State& psi)
    : m_(phi.algebra) {
  if (!(phi.algebra == psi.algebra)) throw ValidationError("relative_modular: algebra mismatch");
  if (!psi.faithful) throw SingularityError("relative_modular: psi is not faithful");
  for (int i = 0; i < m_.num_blocks(); ++i) {
    phi_.push_back(herm_eig(phi.weighted(i)));
    psi_.push_back(herm_eig(psi.weighted(i)));
  }
}

AlgebraElement RelativeModular::apply(const AlgebraElement& x) const {
  AlgebraElement y;
  for (std::size_t i = 0; i < phi_.size(); ++i)
    y.blocks.push_back(reconstruct(phi_[i]) * x.blocks[i] * inverse_of(psi_[i]));
  return y;
}

AlgebraElement RelativeModular::apply_log(const AlgebraElement& x) const {
  AlgebraElement y;
  for (std::size_t i = 0; i < phi_.size(); ++i)
    y.blocks.push_back(log_of(phi_[i]) * x.blocks[i] - x.blocks[i] * log_of(psi_[i]));
  return y;
}

AlgebraElement RelativeModular::apply_it(const AlgebraElement& x, double t) const {
  AlgebraElement y;
  for (std::size_t i = 0; i < phi_.size(); ++i)
    y.blocks.push_back(ipow_of(phi_[i], t) * x.blocks[i] * ipow_of(psi_[i], -t));
  return y;
}

CMat RelativeModular::dense() const {
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < phi_.size(); ++i)
    blocks.push_back(kron(reconstruct(phi_[i]), inverse_of(psi_[i]).transpose()));
  return block_diag(blocks);
}

CMat RelativeModular::log_dense() const {
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    const Eigen::Index n = phi_[i].eigenvalues.size();
    const CMat id = CMat::Identity(n, n);
    blocks.push_back(kron(log_of(phi_[i]), id) - kron(id, log_of(psi_[i]).transpose()));
  }
  return block_diag(blocks);
}

CMat RelativeModular::it_dense(double t) const {
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < phi_.size(); ++i)
    blocks.push_back(kron(ipow_of(phi_[i], t), ipow_of(psi_[i], -t).transpose()));
  return block_diag(blocks);
}

RelativeModular relative_modular(const State& phi, const State& psi) { return {phi, psi}; }

double araki_entropy(const State& phi, const State& psi) {
  if (!(phi.algebra == psi.algebra)) throw ValidationError("araki_entropy: algebra mismatch");
  double s = 0.0;
  for (int i = 0; i < phi.algebra.num_blocks(); ++i) {
    const CMat wpsi = psi.weighted(i);
    if (psi.weights(i) <= 0.0) continue;
    const HermitianSpectrum sphi = herm_eig(phi.weighted(i));
    const HermitianSpectrum spsi = herm_eig(wpsi);
    const double fphi = positivity_floor(sphi.eigenvalues);
    const double fpsi = positivity_floor(spsi.eigenvalues);
    // log on the support of phi; psi must not charge the kernel
    CVec lphi(sphi.eigenvalues.size());
    CMat kernel = CMat::Zero(wpsi.rows(), wpsi.cols());
    for (Eigen::Index k = 0; k < lphi.size(); ++k) {
      const double x = sphi.eigenvalues(k);
      if (phi.weights(i) > 0.0 && x > fphi) {
        lphi(k) = std::log(x);
      } else {
        lphi(k) = 0.0;
        kernel += sphi.eigenvectors.col(k) * sphi.eigenvectors.col(k).adjoint();
      }
    }
    if ((wpsi * kernel).trace().real() > 1e-12 * std::max(1.0, wpsi.trace().real()))
      return kInfiniteEntropy;
    CVec lpsi(spsi.eigenvalues.size());
    CVec root(spsi.eigenvalues.size());
    for (Eigen::Index k = 0; k < lpsi.size(); ++k) {
      const double x = spsi.eigenvalues(k);
      lpsi(k) = x > fpsi ? std::log(x) : 0.0;
      root(k) = x > fpsi ? std::sqrt(x) : 0.0;
    }
    const CMat eta = apply_spectral(spsi, root);
    const CMat log_eta = apply_spectral(sphi, lphi) * eta - eta * apply_spectral(spsi, lpsi);
    s -= (eta.adjoint() * log_eta).trace().real();
  }
  return s;
}

AlgebraElement modular_flow(const State& phi, double t, const AlgebraElement& x) {
  AlgebraElement y;
  for (int i = 0; i < phi.algebra.num_blocks(); ++i) {
    const HermitianSpectrum s = herm_eig(phi.weighted(i));
    y.blocks.push_back(ipow_of(s, t) * x.blocks[static_cast<std::size_t>(i)] * ipow_of(s, -t));
  }
  return y;
}

AlgebraElement connes_cocycle(const State& phi, const State& omega, double t) {
  if (!(phi.algebra == omega.algebra)) throw ValidationError("connes_cocycle: algebra mismatch");
  if (!phi.faithful || !omega.faithful) throw SingularityError("connes_cocycle: states must be faithful");
  AlgebraElement u;
  for (int i = 0; i < phi.algebra.num_blocks(); ++i)
    u.blocks.push_back(mat_ipow(phi.weighted(i), t) * mat_ipow(omega.weighted(i), -t));
  return u;
}

int RepresentedPair::joint_dim() const {
  int d = 0;
  for (std::size_t z = 0; z < a_dims.size(); ++z) d += a_dims[z] * b_dims[z];
  return d;
}

CMat RepresentedPair::lift(const CMat& joint) const {
  if (frame.size() == 0) return joint;
  return frame * joint * frame.adjoint();
}

CMat RepresentedPair::lift_a(const std::vector<CMat>& a) const {
  std::vector<CMat> blocks;
  for (std::size_t z = 0; z < a_dims.size(); ++z)
    blocks.push_back(kron(a[z], CMat::Identity(b_dims[z], b_dims[z])));
  return lift(block_diag(blocks));
}

CMat RepresentedPair::lift_b(const std::vector<CMat>& b) const {
  std::vector<CMat> blocks;
  for (std::size_t z = 0; z < a_dims.size(); ++z)
    blocks.push_back(kron(CMat::Identity(a_dims[z], a_dims[z]), b[z]));
  return lift(block_diag(blocks));
}

SpatialDerivative::SpatialDerivative(RepresentedPair pair, std::vector<CMat> rho, std::vector<CMat> sigma)
    : pair_(std::move(pair)), rho_(std::move(rho)), sigma_(std::move(sigma)) {
  if (pair_.a_dims.size() != pair_.b_dims.size() || rho_.size() != pair_.a_dims.size() ||
      sigma_.size() != pair_.b_dims.size())
    throw ValidationError("spatial_derivative: inconsistent block data");
  for (std::size_t z = 0; z < rho_.size(); ++z) {
    if (rho_[z].rows() != pair_.a_dims[z] || sigma_[z].rows() != pair_.b_dims[z])
      throw ValidationError("spatial_derivative: block " + std::to_string(z) + " has wrong size");
    if (sigma_[z].size() && !spectrum_faithful(herm_eig(sigma_[z])))
      throw SingularityError("spatial_derivative: commutant functional is not faithful");
  }
  if (pair_.frame.size() && pair_.frame.cols() != pair_.joint_dim())
    throw ValidationError("spatial_derivative: frame does not match joint blocks");
}

// A joint block with one side of size zero carries no vectors.
bool SpatialDerivative::empty_block(std::size_t z) const { return pair_.a_dims[z] == 0 || pair_.b_dims[z] == 0; }

CMat SpatialDerivative::dense() const {
  std::vector<CMat> blocks;
  for (std::size_t z = 0; z < rho_.size(); ++z)
    blocks.push_back(empty_block(z) ? CMat() : kron(rho_[z], inverse_of(herm_eig(sigma_[z]))));
  return pair_.lift(block_diag(blocks));
}

CMat SpatialDerivative::log_dense() const {
  std::vector<CMat> blocks;
  for (std::size_t z = 0; z < rho_.size(); ++z) {
    if (empty_block(z)) continue;
    const CMat ia = CMat::Identity(pair_.a_dims[z], pair_.a_dims[z]);
    const CMat ib = CMat::Identity(pair_.b_dims[z], pair_.b_dims[z]);
    blocks.push_back(kron(log_of(herm_eig(rho_[z])), ib) - kron(ia, log_of(herm_eig(sigma_[z]))));
  }
  return pair_.lift(block_diag(blocks));
}

CMat SpatialDerivative::it_dense(double t) const {
  std::vector<CMat> blocks;
  for (std::size_t z = 0; z < rho_.size(); ++z)
    if (!empty_block(z)) blocks.push_back(kron(ipow_of(herm_eig(rho_[z]), t), ipow_of(herm_eig(sigma_[z]), -t)));
  return pair_.lift(block_diag(blocks));
}

SpatialDerivative spatial_derivative(const RepresentedPair& pair, const std::vector<CMat>& rho,
                                     const std::vector<CMat>& sigma) {
  return {pair, rho, sigma};
}

}  // namespace qthermo
