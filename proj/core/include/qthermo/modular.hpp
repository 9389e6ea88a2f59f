#pragma once

#include <limits>
#include <vector>

#include "qthermo/algebra.hpp"

namespace qthermo {

/// L^2(M) as block matrices.  A vector is the concatenation over blocks of
/// the row-major entries of x_i, so x_i[a][b] sits at a*n_i + b and the
/// left action acts on the first tensor slot, the right action (m^T) on the
/// second.
class StandardForm {
 public:
  explicit StandardForm(MultiMatrixAlgebra m);

  const MultiMatrixAlgebra& algebra() const { return m_; }
  int dim() const { return m_.dimension(); }

  CVec vec(const AlgebraElement& x) const;
  AlgebraElement unvec(const CVec& v) const;
  CMat left(const AlgebraElement& m) const;   // x -> m x
  CMat right(const AlgebraElement& m) const;  // x -> x m
  CVec J(const CVec& v) const;                // x -> x*
  cplx inner(const CVec& x, const CVec& y) const { return x.dot(y); }

 private:
  MultiMatrixAlgebra m_;
  std::vector<int> offsets_;
};

/// (+)_i sqrt(mu_i) rho_i^{1/2}.  SingularityError if phi is not faithful.
CVec vector_rep(const State& phi);

/// x -> rho_phi x rho_psi^{-1} blockwise, weights folded into the densities.
class RelativeModular {
 public:
  RelativeModular(const State& phi, const State& psi);

  AlgebraElement apply(const AlgebraElement& x) const;
  AlgebraElement apply_log(const AlgebraElement& x) const;
  AlgebraElement apply_it(const AlgebraElement& x, double t) const;

  /// Matrices on L^2(M) in the StandardForm basis.
  CMat dense() const;
  CMat log_dense() const;
  CMat it_dense(double t) const;

 private:
  MultiMatrixAlgebra m_;
  std::vector<HermitianSpectrum> phi_, psi_;
};

RelativeModular relative_modular(const State& phi, const State& psi);

/// -(eta, log Delta(phi|psi) eta) with eta the cone vector of psi; +infinity
/// when psi has weight outside the support of phi.
double araki_entropy(const State& phi, const State& psi);

inline constexpr double kInfiniteEntropy = std::numeric_limits<double>::infinity();

/// sigma_t^phi(x) = rho^{it} x rho^{-it} blockwise.
AlgebraElement modular_flow(const State& phi, double t, const AlgebraElement& x);

/// (Dphi : Domega)_t = rho_phi^{it} rho_omega^{-it} (weighted densities).
AlgebraElement connes_cocycle(const State& phi, const State& omega, double t);

/// Commuting pair A = (+)_z B(C^{a_z}) (x) 1 and A' = (+)_z 1 (x) B(C^{b_z})
/// on a Hilbert space H.  `frame` maps the joint-block space isometrically
/// into H (columns); an empty frame means H is the joint-block space itself.
struct RepresentedPair {
  std::vector<int> a_dims;
  std::vector<int> b_dims;
  CMat frame;

  int joint_dim() const;
  int dim() const { return frame.size() ? static_cast<int>(frame.rows()) : joint_dim(); }
  /// Embeds block matrices into H.
  CMat lift(const CMat& joint) const;
  CMat lift_a(const std::vector<CMat>& a) const;   // (+) a_z (x) 1
  CMat lift_b(const std::vector<CMat>& b) const;   // (+) 1 (x) b_z
};

/// (+)_z rho_z (x) sigma_z^{-1}, where rho_z are the (weighted) densities of
/// a positive functional on A and sigma_z those of a faithful one on A',
/// each taken with respect to the trace of its own tensor factor.
class SpatialDerivative {
 public:
  SpatialDerivative(RepresentedPair pair, std::vector<CMat> rho, std::vector<CMat> sigma);

  const RepresentedPair& pair() const { return pair_; }
  CMat dense() const;
  CMat log_dense() const;
  CMat it_dense(double t) const;

 private:
  bool empty_block(std::size_t z) const;

  RepresentedPair pair_;
  std::vector<CMat> rho_, sigma_;
};

SpatialDerivative spatial_derivative(const RepresentedPair& pair, const std::vector<CMat>& rho,
                                     const std::vector<CMat>& sigma);

}  // namespace qthermo
