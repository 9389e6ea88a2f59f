#include "qthermo/thermo.hpp"

#include <cmath>
#include <limits>

namespace qthermo {

namespace {

std::size_t sz(int x) { return static_cast<std::size_t>(x); }

void check_states(const Bimodule& h, const State& phi, const State& psi) {
  if (!(phi.algebra == h.left_algebra()) || !(psi.algebra == h.right_algebra()))
    throw ValidationError("bimodule modular operator: states live on the wrong algebras");
  if (!phi.faithful || !psi.faithful) throw SingularityError("bimodule modular operator: states must be faithful");
}

double expect(const CVec& xi, const CMat& a) { return xi.dot(a * xi).real(); }

}  // namespace

void ThermoConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("k must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("tolerance must be positive");
}

SpatialDerivative bimodule_modular(const Bimodule& h, const State& phi, const State& psi) {
  check_states(h, phi, psi);
  const RMat t = minimal_weights(h.multiplicity());
  RepresentedPair pair{h.right_commutant_dims(), {}, h.right_frame()};
  std::vector<CMat> rho, sigma;
  for (int j = 0; j < h.right_algebra().num_blocks(); ++j) {
    pair.b_dims.push_back(h.right_algebra().block_dim(j));
    std::vector<CMat> parts;
    for (int i = 0; i < h.left_algebra().num_blocks(); ++i) {
      const int m = h.multiplicity()(i, j);
      if (m > 0) parts.push_back(t(i, j) * kron(phi.weighted(i), CMat::Identity(m, m)));
    }
    rho.push_back(block_diag(parts));
    sigma.push_back(psi.weighted(j).transpose());
  }
  return spatial_derivative(pair, rho, sigma);
}

SpatialDerivative bimodule_modular_dual(const Bimodule& h, const State& phi, const State& psi) {
  check_states(h, phi, psi);
  const IMat mt = h.multiplicity().transpose();
  const RMat t = minimal_weights(mt);  // rows: right blocks
  RepresentedPair pair{{}, h.left_commutant_dims(), h.left_frame()};
  std::vector<CMat> rho, sigma;
  for (int i = 0; i < h.left_algebra().num_blocks(); ++i) {
    pair.a_dims.push_back(h.left_algebra().block_dim(i));
    std::vector<CMat> parts;
    for (int j = 0; j < h.right_algebra().num_blocks(); ++j) {
      const int m = h.multiplicity()(i, j);
      if (m > 0) parts.push_back(t(j, i) * kron(CMat::Identity(m, m), psi.weighted(j).transpose()));
    }
    rho.push_back(phi.weighted(i));
    sigma.push_back(block_diag(parts));
  }
  return spatial_derivative(pair, rho, sigma);
}

CMat physical_unitary(const Bimodule& h, const State& phi, const State& psi, double t, UnitaryForm form) {
  if (form == UnitaryForm::Product) {
    CMat u = bimodule_modular(h, phi, psi).it_dense(t);
    for (const auto& p : h.pieces()) {
      const int len = h.left_algebra().block_dim(p.i) * p.mult * h.right_algebra().block_dim(p.j);
      u.middleCols(p.offset, len) *= std::exp(cplx(0.0, t * std::log(static_cast<double>(p.mult))));
    }
    return u;
  }
  check_states(h, phi, psi);
  CMat u = CMat::Zero(h.dim(), h.dim());
  for (const auto& p : h.pieces()) {
    const CMat a = mat_ipow(phi.densities[sz(p.i)], t);
    const CMat b = mat_ipow(psi.densities[sz(p.j)].transpose(), -t);
    const int len = static_cast<int>(a.rows()) * p.mult * static_cast<int>(b.rows());
    u.block(p.offset, p.offset, len, len) = kron(kron(a, CMat::Identity(p.mult, p.mult)), b);
  }
  return u;
}

ChannelThermo::ChannelThermo(GnsBimodule g, ThermoConfig cfg)
    : g_(std::move(g)), cfg_(cfg), delta_(bimodule_modular(g_.h, g_.phi_out, g_.phi_in)) {
  cfg_.validate();
  log_d_ = CMat::Zero(g_.h.dim(), g_.h.dim());
  for (const auto& p : g_.h.pieces()) {
    const int len = g_.h.left_algebra().block_dim(p.i) * p.mult * g_.h.right_algebra().block_dim(p.j);
    log_d_.block(p.offset, p.offset, len, len) =
        std::log(static_cast<double>(p.mult)) * CMat::Identity(len, len);
  }
}

double ChannelThermo::entropy() const { return -expect(g_.xi, delta_.log_dense()); }

CMat ChannelThermo::hamiltonian() const { return -(delta_.log_dense() + log_d_) / cfg_.beta; }

double ChannelThermo::mean_energy() const { return expect(g_.xi, hamiltonian()); }

double ChannelThermo::free_energy() const { return -expect(g_.xi, log_d_) / cfg_.beta; }

double ChannelThermo::free_energy_from_energy() const { return mean_energy() - entropy() / cfg_.beta; }

double ChannelThermo::partition() const {
  const CMat d = matrix_dimension(g_.h).op;
  return expect(g_.xi, d * delta_.dense());
}

ChannelThermo channel_thermo(const Channel& alpha, const State& phi_in, const ThermoConfig& cfg, std::uint64_t seed) {
  return ChannelThermo(gns_bimodule(alpha, phi_in, seed), cfg);
}

FreeEnergyInfimum free_energy_infimum(const Channel& alpha, const IMat& multiplicity, const ThermoConfig& cfg) {
  cfg.validate();
  if (multiplicity.rows() != alpha.source.num_blocks() || multiplicity.cols() != alpha.target.num_blocks())
    throw ValidationError("free energy infimum: multiplicity matrix has wrong shape");
  const std::vector<AlgebraElement> atoms = central_atoms(alpha.source);
  AlgebraElement x = AlgebraElement::zero(alpha.target);
  for (int i = 0; i < alpha.source.num_blocks(); ++i) {
    const AlgebraElement img = alpha(atoms[sz(i)]);
    for (int j = 0; j < alpha.target.num_blocks(); ++j)
      if (multiplicity(i, j) > 1) x.blocks[sz(j)] += std::log(static_cast<double>(multiplicity(i, j))) * img.blocks[sz(j)];
  }
  FreeEnergyInfimum out;
  double top = -std::numeric_limits<double>::infinity();
  for (const CMat& xj : x.blocks) {
    out.levels.push_back(herm_eig(xj).eigenvalues.maxCoeff());
    top = std::max(top, out.levels.back());
  }
  out.value = -top / cfg.beta;
  out.attained = true;
  for (const CMat& xj : x.blocks)
    if ((xj - top * CMat::Identity(xj.rows(), xj.cols())).norm() > 1e-9 * (1.0 + std::abs(top))) out.attained = false;
  return out;
}

ThermoReport landauer_verdict(const Channel& alpha, const State& phi_in, const ThermoConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const ChannelThermo th = channel_thermo(alpha, phi_in, cfg, seed);
  const Bimodule& h = th.gns().h;
  ThermoReport r;
  r.multiplicity = h.multiplicity();
  r.connected = is_connected(r.multiplicity);
  r.dimension = pf_eigen(r.multiplicity.cast<double>()).norm;
  r.index = r.dimension * r.dimension;
  r.entropy = th.entropy();
  r.energy = th.mean_energy();
  r.free_energy = th.free_energy_from_energy();
  r.free_energy_theorem = th.free_energy();
  const FreeEnergyInfimum inf = free_energy_infimum(alpha, r.multiplicity, cfg);
  r.free_energy_infimum = inf.value;
  r.infimum_attained = inf.attained;
  r.landauer_bound = cfg.kT() * std::log(2.0);
  r.reversible = std::abs(inf.value) <= cfg.tol;
  r.bound_satisfied = r.reversible || -inf.value >= r.landauer_bound - 1e-9;
  r.consistency_residual = std::abs(r.free_energy - r.free_energy_theorem);
  if (r.consistency_residual > cfg.tol)
    throw ConsistencyError("free energy routes disagree: |E - S/beta - F| = " + std::to_string(r.consistency_residual));
  if (r.entropy < -cfg.tol) throw ConsistencyError("negative channel entropy: " + std::to_string(r.entropy));
  if (r.free_energy_theorem > cfg.tol)
    throw ConsistencyError("positive incremental free energy: " + std::to_string(r.free_energy_theorem));
  return r;
}

}  // namespace qthermo
