#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qthermo/index.hpp"
#include "qthermo/modular.hpp"

namespace qthermo {

struct ThermoConfig {
  double beta = 1.0;  // inverse temperature
  double k = 1.0;     // Boltzmann constant
  double tol = 1e-8;  // consistency tolerance

  /// ValidationError unless beta, k, tol are positive and finite.
  void validate() const;
  /// k T with T = 1 / (k beta).
  double kT() const { return 1.0 / beta; }
};

/// Delta_H(phi|psi): spatial derivative of phi o l^{-1} o eps on r(M)'
/// against psi o r^{-1} on r(M), eps the minimal expectation onto l(N).
/// phi is a faithful state on N, psi one on M.
SpatialDerivative bimodule_modular(const Bimodule& h, const State& phi, const State& psi);

/// Dual operator: phi o l^{-1} on l(N) against psi o r^{-1} o eps' on l(N)'.
SpatialDerivative bimodule_modular_dual(const Bimodule& h, const State& phi, const State& psi);

enum class UnitaryForm {
  Product,  // Delta^{it} D^{it}
  Central,  // (+)_{ij} U^{H_ij}_t over the factorial pieces
};

/// Physical unitary U_t^H(phi|psi).  Both forms coincide on factorial
/// bimodules.
CMat physical_unitary(const Bimodule& h, const State& phi, const State& psi, double t,
                      UnitaryForm form = UnitaryForm::Product);

/// Thermodynamic quantities of a channel at a given input state.
class ChannelThermo {
 public:
  ChannelThermo(GnsBimodule g, ThermoConfig cfg);

  const GnsBimodule& gns() const { return g_; }
  const ThermoConfig& config() const { return cfg_; }
  const SpatialDerivative& modular() const { return delta_; }

  double entropy() const;                 // -(xi, log Delta xi)
  CMat hamiltonian() const;               // -(log Delta + log D) / beta
  double mean_energy() const;             // (xi, H xi)
  double free_energy() const;             // -(xi, log D xi) / beta
  double free_energy_from_energy() const; // E - S / beta
  double partition() const;               // (xi, e^{-beta H} xi)

 private:
  GnsBimodule g_;
  ThermoConfig cfg_;
  SpatialDerivative delta_;
  CMat log_d_;
};

ChannelThermo channel_thermo(const Channel& alpha, const State& phi_in, const ThermoConfig& cfg,
                             std::uint64_t seed = 0);

struct FreeEnergyInfimum {
  double value = 0.0;           // F_alpha
  bool attained = false;        // by some faithful state
  std::vector<double> levels;   // largest eigenvalue of X_j per target block
};

/// inf over faithful input states of F.  -beta F = sum_j tr(Q_j X_j) with
/// X_j = sum_i log(m_ij) alpha(p_i)_j, so the infimum is
/// -max_j lambda_max(X_j) / beta.
FreeEnergyInfimum free_energy_infimum(const Channel& alpha, const IMat& multiplicity, const ThermoConfig& cfg);

struct ThermoReport {
  std::string label;
  IMat multiplicity;
  bool connected = false;
  double dimension = 0.0;  // ||D||
  double index = 0.0;      // ||D||^2
  double entropy = 0.0;
  double energy = 0.0;
  double free_energy = 0.0;
  double free_energy_theorem = 0.0;  // -(xi, log D xi) / beta
  double free_energy_infimum = 0.0;
  bool infimum_attained = false;
  double landauer_bound = 0.0;  // kT log 2
  bool reversible = false;
  bool bound_satisfied = false;
  double consistency_residual = 0.0;  // |E - S/beta - F_theorem|
};

/// Full analysis.  ConsistencyError when the two free-energy routes or the
/// sign contracts (S >= -tol, F <= tol) disagree beyond cfg.tol.
ThermoReport landauer_verdict(const Channel& alpha, const State& phi_in, const ThermoConfig& cfg,
                              std::uint64_t seed = 0);

}  // namespace qthermo
