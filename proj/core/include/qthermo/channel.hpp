#pragma once

#include <functional>
#include <vector>

#include "qthermo/algebra.hpp"

namespace qthermo {

/// Unital completely positive map alpha: N -> M (Heisenberg picture).
/// Stored as Choi blocks C_ij = sum_ab e_ab (x) alpha(e_ab)_j for source
/// block i and target block j; row index of C_ij is a*q_j + c.
struct Channel {
  MultiMatrixAlgebra source;  // N
  MultiMatrixAlgebra target;  // M
  std::vector<std::vector<CMat>> choi;
  bool faithful = false;

  AlgebraElement operator()(const AlgebraElement& n) const;
  /// Trace dual: tr(predual(y) x) = tr(y alpha(x)).
  AlgebraElement predual(const AlgebraElement& y) const;

  using Map = std::function<AlgebraElement(const AlgebraElement&)>;
  /// Choi data of an arbitrary linear map (no validation).
  static Channel from_map(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m, const Map& f);
};

struct ChoiReport {
  double worst_eigenvalue = 0.0;
  double unitality_error = 0.0;
  bool faithful = false;
};

ChoiReport inspect_channel(const Channel& alpha);

/// Checks Choi positivity and unitality (1e-10); returns the channel with
/// symmetrized Choi blocks and the faithfulness flag set.
Channel validate_channel(const Channel& alpha);

struct KrausOperator {
  int source_block = 0;
  int target_block = 0;
  double weight = 0.0;  // Choi eigenvalue
  CMat op;              // q_j x n_i
};

/// alpha(x) = sum_a T_a x T_a^*, sum_a T_a T_a^* = 1.
struct KrausSet {
  MultiMatrixAlgebra source;
  MultiMatrixAlgebra target;
  std::vector<KrausOperator> ops;

  int rank() const { return static_cast<int>(ops.size()); }
  /// T_a as a (sum q) x (sum n) matrix.
  CMat dense(int a) const;
};

/// Spectral decomposition of each Choi block; ordered by descending Choi
/// eigenvalue (ties in block order), eigenvector phases as in herm_eig.
KrausSet kraus_decompose(const Channel& alpha);

Channel channel_from_kraus(const KrausSet& k);
/// Operators given as (sum q) x (sum n) matrices; the map must land in M.
Channel channel_from_kraus(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m,
                           const std::vector<CMat>& ops);

/// beta o alpha.
Channel compose(const Channel& beta, const Channel& alpha);

/// phi_out = phi_in o alpha.
State output_state(const Channel& alpha, const State& phi_in);

/// The unital CP map alpha': M -> N with <alpha(n), m>_phi = <alpha'(m), n>_psi,
/// psi = phi_in o alpha.
Channel transpose_channel(const Channel& alpha, const State& phi_in);

/// Environment-augmented Stinespring pair: rho(n) = n (x) 1_r on
/// C^{sum n} (x) C^r and v: C^{sum q} -> C^{sum n} (x) C^r, v h = sum_k T_k^* h (x) e_k.
struct DilationPair {
  MultiMatrixAlgebra source;
  MultiMatrixAlgebra target;
  int env_dim = 0;
  CMat v;

  CMat rho(const AlgebraElement& n) const;
  AlgebraElement compress(const AlgebraElement& n) const;  // v^* rho(n) v
};

DilationPair stinespring_dilate(const Channel& alpha);
DilationPair stinespring_dilate(const KrausSet& k);

/// (xi_phi, l(m1) r(m2) xi_phi) = sum_j tr(rho^{1/2} m1 rho^{1/2} m2).
cplx bilinear_form(const State& phi, const AlgebraElement& m1, const AlgebraElement& m2);

/// Unital injective *-homomorphism N -> M:
/// theta(x)_j = U_j ((+)_i x_i (x) 1_{Lambda_ij}) U_j^*.
struct Homomorphism {
  MultiMatrixAlgebra source;
  MultiMatrixAlgebra target;
  IMat multiplicity;            // rows: source blocks, cols: target blocks
  std::vector<CMat> unitaries;  // per target block; empty means identity

  AlgebraElement operator()(const AlgebraElement& x) const;
  Channel channel() const;
};

Homomorphism make_homomorphism(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m,
                               const IMat& multiplicity, std::vector<CMat> unitaries = {});

}  // namespace qthermo
