#pragma once

#include <cstdint>
#include <vector>

#include "qthermo/bimodule.hpp"

namespace qthermo {

/// A ⊂ B with Lambda_ij = multiplicity of A-block i inside B-block j.
struct InclusionData {
  MultiMatrixAlgebra sub;
  MultiMatrixAlgebra ambient;
  IMat lambda;
};

/// Lambda read off from the ranks of theta(p_i) in each block of B.
InclusionData inclusion_matrix(const Homomorphism& theta);

/// Connected components of the bipartite graph with an edge (i, j) wherever
/// m_ij > 0.  Row and column indices of each component, ascending; isolated
/// rows or columns form their own components.
struct Component {
  std::vector<int> rows;
  std::vector<int> cols;
};

std::vector<Component> connected_components(const IMat& m);
bool is_connected(const IMat& m);

/// d_ij = m_ij, with operator form D = sum d_ij l(p_i) r(q_j).
struct DimensionMatrix {
  RMat d;
  CMat op;
};

DimensionMatrix matrix_dimension(const Bimodule& h);

/// ||D_H||; ValidationError when H is not connected.
double scalar_dimension(const Bimodule& h);
/// ||D|| of each connected component (components with edges only).
std::vector<double> component_dimensions(const Bimodule& h);
/// d_H^2
double bimodule_index(const Bimodule& h);

/// Conditional expectation onto A in standard position: B-block j is
/// (+)_i C^{n_i} (x) C^{Lambda_ij} (i ascending) after the optional
/// per-block unitary, and
///   E(b)_i = sum_j (id (x) tr(w_ij .)) (U_j^* b_j U_j restricted to the i-th summand)
/// with w_ij >= 0 of size Lambda_ij and sum_j tr w_ij = 1.
struct Expectation {
  InclusionData inclusion;
  std::vector<std::vector<CMat>> weights;
  std::vector<CMat> unitaries;  // empty means identity

  AlgebraElement apply(const AlgebraElement& b) const;
  /// The inclusion A -> B.
  AlgebraElement embed(const AlgebraElement& a) const;
  /// E as a unital CP map with source B and target A.
  Channel channel() const;
};

Expectation make_expectation(const InclusionData& inc, std::vector<std::vector<CMat>> weights,
                             std::vector<CMat> unitaries = {});

/// Expectation with scalar weights w_ij = t_ij 1.
Expectation scalar_expectation(const InclusionData& inc, const RMat& t, std::vector<CMat> unitaries = {});

/// max_j sum_i tr(w_ij^{-1}); +infinity when a weight is singular.
double expectation_index(const Expectation& e);

/// t_ij = s_j / (Lambda s)_i per connected component, s the Perron-Frobenius
/// right singular vector; zero where Lambda_ij = 0.
RMat minimal_weights(const IMat& lambda);

struct MinimalExpectation {
  Expectation e;
  double index = 0.0;         // max over components of ||Lambda_c||^2
  int trials = 0;
  double worst_margin = 0.0;  // min over perturbations of index(E') - index
  bool certified = false;     // worst_margin >= -1e-9
};

/// Minimal expectation with a perturbation certificate (seeded).
MinimalExpectation minimal_expectation(const InclusionData& inc, std::uint64_t seed = 0, int trials = 200);
MinimalExpectation minimal_expectation(const Homomorphism& theta, std::uint64_t seed = 0, int trials = 200);

/// The commutant algebra r(M)' = (+)_j M_{a_j} of a bimodule and the
/// inclusion l: N -> r(M)'.
Homomorphism left_embedding(const Bimodule& h);

/// Phi = l^{-1} o eps: r(M)' -> N for the minimal expectation eps of
/// l(N) ⊂ r(M)'; Phi o l = id.
Channel left_inverse(const GnsBimodule& g);

}  // namespace qthermo
