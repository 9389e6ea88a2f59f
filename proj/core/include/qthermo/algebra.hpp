#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qthermo/numerics.hpp"
#include "qthermo/random.hpp"

namespace qthermo {

/// Finite direct sum of full matrix blocks M_{n_1} + ... + M_{n_k}.
class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra() = default;
  explicit MultiMatrixAlgebra(std::vector<int> block_dims);

  const std::vector<int>& block_dims() const { return dims_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  /// Sum of n_i: size of the defining (block diagonal) representation.
  int rep_dim() const { return rep_dim_; }
  /// Sum of n_i^2.
  int dimension() const { return dimension_; }
  /// Offset of block i inside the defining representation.
  int offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  bool is_factor() const { return dims_.size() == 1; }

  friend bool operator==(const MultiMatrixAlgebra& a, const MultiMatrixAlgebra& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int rep_dim_ = 0;
  int dimension_ = 0;
};

/// Element of a multi-matrix algebra, one square matrix per block.
struct AlgebraElement {
  std::vector<CMat> blocks;

  static AlgebraElement zero(const MultiMatrixAlgebra& a);
  static AlgebraElement identity(const MultiMatrixAlgebra& a);
  /// Matrix unit e_{rs} of block i.
  static AlgebraElement unit(const MultiMatrixAlgebra& a, int i, int r, int s);
  /// Block-diagonal compression of a rep_dim x rep_dim matrix.
  static AlgebraElement from_dense(const MultiMatrixAlgebra& a, const CMat& m);

  CMat dense() const;
  AlgebraElement adjoint() const;
  AlgebraElement transpose() const;
  double norm() const;  // Frobenius over all blocks
  bool conforms(const MultiMatrixAlgebra& a) const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx s);
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, AlgebraElement a);

/// Weights mu_i and trace-one densities rho_i.
struct State {
  MultiMatrixAlgebra algebra;
  RVec weights;
  std::vector<CMat> densities;
  bool faithful = false;

  /// mu_i rho_i
  CMat weighted(int i) const;
  std::vector<CMat> weighted_blocks() const;
  cplx operator()(const AlgebraElement& m) const;

  static State tracial(const MultiMatrixAlgebra& a);
  /// Builds a state from weighted densities (need not be normalized).
  static State from_weighted(const MultiMatrixAlgebra& a, const std::vector<CMat>& w);
};

/// Normalizes weights and densities, checks positivity and sets the
/// faithfulness flag.  Throws ValidationError on structural mismatch, a
/// negative eigenvalue, or (when require_faithful) a non-faithful state.
State validate_state(const State& s, bool require_faithful = false);

/// Block identities p_i.
std::vector<AlgebraElement> central_atoms(const MultiMatrixAlgebra& a);

/// N (x) M^op with blocks of size n_i q_j, indexed by pairs (i, j) in
/// lexicographic order; m^o is realized as m^T on the second slot.
struct OppositeTensor {
  MultiMatrixAlgebra left;
  MultiMatrixAlgebra right;
  MultiMatrixAlgebra algebra;
  std::vector<std::pair<int, int>> pairs;

  int block_of(int i, int j) const { return i * right.num_blocks() + j; }
  AlgebraElement embed_left(const AlgebraElement& n) const;   // n (x) 1
  AlgebraElement embed_right(const AlgebraElement& m) const;  // 1 (x) m^T
};

OppositeTensor opposite_tensor(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m);

AlgebraElement random_element(const MultiMatrixAlgebra& a, Rng& rng);
AlgebraElement random_self_adjoint(const MultiMatrixAlgebra& a, Rng& rng);
State random_faithful_state(const MultiMatrixAlgebra& a, Rng& rng);

/// All matrix units (block, row, col) in block-major, row-major order.
std::vector<std::array<int, 3>> matrix_units(const MultiMatrixAlgebra& a);

}  // namespace qthermo
