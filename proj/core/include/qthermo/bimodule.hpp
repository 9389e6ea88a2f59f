#pragma once

#include <cstdint>
#include <vector>

#include "qthermo/channel.hpp"

namespace qthermo {

/// N-M bimodule in normal form
///   H = (+)_{(i,j): m_ij > 0} C^{n_i} (x) C^{m_ij} (x) C^{q_j},
/// pieces in lexicographic (i, j) order, each stored row-major in its three
/// slots.  l(n) acts by n_i on the first slot, r(m) by m_j^T on the third.
class Bimodule {
 public:
  struct Piece {
    int i = 0;
    int j = 0;
    int mult = 0;
    int offset = 0;
  };

  Bimodule() = default;
  Bimodule(MultiMatrixAlgebra left, MultiMatrixAlgebra right, IMat multiplicity);

  const MultiMatrixAlgebra& left_algebra() const { return left_; }
  const MultiMatrixAlgebra& right_algebra() const { return right_; }
  const IMat& multiplicity() const { return mult_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  int dim() const { return dim_; }
  /// Index into pieces(), or -1.
  int piece_index(int i, int j) const;
  int index(int piece, int a, int k, int c) const;

  CMat left(const AlgebraElement& n) const;
  CMat right(const AlgebraElement& m) const;
  /// l(p_i) r(q_j)
  CMat central_projection(int i, int j) const;
  /// 1 (x) x (x) 1 on one piece, zero elsewhere.
  CMat multiplicity_operator(int piece, const CMat& x) const;

  /// r(M)' = (+)_j B(C^{a_j}) (x) 1_{q_j} with a_j = sum_i n_i m_ij; column
  /// u*q_j + c of block j (u = offset of piece (i,j) plus a*m_ij + k) sits
  /// at the returned position of H.  Blocks with a_j = 0 are kept empty.
  std::vector<int> right_commutant_dims() const;
  /// l(N)' = (+)_i 1_{n_i} (x) B(C^{b_i}) with b_i = sum_j m_ij q_j.
  std::vector<int> left_commutant_dims() const;
  /// Isometry from (+)_j C^{a_j} (x) C^{q_j} onto H.
  CMat right_frame() const;
  /// Isometry from (+)_i C^{n_i} (x) C^{b_i} onto H.
  CMat left_frame() const;
  /// Operator on H of an element of r(M)'.
  CMat right_commutant_element(const std::vector<CMat>& b) const;

  friend bool operator==(const Bimodule& a, const Bimodule& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.mult_ == b.mult_;
  }

 private:
  MultiMatrixAlgebra left_, right_;
  IMat mult_;
  std::vector<Piece> pieces_;
  int dim_ = 0;
};

/// Standard bimodule L^2(M).
Bimodule identity_bimodule(const MultiMatrixAlgebra& m);

/// Arbitrary bimodule on C^dim, given by the images of matrix units (in the
/// order of matrix_units()).  right_units[u] is r(e_u); r is an
/// anti-homomorphism.
struct ConcreteBimodule {
  MultiMatrixAlgebra left_algebra;
  MultiMatrixAlgebra right_algebra;
  int dim = 0;
  std::vector<CMat> left_units;
  std::vector<CMat> right_units;

  CMat left(const AlgebraElement& n) const;
  CMat right(const AlgebraElement& m) const;
};

ConcreteBimodule concrete(const Bimodule& h);

/// Normal form together with the unitary v (columns: normal-form basis
/// vectors expressed in the concrete space), so that
/// concrete.left(n) v = v nf.left(n) and likewise on the right.
struct Decomposition {
  Bimodule nf;
  CMat v;
};

/// Multiplicity spaces are split with the eigenbasis of a seeded random
/// self-adjoint element of the commutant.  ConsistencyError if the actions
/// fail to decompose (non-unital or non-commuting actions).
Decomposition normal_form(const ConcreteBimodule& h, std::uint64_t seed = 0);

/// Bimodule of a channel with its cyclic vector: (xi, l(n) r(m) xi) =
/// <alpha(n), m>_phi.
struct GnsBimodule {
  Channel alpha;
  State phi_in;   // on M
  State phi_out;  // on N
  Bimodule h;
  CVec xi;                    // normal-form coordinates
  ConcreteBimodule gns;       // (+)_{ij} C^{n_i q_j} (x) C^{rank W_ij}
  CVec xi_gns;
  CMat v;                     // normal form -> gns
};

/// GNS space of phi~(n (x) m^o) = <alpha(n), m>_phi on N (x) M^op.  Gram
/// eigenvalues below 1e-10 * max are discarded.
GnsBimodule gns_bimodule(const Channel& alpha, const State& phi_in, std::uint64_t seed = 0);

struct CentralPiece {
  int i = 0;
  int j = 0;
  Bimodule piece;  // over (M_{n_i}, M_{q_j}), multiplicity [m_ij]
  CMat isometry;   // piece -> H
};

std::vector<CentralPiece> central_decomposition(const Bimodule& h);

/// M-N bimodule on the conjugate space; multiplicity transposed.
Bimodule conjugate(const Bimodule& h);
/// Permutation P with C x = conj(P x), C: H -> conj(H) the canonical
/// antiunitary (slots (a, k, c) of piece (i, j) go to (c, k, a) of (j, i)).
CMat conjugation_permutation(const Bimodule& h);
CVec conjugate_vector(const Bimodule& h, const CVec& x);
/// C A C^{-1}
CMat conjugate_operator(const Bimodule& h, const CMat& a);

struct DirectSum {
  Bimodule sum;
  CMat inject_first;   // H -> H (+) K
  CMat inject_second;  // K -> H (+) K
};

DirectSum direct_sum(const Bimodule& h, const Bimodule& k);

/// H (x)_phi K.  The fusion map sends e_{a,x,eta} (x) e_{zeta,y,c} (index
/// x_H * dim K + x_K) to (Q_j^{-1/2})_{eta zeta} e_{a,(j,x,y),c}, Q_j the
/// weighted density of phi; fused multiplicity index runs over j, then x,
/// then y.  Dense, so meant for small bimodules.
struct RelativeTensor {
  Bimodule fused;
  CMat fusion;
};

RelativeTensor relative_tensor(const Bimodule& h, const Bimodule& k, const State& phi);

/// Multiplicity matrix of H (x) K without building the fusion map.
IMat fused_multiplicity(const Bimodule& h, const Bimodule& k);

/// Components t_ij of an intertwiner T = (+) 1 (x) t_ij (x) 1 from H to H1
/// (one entry per piece of H; empty matrices where H1 has no such piece).
/// ConsistencyError if T does not commute with both actions.
std::vector<CMat> intertwiner_components(const CMat& t, const Bimodule& h, const Bimodule& h1,
                                         double tol = 1e-8);

/// Basis of Hom(H, H1): matrix units on the shared multiplicity spaces.
std::vector<CMat> intertwiner_basis(const Bimodule& h, const Bimodule& h1);

/// Same space computed as the null space of the commutation equations.
std::vector<CMat> intertwiner_nullspace(const ConcreteBimodule& h, const ConcreteBimodule& h1,
                                        double tol = 1e-9);

/// T (x) S on H (x) K -> H1 (x) K1.
CMat tensor_intertwiners(const CMat& t, const Bimodule& h, const Bimodule& h1, const CMat& s,
                         const Bimodule& k, const Bimodule& k1);

/// Unitary U: H1 -> H2 with U l(n) r(m) xi1 = l(n) r(m) xi2, when the two
/// cyclic vectors have equal pairing functionals.  ConsistencyError
/// otherwise.
CMat cyclic_equivalence(const ConcreteBimodule& h1, const CVec& xi1, const ConcreteBimodule& h2,
                        const CVec& xi2, double tol = 1e-8);

}  // namespace qthermo
