#include "qthermo/catalog.hpp"

namespace qthermo::catalog {

Channel identity(const MultiMatrixAlgebra& a) {
  return validate_channel(Channel::from_map(a, a, [](const AlgebraElement& x) { return x; }));
}

Channel unitary_conjugation(const CMat& u) {
  const MultiMatrixAlgebra a({static_cast<int>(u.rows())});
  if (u.rows() != u.cols() || (u.adjoint() * u - CMat::Identity(u.rows(), u.rows())).norm() > 1e-9)
    throw ValidationError("unitary_conjugation: matrix is not unitary");
  return channel_from_kraus(a, a, {u});
}

Channel depolarizing(double lambda) {
  if (lambda < -1.0 / 3.0 || lambda > 1.0) throw ValidationError("depolarizing: parameter outside [-1/3, 1]");
  const MultiMatrixAlgebra a({2});
  return validate_channel(Channel::from_map(a, a, [lambda](const AlgebraElement& x) {
    AlgebraElement y;
    y.blocks.push_back(lambda * x.blocks[0] + (1.0 - lambda) * 0.5 * x.blocks[0].trace() * CMat::Identity(2, 2));
    return y;
  }));
}

Homomorphism embedding(int p, int m) {
  IMat lam(1, 1);
  lam(0, 0) = m;
  return make_homomorphism(MultiMatrixAlgebra({p}), MultiMatrixAlgebra({p * m}), lam);
}

Homomorphism hybrid() {
  IMat lam(1, 2);
  lam << 1, 2;
  return make_homomorphism(MultiMatrixAlgebra({2}), MultiMatrixAlgebra({2, 4}), lam);
}

Homomorphism diagonal() {
  IMat lam(2, 1);
  lam << 1, 1;
  return make_homomorphism(MultiMatrixAlgebra({1, 1}), MultiMatrixAlgebra({2}), lam);
}

Channel transpose_map(int n) {
  const MultiMatrixAlgebra a({n});
  return Channel::from_map(a, a, [](const AlgebraElement& x) { return x.transpose(); });
}

Channel erasure(int n) {
  const MultiMatrixAlgebra a({n});
  return validate_channel(Channel::from_map(a, a, [n](const AlgebraElement& x) {
    AlgebraElement y;
    y.blocks.push_back(x.blocks[0].trace() / static_cast<double>(n) * CMat::Identity(n, n));
    return y;
  }));
}

Channel random_channel(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m, int rank, Rng& rng) {
  if (rank < 1) throw ValidationError("random channel: rank must be positive");
  const int nn = n.rep_dim();
  for (int j = 0; j < m.num_blocks(); ++j) {
    const int q = m.block_dim(j);
    if (rank > nn * q) throw ValidationError("random channel: rank exceeds the Choi dimension of a target block");
    if (rank * nn < q) throw ValidationError("random channel: rank too small for a unital map");
  }
  std::vector<CMat> ops;
  for (int j = 0; j < m.num_blocks(); ++j) {
    const int q = m.block_dim(j);
    std::vector<CMat> g;
    CMat s = CMat::Zero(q, q);
    for (int a = 0; a < rank; ++a) {
      g.push_back(ginibre(rng, q, nn));
      s += g.back() * g.back().adjoint();
    }
    const CMat corr = mat_pow(s, -0.5);
    for (const CMat& ga : g) {
      CMat t = CMat::Zero(m.rep_dim(), nn);
      t.block(m.offset(j), 0, q, nn) = corr * ga;
      ops.push_back(std::move(t));
    }
  }
  return channel_from_kraus(n, m, ops);
}

}  // namespace qthermo::catalog
