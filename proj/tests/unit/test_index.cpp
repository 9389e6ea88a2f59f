#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qthermo/catalog.hpp"
#include "qthermo/index.hpp"

using namespace qthermo;

namespace {

// Multiplicity of A-block i in B-block j from the rank of theta(p_i)_j.
IMat rank_oracle(const Homomorphism& theta) {
  IMat out(theta.source.num_blocks(), theta.target.num_blocks());
  for (int i = 0; i < theta.source.num_blocks(); ++i) {
    const AlgebraElement img = theta(central_atoms(theta.source)[static_cast<std::size_t>(i)]);
    for (int j = 0; j < theta.target.num_blocks(); ++j) {
      Eigen::FullPivLU<CMat> lu(img.blocks[static_cast<std::size_t>(j)]);
      out(i, j) = static_cast<int>(lu.rank()) / theta.source.block_dim(i);
    }
  }
  return out;
}

IMat make(int r, int c, std::initializer_list<int> v) {
  IMat m(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

IMat random_connected(Rng& rng, int r, int c) {
  for (;;) {
    IMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = rng.uniform_int(0, 2);
    if (is_connected(m)) return m;
  }
}

InclusionData inclusion_of(const MultiMatrixAlgebra& a, const IMat& lambda) {
  std::vector<int> dims;
  for (int j = 0; j < lambda.cols(); ++j) {
    int d = 0;
    for (int i = 0; i < lambda.rows(); ++i) d += lambda(i, j) * a.block_dim(i);
    dims.push_back(d);
  }
  return inclusion_matrix(make_homomorphism(a, MultiMatrixAlgebra(dims), lambda));
}

}  // namespace

TEST(InclusionMatrix, Examples) {
  EXPECT_EQ(inclusion_matrix(catalog::embedding(2, 2)).lambda, make(1, 1, {2}));
  EXPECT_EQ(inclusion_matrix(catalog::diagonal()).lambda, make(2, 1, {1, 1}));
  const Homomorphism blocks = make_homomorphism(MultiMatrixAlgebra({2, 2}), MultiMatrixAlgebra({4}), make(2, 1, {1, 1}));
  EXPECT_EQ(inclusion_matrix(blocks).lambda, rank_oracle(blocks));
  EXPECT_EQ(inclusion_matrix(blocks).lambda, make(2, 1, {1, 1}));
}

TEST(InclusionMatrix, RotatedEmbeddingMatchesRankOracle) {
  Rng rng(1);
  const Homomorphism t = make_homomorphism(MultiMatrixAlgebra({2, 1}), MultiMatrixAlgebra({3, 5}), make(2, 2, {1, 2, 1, 1}),
                                           {random_unitary(rng, 3), random_unitary(rng, 5)});
  EXPECT_EQ(inclusion_matrix(t).lambda, rank_oracle(t));
}

TEST(InclusionMatrix, NonUnitalRejected) {
  const Homomorphism t{MultiMatrixAlgebra({2}), MultiMatrixAlgebra({5}), make(1, 1, {2}), {}};
  EXPECT_THROW(inclusion_matrix(t), ValidationError);
}

TEST(Components, Examples) {
  EXPECT_TRUE(is_connected(identity_bimodule(MultiMatrixAlgebra({2})).multiplicity()));
  const auto c = connected_components(identity_bimodule(MultiMatrixAlgebra({2, 3})).multiplicity());
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].rows, std::vector<int>{1});
  EXPECT_EQ(c[1].cols, std::vector<int>{1});
  EXPECT_TRUE(is_connected(make(2, 1, {1, 1})));
  EXPECT_EQ(connected_components(make(2, 2, {1, 0, 0, 0})).size(), 3u);
}

TEST(MatrixDimension, Examples) {
  const Bimodule l2 = identity_bimodule(MultiMatrixAlgebra({2, 1}));
  EXPECT_EQ(matrix_dimension(l2).d, RMat::Identity(2, 2));
  EXPECT_LT((matrix_dimension(l2).op - CMat::Identity(l2.dim(), l2.dim())).norm(), 1e-15);
  Rng rng(2);
  const Channel dep = catalog::depolarizing(0.5);
  const GnsBimodule g = gns_bimodule(dep, random_faithful_state(dep.target, rng));
  EXPECT_EQ(matrix_dimension(g.h).d, RMat::Constant(1, 1, 4.0));
  const Channel hyb = catalog::hybrid().channel();
  const GnsBimodule gh = gns_bimodule(hyb, random_faithful_state(hyb.target, rng));
  RMat row(1, 2);
  row << 1.0, 2.0;
  EXPECT_EQ(matrix_dimension(gh.h).d, row);
}

TEST(ScalarDimension, Examples) {
  const Bimodule l2 = identity_bimodule(MultiMatrixAlgebra({3}));
  EXPECT_NEAR(scalar_dimension(l2), 1.0, 1e-14);
  EXPECT_NEAR(bimodule_index(l2), 1.0, 1e-14);
  const Bimodule diag(MultiMatrixAlgebra({1, 1}), MultiMatrixAlgebra({2}), make(2, 1, {1, 1}));
  EXPECT_NEAR(scalar_dimension(diag), std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(bimodule_index(diag), 2.0, 1e-12);
  const Bimodule emb(MultiMatrixAlgebra({2}), MultiMatrixAlgebra({4}), make(1, 1, {2}));
  EXPECT_NEAR(bimodule_index(emb), 4.0, 1e-12);
  const Bimodule split = identity_bimodule(MultiMatrixAlgebra({2, 3}));
  EXPECT_THROW(scalar_dimension(split), ValidationError);
  EXPECT_EQ(component_dimensions(split).size(), 2u);
}

TEST(ScalarDimension, ConjugationInvariant) {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const Bimodule h(MultiMatrixAlgebra({1, 2}), MultiMatrixAlgebra({2, 1, 1}), random_connected(rng, 2, 3));
    EXPECT_NEAR(scalar_dimension(conjugate(h)), scalar_dimension(h), 1e-10);
  }
}

TEST(ScalarDimension, CompositeEmbedding) {
  Rng rng(4);
  const Channel c = compose(catalog::embedding(4, 2).channel(), catalog::embedding(2, 2).channel());
  const GnsBimodule g = gns_bimodule(c, random_faithful_state(c.target, rng));
  EXPECT_NEAR(scalar_dimension(g.h), 4.0, 1e-12);
}

TEST(MatrixDimension, MultiplicativeAndSubmultiplicative) {
  Rng rng(5);
  const MultiMatrixAlgebra n({1, 2}), m({2, 1}), l({1, 1});
  bool strict = false;
  for (int k = 0; k < 20; ++k) {
    const Bimodule h(n, m, random_connected(rng, 2, 2)), kk(m, l, random_connected(rng, 2, 2));
    const RelativeTensor r = relative_tensor(h, kk, random_faithful_state(m, rng));
    EXPECT_EQ(matrix_dimension(r.fused).d, RMat(matrix_dimension(h).d * matrix_dimension(kk).d));
    const double dhk = pf_eigen(matrix_dimension(r.fused).d).norm;
    const double prod = scalar_dimension(h) * scalar_dimension(kk);
    EXPECT_LE(dhk, prod + 1e-10);
    if (dhk < prod - 1e-6) strict = true;
  }
  EXPECT_TRUE(strict);
}

TEST(MinimalExpectation, TensorEmbedding) {
  Rng rng(6);
  const MinimalExpectation me = minimal_expectation(catalog::embedding(2, 2), 7);
  EXPECT_NEAR(me.index, 4.0, 1e-12);
  EXPECT_TRUE(me.certified);
  const AlgebraElement b = random_element(MultiMatrixAlgebra({4}), rng);
  // oracle: (id (x) tr/2)(b)
  CMat want = CMat::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) want(a, c) = 0.5 * (b.blocks[0](2 * a, 2 * c) + b.blocks[0](2 * a + 1, 2 * c + 1));
  EXPECT_LT((me.e.apply(b).blocks[0] - want).norm(), 1e-14);
}

TEST(MinimalExpectation, DiagonalAndCommutantCurve) {
  Rng rng(8);
  const MinimalExpectation me = minimal_expectation(catalog::diagonal(), 1);
  EXPECT_NEAR(me.index, 2.0, 1e-12);
  const AlgebraElement b = random_element(MultiMatrixAlgebra({2}), rng);
  const AlgebraElement e = me.e.apply(b);
  EXPECT_LT(std::abs(e.blocks[0](0, 0) - b.blocks[0](0, 0)), 1e-14);
  EXPECT_LT(std::abs(e.blocks[1](0, 0) - b.blocks[0](1, 1)), 1e-14);
  // C inside C (+) C with weights (w, 1 - w)
  const InclusionData cc = inclusion_of(MultiMatrixAlgebra({1}), make(1, 2, {1, 1}));
  double best = 1e300, best_w = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double w = k / 100.0;
    RMat t(1, 2);
    t << w, 1.0 - w;
    const double ind = expectation_index(scalar_expectation(cc, t));
    EXPECT_NEAR(ind, std::max(1.0 / w, 1.0 / (1.0 - w)), 1e-12);
    if (ind < best) best = ind, best_w = w;
  }
  EXPECT_NEAR(best_w, 0.5, 1e-12);
  EXPECT_NEAR(best, 2.0, 1e-12);
  EXPECT_NEAR(minimal_expectation(cc).index, 2.0, 1e-12);
}

TEST(MinimalExpectation, RandomConnectedCertificate) {
  Rng rng(9);
  for (int k = 0; k < 5; ++k) {
    const InclusionData inc = inclusion_of(MultiMatrixAlgebra({1, 2}), random_connected(rng, 2, 3));
    const MinimalExpectation me = minimal_expectation(inc, derive_seed(9, static_cast<std::uint64_t>(k)));
    EXPECT_TRUE(me.certified) << me.worst_margin;
    EXPECT_GE(me.worst_margin, -1e-9);
    EXPECT_NEAR(me.index, std::pow(pf_eigen(inc.lambda.cast<double>()).norm, 2), 1e-9);
  }
}

TEST(Expectation, ConditionalExpectationAxioms) {
  Rng rng(10);
  const InclusionData inc = inclusion_of(MultiMatrixAlgebra({1, 2}), make(2, 2, {1, 2, 1, 1}));
  const Expectation e = minimal_expectation(inc, 0, 0).e;
  const Channel ch = e.channel();  // validates unital CP
  EXPECT_TRUE(ch.faithful);
  const AlgebraElement b = random_element(inc.ambient, rng);
  const AlgebraElement a1 = random_element(inc.sub, rng), a2 = random_element(inc.sub, rng);
  EXPECT_LT((e.apply(e.embed(a1)) - a1).norm(), 1e-12);
  EXPECT_LT((e.apply(e.embed(a1) * b * e.embed(a2)) - a1 * e.apply(b) * a2).norm(), 1e-12);
  EXPECT_LT((e.apply(AlgebraElement::identity(inc.ambient)) - AlgebraElement::identity(inc.sub)).norm(), 1e-12);
}

TEST(Expectation, TracialOnRelativeCommutant) {
  Rng rng(11);
  const IMat lam = make(2, 2, {1, 2, 1, 1});
  const InclusionData inc = inclusion_of(MultiMatrixAlgebra({1, 2}), lam);
  const Expectation e = minimal_expectation(inc, 0, 0).e;
  // A' ∩ B: per B-block j, (+)_i 1_{n_i} (x) c_ij
  auto commutant_element = [&]() {
    AlgebraElement x = AlgebraElement::zero(inc.ambient);
    for (int j = 0; j < 2; ++j) {
      std::vector<CMat> parts;
      for (int i = 0; i < 2; ++i)
        if (lam(i, j) > 0) parts.push_back(kron(CMat::Identity(inc.sub.block_dim(i), inc.sub.block_dim(i)), ginibre(rng, lam(i, j), lam(i, j))));
      x.blocks[static_cast<std::size_t>(j)] = block_diag(parts);
    }
    return x;
  };
  const AlgebraElement x = commutant_element(), y = commutant_element();
  const AlgebraElement a = random_element(inc.sub, rng);
  EXPECT_LT((e.embed(a) * x - x * e.embed(a)).norm(), 1e-12);
  EXPECT_LT((e.apply(x * y) - e.apply(y * x)).norm(), 1e-12);
}

TEST(Expectation, RejectsUnnormalizedWeights) {
  const InclusionData inc = inclusion_matrix(catalog::diagonal());
  EXPECT_THROW(scalar_expectation(inc, RMat::Constant(2, 1, 0.5)), ValidationError);
}

TEST(LeftInverse, Examples) {
  Rng rng(12);
  const MultiMatrixAlgebra a({2});
  const GnsBimodule gi = gns_bimodule(catalog::identity(a), State::tracial(a));
  const Channel phi_id = left_inverse(gi);
  const AlgebraElement x = random_element(a, rng);
  EXPECT_LT((phi_id(x) - x).norm(), 1e-12);

  const Channel emb = catalog::embedding(2, 2).channel();
  const GnsBimodule ge = gns_bimodule(emb, random_faithful_state(emb.target, rng));
  const Channel phi_e = left_inverse(ge);
  const AlgebraElement b = random_element(phi_e.source, rng);
  CMat want = CMat::Zero(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) want(r, c) = 0.5 * (b.blocks[0](2 * r, 2 * c) + b.blocks[0](2 * r + 1, 2 * c + 1));
  EXPECT_LT((phi_e(b).blocks[0] - want).norm(), 1e-12);
}

TEST(LeftInverse, InvertsLeftAction) {
  Rng rng(13);
  const Channel c = catalog::random_channel(MultiMatrixAlgebra({2, 1}), MultiMatrixAlgebra({3, 2}), 2, rng);
  const GnsBimodule g = gns_bimodule(c, random_faithful_state(c.target, rng), 3);
  const Channel phi = left_inverse(g);
  const Homomorphism l = left_embedding(g.h);
  for (int k = 0; k < 5; ++k) {
    const AlgebraElement n = random_element(c.source, rng);
    EXPECT_LT((phi(l(n)) - n).norm(), 1e-9);
    // l(n) as an element of r(M)' acts on H as the left action
    EXPECT_LT((g.h.right_commutant_element(l(n).blocks) - g.h.left(n)).norm(), 1e-12);
  }
}
