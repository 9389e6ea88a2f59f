#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qthermo/bimodule.hpp"
#include "qthermo/catalog.hpp"
#include "qthermo/channel.hpp"
#include "qthermo/index.hpp"
#include "qthermo/modular.hpp"

using namespace qthermo;

namespace {

double choi_distance(const Channel& a, const Channel& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.choi.size(); ++i)
    for (std::size_t j = 0; j < a.choi[i].size(); ++j) d = std::max(d, (a.choi[i][j] - b.choi[i][j]).norm());
  return d;
}

double smallest_eigenvalue(const CMat& h) {
  return Eigen::SelfAdjointEigenSolver<CMat>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Channel sample_channel(Rng& rng) {
  return catalog::random_channel(MultiMatrixAlgebra({2, 1}), MultiMatrixAlgebra({2, 2}), 2, rng);
}

}  // namespace

TEST(ValidateChannel, IdentityIsValid) {
  const Channel c = catalog::identity(MultiMatrixAlgebra({2}));
  EXPECT_TRUE(c.faithful);
  Rng rng(1);
  const AlgebraElement x = random_element(MultiMatrixAlgebra({2}), rng);
  EXPECT_LT((c(x) - x).norm(), 1e-14);
}

TEST(ValidateChannel, TransposeRejectedWithWorstEigenvalue) {
  // Choi of the transpose map is the swap on C^2 (x) C^2
  CMat swap = CMat::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) swap(a * 2 + b, b * 2 + a) = 1.0;
  const double oracle = smallest_eigenvalue(swap);
  const Channel t = catalog::transpose_map(2);
  EXPECT_LT((t.choi[0][0] - swap).norm(), 1e-15);
  EXPECT_NEAR(inspect_channel(t).worst_eigenvalue, oracle, 1e-12);
  try {
    validate_channel(t);
    FAIL() << "transpose map accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
  }
}

TEST(ValidateChannel, DepolarizingValidAndFaithful) {
  const Channel c = catalog::depolarizing(0.5);
  EXPECT_GT(smallest_eigenvalue(c.choi[0][0]), 0.0);
  EXPECT_TRUE(c.faithful);
}

TEST(ValidateChannel, NonUnitalRejected) {
  const MultiMatrixAlgebra a({2});
  const Channel c = Channel::from_map(a, a, [](const AlgebraElement& x) { return 2.0 * x; });
  EXPECT_THROW(validate_channel(c), ValidationError);
}

TEST(Predual, TraceDuality) {
  Rng rng(2);
  const Channel c = sample_channel(rng);
  const AlgebraElement x = random_element(c.source, rng);
  const AlgebraElement y = random_element(c.target, rng);
  const cplx lhs = (c.predual(y).dense() * x.dense()).trace();
  const cplx rhs = (y.dense() * c(x).dense()).trace();
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(Kraus, IdentityHasOneOperator) {
  const KrausSet k = kraus_decompose(catalog::identity(MultiMatrixAlgebra({3})));
  ASSERT_EQ(k.rank(), 1);
  EXPECT_LT((k.dense(0) - CMat::Identity(3, 3)).norm(), 1e-12);
}

TEST(Kraus, ErasureMatchesMatrixUnits) {
  const Channel c = catalog::erasure(2);
  const KrausSet k = kraus_decompose(c);
  EXPECT_EQ(k.rank(), 4);
  CMat sum = CMat::Zero(2, 2);
  for (int a = 0; a < k.rank(); ++a) sum += k.dense(a) * k.dense(a).adjoint();
  EXPECT_LT((sum - CMat::Identity(2, 2)).norm(), 1e-12);
  std::vector<CMat> units;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMat e = CMat::Zero(2, 2);
      e(i, j) = 1.0 / std::sqrt(2.0);
      units.push_back(e);
    }
  const Channel from_units = channel_from_kraus(c.source, c.target, units);
  EXPECT_LT(choi_distance(from_units, c), 1e-12);
}

TEST(Kraus, RandomRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Channel c = sample_channel(rng);
    const KrausSet k = kraus_decompose(c);
    EXPECT_LT(choi_distance(channel_from_kraus(k), c), 1e-9);
    CMat sum = CMat::Zero(c.target.rep_dim(), c.target.rep_dim());
    for (int a = 0; a < k.rank(); ++a) sum += k.dense(a) * k.dense(a).adjoint();
    EXPECT_LT((sum - CMat::Identity(sum.rows(), sum.cols())).norm(), 1e-9);
    for (int a = 1; a < k.rank(); ++a) EXPECT_GE(k.ops[a - 1].weight, k.ops[a].weight);
  }
}

TEST(Kraus, OffDiagonalOutputRejected) {
  const MultiMatrixAlgebra n({2}), m({1, 1});
  EXPECT_THROW(channel_from_kraus(n, m, {CMat::Identity(2, 2)}), ValidationError);
}

TEST(Compose, IdentityIsNeutral) {
  Rng rng(4);
  const Channel a = sample_channel(rng);
  EXPECT_LT(choi_distance(compose(catalog::identity(a.target), a), a), 1e-12);
  EXPECT_THROW(compose(a, a), ValidationError);
}

TEST(Compose, EmbeddingsMultiplyDimension) {
  const Channel first = catalog::embedding(2, 2).channel();
  const Channel second = catalog::embedding(4, 2).channel();
  const Channel both = compose(second, first);
  const State phi = State::tracial(both.target);
  EXPECT_NEAR(scalar_dimension(gns_bimodule(both, phi).h), 4.0, 1e-12);
}

TEST(Compose, DimensionSubmultiplicative) {
  Rng rng(5);
  const MultiMatrixAlgebra a({2}), b({2}), c({3});
  const Channel alpha = catalog::random_channel(a, b, 2, rng);
  const Channel beta = catalog::random_channel(b, c, 2, rng);
  const Channel ba = compose(beta, alpha);
  const double d_a = scalar_dimension(gns_bimodule(alpha, State::tracial(b)).h);
  const double d_b = scalar_dimension(gns_bimodule(beta, State::tracial(c)).h);
  const double d_ba = scalar_dimension(gns_bimodule(ba, State::tracial(c)).h);
  EXPECT_LE(d_ba, d_a * d_b + 1e-9);
}

TEST(OutputState, Identity) {
  Rng rng(6);
  const State phi = random_faithful_state(MultiMatrixAlgebra({2, 1}), rng);
  const State out = output_state(catalog::identity(phi.algebra), phi);
  EXPECT_LT((out.weighted(0) - phi.weighted(0)).norm(), 1e-12);
  EXPECT_LT((out.weighted(1) - phi.weighted(1)).norm(), 1e-12);
}

TEST(OutputState, EmbeddingPartialTrace) {
  Rng rng(7);
  const CMat rho = random_density(rng, 2), sigma = random_density(rng, 2);
  State phi;
  phi.algebra = MultiMatrixAlgebra({4});
  phi.weights = RVec::Ones(1);
  phi.densities = {kron(rho, sigma)};
  phi = validate_state(phi);
  const State out = output_state(catalog::embedding(2, 2).channel(), phi);
  EXPECT_LT((out.densities[0] - rho).norm(), 1e-12);
}

TEST(OutputState, ErasureIsTracial) {
  Rng rng(8);
  const Channel e = catalog::erasure(2);
  for (int k = 0; k < 3; ++k) {
    const State out = output_state(e, random_faithful_state(e.target, rng));
    EXPECT_LT((out.densities[0] - CMat::Identity(2, 2) / 2.0).norm(), 1e-12);
  }
}

TEST(Transpose, IdentityIsIdentity) {
  Rng rng(9);
  const MultiMatrixAlgebra a({2, 2});
  const Channel t = transpose_channel(catalog::identity(a), random_faithful_state(a, rng));
  EXPECT_LT(choi_distance(t, catalog::identity(a)), 1e-10);
}

TEST(Transpose, PairingIdentity) {
  Rng rng(10);
  const Channel a = sample_channel(rng);
  const State phi = random_faithful_state(a.target, rng);
  const State psi = output_state(a, phi);
  const Channel t = transpose_channel(a, phi);
  for (int k = 0; k < 30; ++k) {
    const AlgebraElement n = random_element(a.source, rng);
    const AlgebraElement m = random_element(a.target, rng);
    EXPECT_LT(std::abs(bilinear_form(phi, a(n), m) - bilinear_form(psi, t(m), n)), 1e-9);
  }
  // phi_in = phi_out o alpha'
  const State back = output_state(t, psi);
  for (int j = 0; j < phi.algebra.num_blocks(); ++j) EXPECT_LT((back.weighted(j) - phi.weighted(j)).norm(), 1e-9);
}

TEST(Transpose, DoubleTranspose) {
  Rng rng(11);
  const Channel a = sample_channel(rng);
  const State phi = random_faithful_state(a.target, rng);
  const Channel t = transpose_channel(a, phi);
  const Channel tt = transpose_channel(t, output_state(a, phi));
  EXPECT_LT(choi_distance(tt, a), 1e-9);
}

TEST(Stinespring, Identity) {
  const DilationPair d = stinespring_dilate(catalog::identity(MultiMatrixAlgebra({2})));
  EXPECT_EQ(d.env_dim, 1);
  EXPECT_LT((d.v.adjoint() * d.v - CMat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((d.v * d.v.adjoint() - CMat::Identity(2, 2)).norm(), 1e-12);
}

TEST(Stinespring, RandomReconstruction) {
  Rng rng(12);
  const Channel a = sample_channel(rng);
  const DilationPair d = stinespring_dilate(a);
  EXPECT_LT((d.v.adjoint() * d.v - CMat::Identity(a.target.rep_dim(), a.target.rep_dim())).norm(), 1e-9);
  for (int k = 0; k < 10; ++k) {
    const AlgebraElement n = random_element(a.source, rng);
    EXPECT_LT((a(n) - d.compress(n)).norm(), 1e-9);
    const AlgebraElement n2 = random_element(a.source, rng);
    EXPECT_LT((d.rho(n * n2) - d.rho(n) * d.rho(n2)).norm(), 1e-12);
  }
}

TEST(Stinespring, DepolarizingEnvironment) {
  const Channel c = catalog::depolarizing(0.5);
  Eigen::SelfAdjointEigenSolver<CMat> es(c.choi[0][0]);
  int rank = 0;
  for (Eigen::Index k = 0; k < 4; ++k) rank += es.eigenvalues()(k) > 1e-10 ? 1 : 0;
  EXPECT_EQ(stinespring_dilate(c).env_dim, rank);
  EXPECT_EQ(rank, 4);
}

TEST(BilinearForm, Normalization) {
  Rng rng(13);
  const State phi = random_faithful_state(MultiMatrixAlgebra({2, 3}), rng);
  const AlgebraElement one = AlgebraElement::identity(phi.algebra);
  EXPECT_NEAR(bilinear_form(phi, one, one).real(), 1.0, 1e-12);
}

TEST(BilinearForm, TracialCase) {
  Rng rng(14);
  const MultiMatrixAlgebra a({2});
  const AlgebraElement m1 = random_element(a, rng), m2 = random_element(a, rng);
  const cplx oracle = (m1.blocks[0] * m2.blocks[0]).trace() / 2.0;
  EXPECT_LT(std::abs(bilinear_form(State::tracial(a), m1, m2) - oracle), 1e-12);
}

TEST(BilinearForm, MatchesStandardForm) {
  Rng rng(15);
  const MultiMatrixAlgebra a({2, 2});
  const State phi = random_faithful_state(a, rng);
  const StandardForm sf(a);
  const CVec xi = vector_rep(phi);
  const AlgebraElement m1 = random_element(a, rng), m2 = random_element(a, rng);
  EXPECT_LT(std::abs(bilinear_form(phi, m1, m2) - xi.dot(sf.left(m1) * sf.right(m2) * xi)), 1e-10);
}

TEST(Homomorphism, Multiplicative) {
  Rng rng(16);
  IMat lam(2, 2);
  lam << 1, 0, 1, 2;
  const MultiMatrixAlgebra n({2, 1}), m({3, 2});
  const Homomorphism h = make_homomorphism(n, m, lam, {random_unitary(rng, 3), random_unitary(rng, 2)});
  const AlgebraElement x = random_element(n, rng), y = random_element(n, rng);
  EXPECT_LT((h(x * y) - h(x) * h(y)).norm(), 1e-12);
  EXPECT_LT((h(AlgebraElement::identity(n)) - AlgebraElement::identity(m)).norm(), 1e-12);
  EXPECT_THROW(make_homomorphism(n, MultiMatrixAlgebra({4, 2}), lam), ValidationError);
}

TEST(RandomChannel, RankOneIsUnitary) {
  Rng rng(17);
  const MultiMatrixAlgebra a({2});
  const KrausSet k = kraus_decompose(catalog::random_channel(a, a, 1, rng));
  ASSERT_EQ(k.rank(), 1);
  EXPECT_LT((k.dense(0).adjoint() * k.dense(0) - CMat::Identity(2, 2)).norm(), 1e-10);
  EXPECT_THROW(catalog::random_channel(a, a, 5, rng), ValidationError);
  EXPECT_THROW(catalog::random_channel(MultiMatrixAlgebra({1}), a, 1, rng), ValidationError);
}
