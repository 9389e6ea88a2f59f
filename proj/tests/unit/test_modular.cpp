#include <gtest/gtest.h>

#include <cmath>

#include "qthermo/modular.hpp"

using namespace qthermo;

namespace {

State diag_state(double a, double b) {
  State s;
  s.algebra = MultiMatrixAlgebra({2});
  s.weights = RVec::Ones(1);
  CMat r = CMat::Zero(2, 2);
  r(0, 0) = a;
  r(1, 1) = b;
  s.densities = {r};
  return validate_state(s);
}

// Tr rho_psi (log rho_psi - log rho_phi), summed over blocks with weights folded in.
double trace_formula(const State& phi, const State& psi) {
  double s = 0.0;
  for (int i = 0; i < phi.algebra.num_blocks(); ++i) {
    const CMat p = psi.weighted(i);
    s += (p * (mat_log(p) - mat_log(phi.weighted(i)))).trace().real();
  }
  return s;
}

}  // namespace

TEST(VectorRep, Tracial) {
  const CVec xi = vector_rep(State::tracial(MultiMatrixAlgebra({2})));
  EXPECT_NEAR(xi(0).real(), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(xi(1)), 0.0, 1e-14);
  EXPECT_NEAR(xi(3).real(), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(VectorRep, Diagonal) {
  const CVec xi = vector_rep(diag_state(0.75, 0.25));
  EXPECT_NEAR(xi(0).real(), std::sqrt(3.0) / 2.0, 1e-14);
  EXPECT_NEAR(xi(3).real(), 0.5, 1e-14);
}

TEST(VectorRep, ReproducesState) {
  Rng rng(4);
  const MultiMatrixAlgebra a({2, 3});
  const State phi = random_faithful_state(a, rng);
  const StandardForm sf(a);
  const CVec xi = vector_rep(phi);
  for (int k = 0; k < 20; ++k) {
    const AlgebraElement m = random_element(a, rng);
    EXPECT_LT(std::abs(xi.dot(sf.left(m) * xi) - phi(m)), 1e-10);
    EXPECT_LT(std::abs(xi.dot(sf.right(m) * xi) - phi(m)), 1e-10);
  }
}

TEST(StandardForm, ActionsCommuteAndJ) {
  Rng rng(5);
  const MultiMatrixAlgebra a({2, 2});
  const StandardForm sf(a);
  const AlgebraElement x = random_element(a, rng), y = random_element(a, rng);
  EXPECT_LT((sf.left(x) * sf.right(y) - sf.right(y) * sf.left(x)).norm(), 1e-12);
  const CVec v = sf.vec(random_element(a, rng));
  // J l(x) J = r(x^*)
  CVec lhs = sf.J(sf.left(x) * sf.J(v));
  EXPECT_LT((lhs - sf.right(x.adjoint()) * v).norm(), 1e-12);
}

TEST(RelativeModular, TracialIsIdentity) {
  const State t = State::tracial(MultiMatrixAlgebra({2}));
  EXPECT_LT((relative_modular(t, t).dense() - CMat::Identity(4, 4)).norm(), 1e-12);
}

TEST(RelativeModular, FixesCyclicVector) {
  Rng rng(6);
  const State phi = random_faithful_state(MultiMatrixAlgebra({3, 1}), rng);
  const CVec xi = vector_rep(phi);
  EXPECT_LT((relative_modular(phi, phi).dense() * xi - xi).norm(), 1e-10);
}

TEST(RelativeModular, MatchesDirectFormula) {
  Rng rng(7);
  const MultiMatrixAlgebra a({2});
  const State phi = random_faithful_state(a, rng), psi = random_faithful_state(a, rng);
  const AlgebraElement x = random_element(a, rng);
  const CMat expect = phi.densities[0] * x.blocks[0] * psi.densities[0].inverse();
  const StandardForm sf(a);
  const AlgebraElement got = sf.unvec(relative_modular(phi, psi).dense() * sf.vec(x));
  EXPECT_LT((got.blocks[0] - expect).norm(), 1e-10);
  EXPECT_LT((relative_modular(phi, psi).apply(x).blocks[0] - expect).norm(), 1e-10);
}

TEST(ArakiEntropy, SameStateIsZero) {
  Rng rng(8);
  const State phi = random_faithful_state(MultiMatrixAlgebra({2, 2}), rng);
  EXPECT_NEAR(araki_entropy(phi, phi), 0.0, 1e-12);
}

TEST(ArakiEntropy, TraceFormula) {
  Rng rng(9);
  const MultiMatrixAlgebra a({2});
  const State phi = random_faithful_state(a, rng), psi = random_faithful_state(a, rng);
  EXPECT_NEAR(araki_entropy(phi, psi), trace_formula(phi, psi), 1e-9);
  const State t = State::tracial(a), d = diag_state(0.75, 0.25);
  const double oracle = 0.75 * std::log(0.75 / 0.5) + 0.25 * std::log(0.25 / 0.5);
  EXPECT_NEAR(araki_entropy(t, d), oracle, 1e-12);
  EXPECT_GT(araki_entropy(t, d), 0.0);
}

TEST(ArakiEntropy, SupportViolationIsInfinite) {
  EXPECT_EQ(araki_entropy(diag_state(1.0, 0.0), diag_state(0.5, 0.5)), kInfiniteEntropy);
  EXPECT_TRUE(std::isfinite(araki_entropy(diag_state(0.5, 0.5), diag_state(1.0, 0.0))));
}

TEST(ConnesCocycle, Trivial) {
  Rng rng(10);
  const State phi = random_faithful_state(MultiMatrixAlgebra({3}), rng);
  EXPECT_LT((connes_cocycle(phi, phi, 0.9) - AlgebraElement::identity(phi.algebra)).norm(), 1e-12);
}

TEST(ConnesCocycle, ChainAndCocycle) {
  Rng rng(11);
  const MultiMatrixAlgebra a({2, 3});
  const State phi = random_faithful_state(a, rng), omega = random_faithful_state(a, rng),
              psi = random_faithful_state(a, rng);
  const double t = 0.3, s = -0.8;
  EXPECT_LT((connes_cocycle(phi, omega, t) * connes_cocycle(omega, psi, t) - connes_cocycle(phi, psi, t)).norm(),
            1e-9);
  const AlgebraElement lhs = connes_cocycle(phi, omega, t + s);
  const AlgebraElement rhs = connes_cocycle(phi, omega, t) * modular_flow(omega, t, connes_cocycle(phi, omega, s));
  EXPECT_LT((lhs - rhs).norm(), 1e-9);
}

TEST(SpatialDerivative, StandardFormTracial) {
  const MultiMatrixAlgebra a({2});
  const RepresentedPair pair{{2}, {2}, CMat()};
  const CMat id = CMat::Identity(2, 2) / 2.0;
  EXPECT_LT((spatial_derivative(pair, {id}, {id}).dense() - CMat::Identity(4, 4)).norm(), 1e-12);
}

TEST(SpatialDerivative, ImplementsModularFlows) {
  Rng rng(12);
  const RepresentedPair pair{{2, 3}, {3, 1}, CMat()};
  const std::vector<CMat> rho{0.4 * random_density(rng, 2), 0.6 * random_density(rng, 3)};
  const std::vector<CMat> sigma{0.7 * random_density(rng, 3), 0.3 * random_density(rng, 1)};
  const SpatialDerivative d = spatial_derivative(pair, rho, sigma);
  for (double t : {0.5, 1.3}) {
    const CMat u = d.it_dense(t);
    std::vector<CMat> a{random_hermitian(rng, 2), random_hermitian(rng, 3)};
    std::vector<CMat> b{random_hermitian(rng, 3), random_hermitian(rng, 1)};
    std::vector<CMat> fa, fb;
    for (int z = 0; z < 2; ++z) {
      fa.push_back(mat_ipow(rho[z], t) * a[z] * mat_ipow(rho[z], -t));
      fb.push_back(mat_ipow(sigma[z], -t) * b[z] * mat_ipow(sigma[z], t));
    }
    EXPECT_LT((u * pair.lift_a(a) * u.adjoint() - pair.lift_a(fa)).norm(), 1e-8);
    EXPECT_LT((u * pair.lift_b(b) * u.adjoint() - pair.lift_b(fb)).norm(), 1e-8);
  }
}

TEST(SpatialDerivative, NonFaithfulCommutantRejected) {
  const RepresentedPair pair{{1}, {2}, CMat()};
  CMat s = CMat::Zero(2, 2);
  s(0, 0) = 1.0;
  EXPECT_THROW(spatial_derivative(pair, {CMat::Identity(1, 1)}, {s}), SingularityError);
}
