#include "suites.hpp"

#include <algorithm>
#include <cmath>

namespace qthermo::cli {

namespace {

IMat scalar(int m) { return IMat::Constant(1, 1, m); }

cplx phase(double t, double x) { return std::exp(cplx(0.0, t * std::log(x))); }

double rel(const CMat& a, const CMat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

CMat random_intertwiner(Rng& rng, const Bimodule& h, const Bimodule& h1) {
  CMat t = CMat::Zero(h1.dim(), h.dim());
  for (const CMat& b : intertwiner_basis(h, h1)) t += rng.complex_normal() * b;
  return t;
}

const double kTimes[] = {0.3, 1.1};

TrialResult chain_rule(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const MultiMatrixAlgebra m = random_algebra(rng, std::min(max_dim, 3));
  const State phi = random_faithful_state(m, rng), om = random_faithful_state(m, rng), psi = random_faithful_state(m, rng);
  const Bimodule l2 = identity_bimodule(m);
  const RelativeTensor r = relative_tensor(l2, l2, om);
  TrialResult out;
  for (double t : kTimes) {
    const CMat a = relative_modular(phi, om).it_dense(t), b = relative_modular(om, psi).it_dense(t);
    const CMat c = relative_modular(phi, psi).it_dense(t);
    out.residual = std::max(out.residual, (r.fusion * kron(a, b) - c * r.fusion).norm());
    const AlgebraElement u1 = connes_cocycle(phi, om, t), u2 = connes_cocycle(om, psi, t);
    out.residual = std::max(out.residual, (u1 * u2 - connes_cocycle(phi, psi, t)).norm());
    // cocycle identity u_{t+s} = u_t sigma^psi_t(u_s)
    const double s = 0.4;
    const AlgebraElement lhs = connes_cocycle(phi, psi, t + s);
    const AlgebraElement rhs = connes_cocycle(phi, psi, t) * modular_flow(psi, t, connes_cocycle(phi, psi, s));
    out.residual = std::max(out.residual, (lhs - rhs).norm());
  }
  return out;
}

TrialResult kosaki(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const int n = rng.uniform_int(1, std::min(max_dim, 3)), q = rng.uniform_int(1, std::min(max_dim, 3));
  const Bimodule h(MultiMatrixAlgebra({n}), MultiMatrixAlgebra({q}), scalar(rng.uniform_int(1, 3)));
  const State phi = random_faithful_state(h.left_algebra(), rng), psi = random_faithful_state(h.right_algebra(), rng);
  const CMat d = bimodule_modular(h, phi, psi).dense();
  return {rel(bimodule_modular_dual(h, phi, psi).dense(), bimodule_index(h) * d), {}};
}

TrialResult theorem_delta(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const int cap = std::min(max_dim, 3);
  const MultiMatrixAlgebra n({rng.uniform_int(1, cap)}), m({rng.uniform_int(1, cap)}), l({rng.uniform_int(1, cap)});
  const State p1 = random_faithful_state(n, rng), p2 = random_faithful_state(m, rng), p3 = random_faithful_state(l, rng);
  const int a = rng.uniform_int(1, 3), b = rng.uniform_int(1, 3), c = rng.uniform_int(1, 2);
  const Bimodule h(n, m, scalar(a)), h1(n, m, scalar(b)), k(m, l, scalar(c));
  TrialResult out;
  for (double t : kTimes) {
    // (a) tensor law
    const RelativeTensor r = relative_tensor(h, k, p2);
    const CMat lhs = r.fusion * kron(bimodule_modular(h, p1, p2).it_dense(t), bimodule_modular(k, p2, p3).it_dense(t));
    out.residual = std::max(out.residual, (lhs - bimodule_modular(r.fused, p1, p3).it_dense(t) * r.fusion).norm());
    // (b) conjugate relation
    const CMat ub = bimodule_modular(conjugate(h), p2, p1).it_dense(t);
    const CMat uh = phase(-t, bimodule_index(h)) * conjugate_operator(h, bimodule_modular(h, p1, p2).it_dense(t));
    out.residual = std::max(out.residual, (ub - uh).norm());
    // (c) intertwiners
    const CMat x = random_intertwiner(rng, h, h1);
    const CMat left = x * bimodule_modular(h, p1, p2).it_dense(t);
    const CMat right = phase(t, scalar_dimension(h1) / scalar_dimension(h)) * bimodule_modular(h1, p1, p2).it_dense(t) * x;
    out.residual = std::max(out.residual, (left - right).norm() / std::max(1.0, x.norm()));
  }
  // restriction to a sub-bimodule e H
  const int e = rng.uniform_int(1, a);
  const Bimodule he(n, m, scalar(e));
  CMat v = CMat::Zero(h.dim(), he.dim());
  for (const CMat& basis : intertwiner_basis(he, h)) v += rng.complex_normal() * basis;
  v = v * mat_pow(v.adjoint() * v, -0.5);  // polar part: an isometric intertwiner
  const CMat restricted = v.adjoint() * bimodule_modular(h, p1, p2).dense() * v;
  out.residual = std::max(out.residual, rel(restricted, (static_cast<double>(e) / a) * bimodule_modular(he, p1, p2).dense()));
  return out;
}

TrialResult u_naturality(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const MultiMatrixAlgebra n = random_algebra(rng, std::min(max_dim, 3)), m = random_algebra(rng, std::min(max_dim, 3));
  auto draw = [&]() {
    IMat mu(n.num_blocks(), m.num_blocks());
    for (int i = 0; i < mu.rows(); ++i)
      for (int j = 0; j < mu.cols(); ++j) mu(i, j) = rng.uniform_int(0, 2);
    return Bimodule(n, m, mu);
  };
  const Bimodule h = draw(), h1 = draw();
  const State phi = random_faithful_state(n, rng), psi = random_faithful_state(m, rng);
  TrialResult out;
  for (double t : kTimes) {
    const CMat u = physical_unitary(h, phi, psi, t, UnitaryForm::Central);
    const CMat u1 = physical_unitary(h1, phi, psi, t, UnitaryForm::Central);
    const CMat x = random_intertwiner(rng, h, h1);
    out.residual = std::max(out.residual, (x * u - u1 * x).norm() / std::max(1.0, x.norm()));
    const DirectSum s = direct_sum(h, h1);
    const CMat us = physical_unitary(s.sum, phi, psi, t, UnitaryForm::Central);
    out.residual = std::max(out.residual, (us * s.inject_first - s.inject_first * u).norm());
    out.residual = std::max(out.residual, (us * s.inject_second - s.inject_second * u1).norm());
    const CMat ub = physical_unitary(conjugate(h), psi, phi, t, UnitaryForm::Central);
    out.residual = std::max(out.residual, (ub - conjugate_operator(h, u)).norm());
  }
  // tensor additivity on factorial homomorphism-presented pairs
  const int p = rng.uniform_int(1, 2), a = rng.uniform_int(1, 2);
  const int b = p * a > 2 ? 1 : rng.uniform_int(1, 2);  // keeps the dense fusion map small
  const Homomorphism t1 = catalog::embedding(p, a), t2 = catalog::embedding(p * a, b);
  const State s1 = random_faithful_state(t1.target, rng), s2 = random_faithful_state(t2.target, rng);
  const GnsBimodule g1 = gns_bimodule(t1.channel(), s1), g2 = gns_bimodule(t2.channel(), s2);
  const State s0 = random_faithful_state(t1.source, rng);
  const RelativeTensor r = relative_tensor(g1.h, g2.h, s1);
  for (double t : kTimes) {
    const CMat lhs = r.fusion * kron(physical_unitary(g1.h, s0, s1, t), physical_unitary(g2.h, s1, s2, t));
    out.residual = std::max(out.residual, (lhs - physical_unitary(r.fused, s0, s2, t) * r.fusion).norm());
  }
  return out;
}

TrialResult transpose_suite(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const Channel c = random_faithful_channel(rng, max_dim);
  const State phi = random_faithful_state(c.target, rng);
  const ChannelThermo th = channel_thermo(c, phi, ThermoConfig{}, seed);
  const State& out_state = th.gns().phi_out;
  const Channel ct = transpose_channel(c, phi);
  TrialResult res;
  for (int k = 0; k < 3; ++k) {
    const AlgebraElement n = random_element(c.source, rng);
    const AlgebraElement m = random_element(c.target, rng);
    res.residual = std::max(res.residual, std::abs(bilinear_form(phi, c(n), m) - bilinear_form(out_state, ct(m), n)));
  }
  const State back = output_state(ct, out_state);
  for (int j = 0; j < c.target.num_blocks(); ++j)
    res.residual = std::max(res.residual, (back.weighted(j) - phi.weighted(j)).norm());
  const ChannelThermo tt = channel_thermo(ct, out_state, ThermoConfig{}, seed);
  if (tt.gns().h.multiplicity() != IMat(th.gns().h.multiplicity().transpose())) return {1.0, "multiplicities not transposed"};
  const CMat u = cyclic_equivalence(concrete(conjugate(th.gns().h)), conjugate_vector(th.gns().h, th.gns().xi),
                                    concrete(tt.gns().h), tt.gns().xi);
  res.residual = std::max(res.residual, (u.adjoint() * u - CMat::Identity(u.cols(), u.cols())).norm());
  res.residual = std::max(res.residual, std::abs(th.free_energy() - tt.free_energy()));
  return res;
}

TrialResult landauer(std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const Channel c = random_faithful_channel(rng, max_dim);
  const ThermoConfig cfg;
  const ThermoReport r = landauer_verdict(c, random_faithful_state(c.target, rng), cfg, seed);
  TrialResult out;
  if (!r.reversible && -r.free_energy_infimum < r.landauer_bound - 1e-9) {
    out.residual = r.landauer_bound + r.free_energy_infimum;
    out.detail = "-F_alpha = " + std::to_string(-r.free_energy_infimum) + " below kT log 2";
  }
  if (c.source.is_factor() && c.target.is_factor()) {
    const double x = -cfg.beta * r.free_energy_theorem;
    const double nearest = std::log(std::max(1.0, std::round(std::exp(x))));
    out.residual = std::max(out.residual, std::abs(x - nearest));
  }
  if (r.entropy < -1e-9) out.residual = std::max(out.residual, -r.entropy);
  return out;
}

}  // namespace

MultiMatrixAlgebra random_algebra(Rng& rng, int max_dim) {
  const int total = rng.uniform_int(1, std::max(1, max_dim));
  if (total == 1 || rng.uniform_int(0, 1) == 0) return MultiMatrixAlgebra({total});
  const int a = rng.uniform_int(1, total - 1);
  return MultiMatrixAlgebra({a, total - a});
}

Channel random_faithful_channel(Rng& rng, int max_dim) {
  for (;;) {
    const MultiMatrixAlgebra n = random_algebra(rng, max_dim), m = random_algebra(rng, max_dim);
    int qmin = m.block_dim(0), qmax = m.block_dim(0);
    for (int d : m.block_dims()) qmin = std::min(qmin, d), qmax = std::max(qmax, d);
    const int lo = (qmax + n.rep_dim() - 1) / n.rep_dim(), hi = n.rep_dim() * qmin;
    if (lo > hi) continue;
    Channel c = catalog::random_channel(n, m, rng.uniform_int(lo, hi), rng);
    if (c.faithful) return c;
  }
}

const std::vector<Suite>& verification_suites() {
  static const std::vector<Suite> suites = {
      {"chain_rule", chain_rule},     {"kosaki", kosaki},          {"theorem_delta", theorem_delta},
      {"u_naturality", u_naturality}, {"transpose", transpose_suite}, {"landauer", landauer},
  };
  return suites;
}

}  // namespace qthermo::cli
