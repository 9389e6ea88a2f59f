#include "qthermo/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qthermo {

namespace {

std::size_t sz(int x) { return static_cast<std::size_t>(x); }

// Offset of the i-th summand inside B-block j.
int summand_offset(const InclusionData& inc, int i, int j) {
  int off = 0;
  for (int ii = 0; ii < i; ++ii) off += inc.sub.block_dim(ii) * inc.lambda(ii, j);
  return off;
}

}  // namespace

InclusionData inclusion_matrix(const Homomorphism& theta) {
  InclusionData inc{theta.source, theta.target, IMat::Zero(theta.source.num_blocks(), theta.target.num_blocks())};
  const std::vector<AlgebraElement> atoms = central_atoms(theta.source);
  for (int i = 0; i < theta.source.num_blocks(); ++i) {
    const AlgebraElement img = theta(atoms[sz(i)]);
    for (int j = 0; j < theta.target.num_blocks(); ++j) {
      const double tr = img.blocks[sz(j)].trace().real() / theta.source.block_dim(i);
      const double r = std::round(tr);
      if (std::abs(tr - r) > 1e-8) throw ValidationError("inclusion: central support has non-integral multiplicity");
      inc.lambda(i, j) = static_cast<int>(r);
    }
  }
  for (int j = 0; j < theta.target.num_blocks(); ++j) {
    int d = 0;
    for (int i = 0; i < theta.source.num_blocks(); ++i) d += inc.lambda(i, j) * theta.source.block_dim(i);
    if (d != theta.target.block_dim(j)) throw ValidationError("inclusion: embedding is not unital");
  }
  return inc;
}

std::vector<Component> connected_components(const IMat& m) {
  const int nr = static_cast<int>(m.rows());
  const int nc = static_cast<int>(m.cols());
  std::vector<int> label(sz(nr + nc), -1);
  std::vector<Component> out;
  for (int start = 0; start < nr + nc; ++start) {
    if (label[sz(start)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{start};
    label[sz(start)] = id;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (v < nr) {
        out.back().rows.push_back(v);
        for (int j = 0; j < nc; ++j)
          if (m(v, j) > 0 && label[sz(nr + j)] < 0) {
            label[sz(nr + j)] = id;
            stack.push_back(nr + j);
          }
      } else {
        out.back().cols.push_back(v - nr);
        for (int i = 0; i < nr; ++i)
          if (m(i, v - nr) > 0 && label[sz(i)] < 0) {
            label[sz(i)] = id;
            stack.push_back(i);
          }
      }
    }
    std::sort(out.back().rows.begin(), out.back().rows.end());
    std::sort(out.back().cols.begin(), out.back().cols.end());
  }
  return out;
}

bool is_connected(const IMat& m) { return connected_components(m).size() == 1; }

DimensionMatrix matrix_dimension(const Bimodule& h) {
  DimensionMatrix d{h.multiplicity().cast<double>(), CMat::Zero(h.dim(), h.dim())};
  for (const auto& p : h.pieces()) {
    const int len = h.left_algebra().block_dim(p.i) * p.mult * h.right_algebra().block_dim(p.j);
    d.op.block(p.offset, p.offset, len, len) = static_cast<double>(p.mult) * CMat::Identity(len, len);
  }
  return d;
}

std::vector<double> component_dimensions(const Bimodule& h) {
  std::vector<double> out;
  const RMat d = h.multiplicity().cast<double>();
  for (const Component& c : connected_components(h.multiplicity())) {
    if (c.rows.empty() || c.cols.empty()) continue;
    RMat sub(c.rows.size(), c.cols.size());
    for (std::size_t a = 0; a < c.rows.size(); ++a)
      for (std::size_t b = 0; b < c.cols.size(); ++b) sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d(c.rows[a], c.cols[b]);
    out.push_back(pf_eigen(sub).norm);
  }
  return out;
}

double scalar_dimension(const Bimodule& h) {
  if (!is_connected(h.multiplicity())) throw ValidationError("scalar dimension: bimodule is not connected");
  return pf_eigen(h.multiplicity().cast<double>()).norm;
}

double bimodule_index(const Bimodule& h) {
  const double d = scalar_dimension(h);
  return d * d;
}

AlgebraElement Expectation::apply(const AlgebraElement& b) const {
  const auto& inc = inclusion;
  if (!b.conforms(inc.ambient)) throw ValidationError("expectation: element does not match algebra");
  AlgebraElement out = AlgebraElement::zero(inc.sub);
  for (int j = 0; j < inc.ambient.num_blocks(); ++j) {
    CMat bj = b.blocks[sz(j)];
    if (!unitaries.empty()) bj = unitaries[sz(j)].adjoint() * bj * unitaries[sz(j)];
    for (int i = 0; i < inc.sub.num_blocks(); ++i) {
      const int lam = inc.lambda(i, j);
      if (lam == 0) continue;
      const int ni = inc.sub.block_dim(i);
      const int off = summand_offset(inc, i, j);
      const CMat& w = weights[sz(i)][sz(j)];
      CMat& e = out.blocks[sz(i)];
      for (int a = 0; a < ni; ++a)
        for (int a2 = 0; a2 < ni; ++a2) {
          cplx s = 0.0;
          for (int x = 0; x < lam; ++x)
            for (int y = 0; y < lam; ++y) s += bj(off + a * lam + x, off + a2 * lam + y) * w(y, x);
          e(a, a2) += s;
        }
    }
  }
  return out;
}

AlgebraElement Expectation::embed(const AlgebraElement& a) const {
  Homomorphism theta{inclusion.sub, inclusion.ambient, inclusion.lambda, unitaries};
  return theta(a);
}

Channel Expectation::channel() const {
  return validate_channel(
      Channel::from_map(inclusion.ambient, inclusion.sub, [this](const AlgebraElement& b) { return apply(b); }));
}

Expectation make_expectation(const InclusionData& inc, std::vector<std::vector<CMat>> weights,
                             std::vector<CMat> unitaries) {
  const int nb = inc.sub.num_blocks();
  const int mb = inc.ambient.num_blocks();
  if (weights.size() != sz(nb)) throw ValidationError("expectation: one weight row per subalgebra block expected");
  for (int i = 0; i < nb; ++i) {
    if (weights[sz(i)].size() != sz(mb)) throw ValidationError("expectation: weight row has wrong length");
    double total = 0.0;
    for (int j = 0; j < mb; ++j) {
      const CMat& w = weights[sz(i)][sz(j)];
      const int lam = inc.lambda(i, j);
      if (w.rows() != lam || w.cols() != lam) throw ValidationError("expectation: weight has wrong shape");
      if (lam == 0) continue;
      if (herm_eig(w).eigenvalues(0) < -1e-12) throw ValidationError("expectation: weight is not positive");
      total += w.trace().real();
    }
    if (std::abs(total - 1.0) > 1e-10) throw ValidationError("expectation: weights are not normalized");
  }
  if (!unitaries.empty() && unitaries.size() != sz(mb))
    throw ValidationError("expectation: one unitary per ambient block expected");
  return Expectation{inc, std::move(weights), std::move(unitaries)};
}

Expectation scalar_expectation(const InclusionData& inc, const RMat& t, std::vector<CMat> unitaries) {
  std::vector<std::vector<CMat>> w(sz(inc.sub.num_blocks()));
  for (int i = 0; i < inc.sub.num_blocks(); ++i)
    for (int j = 0; j < inc.ambient.num_blocks(); ++j) {
      const int lam = inc.lambda(i, j);
      w[sz(i)].push_back(t(i, j) * CMat::Identity(lam, lam));
    }
  return make_expectation(inc, std::move(w), std::move(unitaries));
}

double expectation_index(const Expectation& e) {
  const auto& inc = e.inclusion;
  double worst = 0.0;
  for (int j = 0; j < inc.ambient.num_blocks(); ++j) {
    double s = 0.0;
    for (int i = 0; i < inc.sub.num_blocks(); ++i) {
      if (inc.lambda(i, j) == 0) continue;
      const RVec ev = herm_eig(e.weights[sz(i)][sz(j)]).eigenvalues;
      if (ev(0) <= 0.0) return std::numeric_limits<double>::infinity();
      s += ev.cwiseInverse().sum();
    }
    worst = std::max(worst, s);
  }
  return worst;
}

RMat minimal_weights(const IMat& lambda) {
  RMat t = RMat::Zero(lambda.rows(), lambda.cols());
  for (const Component& c : connected_components(lambda)) {
    if (c.rows.empty() || c.cols.empty()) continue;
    RMat sub(c.rows.size(), c.cols.size());
    for (std::size_t a = 0; a < c.rows.size(); ++a)
      for (std::size_t b = 0; b < c.cols.size(); ++b)
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = lambda(c.rows[a], c.cols[b]);
    const RVec s = pf_eigen(sub).right;
    const RVec r = sub * s;
    for (std::size_t a = 0; a < c.rows.size(); ++a)
      for (std::size_t b = 0; b < c.cols.size(); ++b)
        if (lambda(c.rows[a], c.cols[b]) > 0)
          t(c.rows[a], c.cols[b]) = s(static_cast<Eigen::Index>(b)) / r(static_cast<Eigen::Index>(a));
  }
  return t;
}

MinimalExpectation minimal_expectation(const InclusionData& inc, std::uint64_t seed, int trials) {
  MinimalExpectation m{scalar_expectation(inc, minimal_weights(inc.lambda)), 0.0, trials, 0.0, false};
  m.index = expectation_index(m.e);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const double eps = std::pow(10.0, rng.uniform(-4.0, 0.5));
    std::vector<std::vector<CMat>> w = m.e.weights;
    for (auto& row : w) {
      double total = 0.0;
      for (CMat& x : row) {
        if (x.rows() == 0) continue;
        const CMat g = ginibre(rng, x.rows(), x.rows());
        x = (x + eps * g * g.adjoint() / static_cast<double>(x.rows())).eval();
        total += x.trace().real();
      }
      for (CMat& x : row) x /= total;
    }
    const Expectation e = make_expectation(inc, std::move(w));
    worst = std::min(worst, expectation_index(e) - m.index);
  }
  m.worst_margin = trials > 0 ? worst : 0.0;
  m.certified = m.worst_margin >= -1e-9;
  return m;
}

MinimalExpectation minimal_expectation(const Homomorphism& theta, std::uint64_t seed, int trials) {
  MinimalExpectation m = minimal_expectation(inclusion_matrix(theta), seed, trials);
  m.e.unitaries = theta.unitaries;
  return m;
}

Homomorphism left_embedding(const Bimodule& h) {
  std::vector<int> a = h.right_commutant_dims();
  return make_homomorphism(h.left_algebra(), MultiMatrixAlgebra(a), h.multiplicity());
}

Channel left_inverse(const GnsBimodule& g) {
  const Homomorphism l = left_embedding(g.h);
  return minimal_expectation(inclusion_matrix(l), 0, 0).e.channel();
}

}  // namespace qthermo
