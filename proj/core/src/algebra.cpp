#include "qthermo/algebra.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qthermo {

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw ValidationError("algebra: at least one block required");
  for (int n : dims_) {
    if (n < 1) throw ValidationError("algebra: block dimensions must be positive");
    offsets_.push_back(rep_dim_);
    rep_dim_ += n;
    dimension_ += n * n;
  }
}

AlgebraElement AlgebraElement::zero(const MultiMatrixAlgebra& a) {
  AlgebraElement e;
  for (int n : a.block_dims()) e.blocks.push_back(CMat::Zero(n, n));
  return e;
}

AlgebraElement AlgebraElement::identity(const MultiMatrixAlgebra& a) {
  AlgebraElement e;
  for (int n : a.block_dims()) e.blocks.push_back(CMat::Identity(n, n));
  return e;
}

AlgebraElement AlgebraElement::unit(const MultiMatrixAlgebra& a, int i, int r, int s) {
  AlgebraElement e = zero(a);
  e.blocks[static_cast<std::size_t>(i)](r, s) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::from_dense(const MultiMatrixAlgebra& a, const CMat& m) {
  if (m.rows() != a.rep_dim() || m.cols() != a.rep_dim())
    throw ValidationError("from_dense: shape mismatch");
  AlgebraElement e;
  for (int i = 0; i < a.num_blocks(); ++i)
    e.blocks.push_back(m.block(a.offset(i), a.offset(i), a.block_dim(i), a.block_dim(i)));
  return e;
}

CMat AlgebraElement::dense() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  CMat out = CMat::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement e;
  for (const auto& b : blocks) e.blocks.push_back(b.adjoint());
  return e;
}

AlgebraElement AlgebraElement::transpose() const {
  AlgebraElement e;
  for (const auto& b : blocks) e.blocks.push_back(b.transpose());
  return e;
}

double AlgebraElement::norm() const {
  double s = 0.0;
  for (const auto& b : blocks) s += b.squaredNorm();
  return std::sqrt(s);
}

bool AlgebraElement::conforms(const MultiMatrixAlgebra& a) const {
  if (static_cast<int>(blocks.size()) != a.num_blocks()) return false;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const auto& b = blocks[static_cast<std::size_t>(i)];
    if (b.rows() != a.block_dim(i) || b.cols() != a.block_dim(i)) return false;
  }
  return true;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (auto& b : blocks) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement e;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) e.blocks.push_back(a.blocks[i] * b.blocks[i]);
  return e;
}

AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

CMat State::weighted(int i) const {
  return weights(i) * densities[static_cast<std::size_t>(i)];
}

std::vector<CMat> State::weighted_blocks() const {
  std::vector<CMat> out;
  for (int i = 0; i < algebra.num_blocks(); ++i) out.push_back(weighted(i));
  return out;
}

cplx State::operator()(const AlgebraElement& m) const {
  cplx s = 0.0;
  for (int i = 0; i < algebra.num_blocks(); ++i)
    s += weights(i) * (densities[static_cast<std::size_t>(i)] * m.blocks[static_cast<std::size_t>(i)]).trace();
  return s;
}

State State::tracial(const MultiMatrixAlgebra& a) {
  State s;
  s.algebra = a;
  s.weights = RVec(a.num_blocks());
  for (int i = 0; i < a.num_blocks(); ++i) {
    const int n = a.block_dim(i);
    s.weights(i) = static_cast<double>(n) / a.rep_dim();
    s.densities.push_back(CMat::Identity(n, n) / static_cast<double>(n));
  }
  return validate_state(s);
}

State State::from_weighted(const MultiMatrixAlgebra& a, const std::vector<CMat>& w) {
  if (static_cast<int>(w.size()) != a.num_blocks())
    throw ValidationError("state: block count mismatch");
  State s;
  s.algebra = a;
  s.weights = RVec(a.num_blocks());
  for (int i = 0; i < a.num_blocks(); ++i) {
    const double tr = w[static_cast<std::size_t>(i)].trace().real();
    s.weights(i) = tr;
    const int n = a.block_dim(i);
    s.densities.push_back(tr > 0.0 ? CMat(w[static_cast<std::size_t>(i)] / tr)
                                   : CMat(CMat::Identity(n, n) / static_cast<double>(n)));
  }
  return validate_state(s);
}

State validate_state(const State& s, bool require_faithful) {
  const auto& a = s.algebra;
  if (s.weights.size() != a.num_blocks() ||
      static_cast<int>(s.densities.size()) != a.num_blocks())
    throw ValidationError("state: block count mismatch");
  State out;
  out.algebra = a;
  out.weights = s.weights;
  out.faithful = true;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const CMat& rho = s.densities[static_cast<std::size_t>(i)];
    if (rho.rows() != a.block_dim(i) || rho.cols() != a.block_dim(i))
      throw ValidationError("state: density " + std::to_string(i) + " has wrong shape");
    if (!(s.weights(i) >= -1e-12))
      throw ValidationError("state: weight " + std::to_string(i) + " is negative");
    const HermitianSpectrum sp = herm_eig(rho);
    if (sp.eigenvalues(0) < -hermitian_tolerance(rho))
      throw ValidationError("state: density " + std::to_string(i) +
                            " has negative eigenvalue " + std::to_string(sp.eigenvalues(0)));
    const double tr = sp.eigenvalues.sum();
    if (!(tr > 0.0)) throw ValidationError("state: density " + std::to_string(i) + " has zero trace");
    CMat sym = 0.5 * (rho + rho.adjoint()) / tr;
    out.densities.push_back(sym);
    out.weights(i) = std::max(0.0, s.weights(i));
    const double floor = positivity_floor(sp.eigenvalues);
    if (sp.eigenvalues(0) <= floor || out.weights(i) <= 0.0) out.faithful = false;
  }
  const double total = out.weights.sum();
  if (!(total > 0.0)) throw ValidationError("state: weights sum to zero");
  out.weights /= total;
  if (require_faithful && !out.faithful) throw ValidationError("state: not faithful");
  return out;
}

std::vector<AlgebraElement> central_atoms(const MultiMatrixAlgebra& a) {
  std::vector<AlgebraElement> atoms;
  for (int i = 0; i < a.num_blocks(); ++i) {
    AlgebraElement p = AlgebraElement::zero(a);
    p.blocks[static_cast<std::size_t>(i)].setIdentity();
    atoms.push_back(std::move(p));
  }
  return atoms;
}

OppositeTensor opposite_tensor(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m) {
  OppositeTensor t;
  t.left = n;
  t.right = m;
  std::vector<int> dims;
  for (int i = 0; i < n.num_blocks(); ++i)
    for (int j = 0; j < m.num_blocks(); ++j) {
      dims.push_back(n.block_dim(i) * m.block_dim(j));
      t.pairs.emplace_back(i, j);
    }
  t.algebra = MultiMatrixAlgebra(dims);
  return t;
}

AlgebraElement OppositeTensor::embed_left(const AlgebraElement& x) const {
  AlgebraElement e;
  for (const auto& [i, j] : pairs)
    e.blocks.push_back(kron(x.blocks[static_cast<std::size_t>(i)],
                            CMat::Identity(right.block_dim(j), right.block_dim(j))));
  return e;
}

AlgebraElement OppositeTensor::embed_right(const AlgebraElement& y) const {
  AlgebraElement e;
  for (const auto& [i, j] : pairs)
    e.blocks.push_back(kron(CMat::Identity(left.block_dim(i), left.block_dim(i)),
                            y.blocks[static_cast<std::size_t>(j)].transpose()));
  return e;
}

std::vector<std::array<int, 3>> matrix_units(const MultiMatrixAlgebra& a) {
  std::vector<std::array<int, 3>> out;
  for (int i = 0; i < a.num_blocks(); ++i)
    for (int r = 0; r < a.block_dim(i); ++r)
      for (int c = 0; c < a.block_dim(i); ++c) out.push_back({i, r, c});
  return out;
}

}  // namespace qthermo

namespace qthermo {

AlgebraElement random_element(const MultiMatrixAlgebra& a, Rng& rng) {
  AlgebraElement e;
  for (int n : a.block_dims()) e.blocks.push_back(ginibre(rng, n, n));
  return e;
}

AlgebraElement random_self_adjoint(const MultiMatrixAlgebra& a, Rng& rng) {
  AlgebraElement e;
  for (int n : a.block_dims()) e.blocks.push_back(random_hermitian(rng, n));
  return e;
}

State random_faithful_state(const MultiMatrixAlgebra& a, Rng& rng) {
  State s;
  s.algebra = a;
  s.weights = RVec(a.num_blocks());
  for (int i = 0; i < a.num_blocks(); ++i) {
    s.weights(i) = 0.2 + rng.uniform();
    s.densities.push_back(random_density(rng, a.block_dim(i)));
  }
  return validate_state(s, true);
}

}  // namespace qthermo
