#include "qthermo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qthermo {

namespace {

void check_conforms(const AlgebraElement& x, const MultiMatrixAlgebra& a, const char* what) {
  if (!x.conforms(a)) throw ValidationError(std::string(what) + ": element does not match algebra");
}

}  // namespace

AlgebraElement Channel::operator()(const AlgebraElement& n) const {
  check_conforms(n, source, "channel");
  AlgebraElement out = AlgebraElement::zero(target);
  for (int i = 0; i < source.num_blocks(); ++i) {
    const int ni = source.block_dim(i);
    const CMat& x = n.blocks[static_cast<std::size_t>(i)];
    for (int j = 0; j < target.num_blocks(); ++j) {
      const int q = target.block_dim(j);
      const CMat& c = choi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      CMat& y = out.blocks[static_cast<std::size_t>(j)];
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
          if (x(a, b) != cplx(0.0)) y += x(a, b) * c.block(a * q, b * q, q, q);
    }
  }
  return out;
}

AlgebraElement Channel::predual(const AlgebraElement& y) const {
  check_conforms(y, target, "predual");
  AlgebraElement out = AlgebraElement::zero(source);
  for (int i = 0; i < source.num_blocks(); ++i) {
    const int ni = source.block_dim(i);
    CMat& p = out.blocks[static_cast<std::size_t>(i)];
    for (int j = 0; j < target.num_blocks(); ++j) {
      const int q = target.block_dim(j);
      const CMat& c = choi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const CMat& yj = y.blocks[static_cast<std::size_t>(j)];
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b) p(b, a) += (yj * c.block(a * q, b * q, q, q)).trace();
    }
  }
  return out;
}

Channel Channel::from_map(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m, const Map& f) {
  Channel ch;
  ch.source = n;
  ch.target = m;
  ch.choi.resize(static_cast<std::size_t>(n.num_blocks()));
  for (int i = 0; i < n.num_blocks(); ++i) {
    const int ni = n.block_dim(i);
    auto& row = ch.choi[static_cast<std::size_t>(i)];
    for (int j = 0; j < m.num_blocks(); ++j) {
      const int q = m.block_dim(j);
      row.push_back(CMat::Zero(ni * q, ni * q));
    }
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < ni; ++b) {
        AlgebraElement img = f(AlgebraElement::unit(n, i, a, b));
        check_conforms(img, m, "from_map");
        for (int j = 0; j < m.num_blocks(); ++j) {
          const int q = m.block_dim(j);
          row[static_cast<std::size_t>(j)].block(a * q, b * q, q, q) = img.blocks[static_cast<std::size_t>(j)];
        }
      }
  }
  return ch;
}

ChoiReport inspect_channel(const Channel& alpha) {
  const auto& n = alpha.source;
  const auto& m = alpha.target;
  if (alpha.choi.size() != static_cast<std::size_t>(n.num_blocks()))
    throw ValidationError("channel: Choi block count does not match source");
  ChoiReport rep;
  rep.worst_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n.num_blocks(); ++i) {
    const auto& row = alpha.choi[static_cast<std::size_t>(i)];
    if (row.size() != static_cast<std::size_t>(m.num_blocks()))
      throw ValidationError("channel: Choi block count does not match target");
    for (int j = 0; j < m.num_blocks(); ++j) {
      const CMat& c = row[static_cast<std::size_t>(j)];
      const int d = n.block_dim(i) * m.block_dim(j);
      if (c.rows() != d || c.cols() != d) throw ValidationError("channel: Choi block has wrong shape");
      if ((c - c.adjoint()).norm() > hermitian_tolerance(c))
        throw ValidationError("channel: Choi matrix is not Hermitian");
      rep.worst_eigenvalue = std::min(rep.worst_eigenvalue, herm_eig(c).eigenvalues(0));
    }
  }
  AlgebraElement one = alpha(AlgebraElement::identity(n));
  rep.unitality_error = (one - AlgebraElement::identity(m)).norm();
  AlgebraElement dual = alpha.predual(AlgebraElement::identity(m));
  rep.faithful = true;
  for (const CMat& b : dual.blocks) {
    const RVec ev = herm_eig(b).eigenvalues;
    if (ev(0) <= 1e-10 * std::max(1.0, ev.maxCoeff())) rep.faithful = false;
  }
  return rep;
}

Channel validate_channel(const Channel& alpha) {
  const ChoiReport rep = inspect_channel(alpha);
  double scale = 1.0;
  for (const auto& row : alpha.choi)
    for (const CMat& c : row) scale = std::max(scale, c.norm());
  if (rep.worst_eigenvalue < -1e-9 * scale) {
    std::ostringstream os;
    os << "channel is not completely positive: worst Choi eigenvalue " << rep.worst_eigenvalue;
    throw ValidationError(os.str());
  }
  if (rep.unitality_error > 1e-10 * std::max(1.0, std::sqrt(static_cast<double>(alpha.target.rep_dim())))) {
    std::ostringstream os;
    os << "channel is not unital: ||alpha(1) - 1|| = " << rep.unitality_error;
    throw ValidationError(os.str());
  }
  Channel out = alpha;
  for (auto& row : out.choi)
    for (CMat& c : row) c = (0.5 * (c + c.adjoint())).eval();
  out.faithful = rep.faithful;
  return out;
}

CMat KrausSet::dense(int a) const {
  const KrausOperator& k = ops[static_cast<std::size_t>(a)];
  CMat t = CMat::Zero(target.rep_dim(), source.rep_dim());
  t.block(target.offset(k.target_block), source.offset(k.source_block), k.op.rows(), k.op.cols()) = k.op;
  return t;
}

KrausSet kraus_decompose(const Channel& alpha) {
  KrausSet ks;
  ks.source = alpha.source;
  ks.target = alpha.target;
  std::vector<HermitianSpectrum> spectra;
  double top = 0.0;
  for (const auto& row : alpha.choi)
    for (const CMat& c : row) {
      spectra.push_back(herm_eig(c));
      if (spectra.back().eigenvalues.size() > 0) top = std::max(top, spectra.back().eigenvalues.maxCoeff());
    }
  const double cut = 1e-10 * top;
  std::size_t s = 0;
  for (int i = 0; i < alpha.source.num_blocks(); ++i)
    for (int j = 0; j < alpha.target.num_blocks(); ++j, ++s) {
      const int ni = alpha.source.block_dim(i);
      const int q = alpha.target.block_dim(j);
      const HermitianSpectrum& sp = spectra[s];
      for (Eigen::Index k = sp.eigenvalues.size() - 1; k >= 0; --k) {
        const double lam = sp.eigenvalues(k);
        if (lam <= cut) break;
        KrausOperator op;
        op.source_block = i;
        op.target_block = j;
        op.weight = lam;
        op.op = CMat(q, ni);
        const double r = std::sqrt(lam);
        for (int a = 0; a < ni; ++a)
          for (int c = 0; c < q; ++c) op.op(c, a) = r * sp.eigenvectors(a * q + c, k);
        ks.ops.push_back(std::move(op));
      }
    }
  std::stable_sort(ks.ops.begin(), ks.ops.end(),
                   [](const KrausOperator& x, const KrausOperator& y) { return x.weight > y.weight; });
  return ks;
}

Channel channel_from_kraus(const KrausSet& k) {
  std::vector<CMat> ops;
  ops.reserve(k.ops.size());
  for (int a = 0; a < k.rank(); ++a) ops.push_back(k.dense(a));
  return channel_from_kraus(k.source, k.target, ops);
}

Channel channel_from_kraus(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m,
                           const std::vector<CMat>& ops) {
  for (const CMat& t : ops)
    if (t.rows() != m.rep_dim() || t.cols() != n.rep_dim())
      throw ValidationError("Kraus operator has wrong shape");
  const CMat one = CMat::Identity(m.rep_dim(), m.rep_dim());
  CMat mask = one;  // block-diagonal pattern of M
  mask.setZero();
  for (int j = 0; j < m.num_blocks(); ++j)
    mask.block(m.offset(j), m.offset(j), m.block_dim(j), m.block_dim(j)).setOnes();
  auto f = [&](const AlgebraElement& x) {
    const CMat xd = x.dense();
    CMat y = CMat::Zero(m.rep_dim(), m.rep_dim());
    for (const CMat& t : ops) y += t * xd * t.adjoint();
    const CMat off = y.cwiseProduct((CMat::Ones(y.rows(), y.cols()) - mask).eval());
    if (off.norm() > 1e-10 * (1.0 + y.norm()))
      throw ValidationError("Kraus operators do not map into the target algebra");
    return AlgebraElement::from_dense(m, y);
  };
  return validate_channel(Channel::from_map(n, m, f));
}

Channel compose(const Channel& beta, const Channel& alpha) {
  if (!(alpha.target == beta.source)) throw ValidationError("compose: algebras do not match");
  Channel c = Channel::from_map(alpha.source, beta.target,
                                [&](const AlgebraElement& x) { return beta(alpha(x)); });
  return validate_channel(c);
}

State output_state(const Channel& alpha, const State& phi_in) {
  if (!(phi_in.algebra == alpha.target)) throw ValidationError("output_state: state lives on the wrong algebra");
  return validate_state(State::from_weighted(alpha.source, alpha.predual(AlgebraElement{phi_in.weighted_blocks()}).blocks));
}

Channel transpose_channel(const Channel& alpha, const State& phi_in) {
  const State psi = output_state(alpha, phi_in);
  if (!phi_in.faithful || !psi.faithful)
    throw SingularityError("transpose channel needs faithful input and output states");
  AlgebraElement qh, pm;
  for (int j = 0; j < alpha.target.num_blocks(); ++j) qh.blocks.push_back(mat_sqrt(phi_in.weighted(j)));
  for (int i = 0; i < alpha.source.num_blocks(); ++i) pm.blocks.push_back(mat_pow(psi.weighted(i), -0.5));
  Channel t = Channel::from_map(alpha.target, alpha.source,
                                [&](const AlgebraElement& m) { return pm * alpha.predual(qh * m * qh) * pm; });
  return validate_channel(t);
}

CMat DilationPair::rho(const AlgebraElement& n) const {
  return kron(n.dense(), CMat::Identity(env_dim, env_dim));
}

AlgebraElement DilationPair::compress(const AlgebraElement& n) const {
  return AlgebraElement::from_dense(target, v.adjoint() * rho(n) * v);
}

DilationPair stinespring_dilate(const KrausSet& k) {
  DilationPair d;
  d.source = k.source;
  d.target = k.target;
  d.env_dim = k.rank();
  const int r = d.env_dim;
  d.v = CMat::Zero(static_cast<Eigen::Index>(k.source.rep_dim()) * r, k.target.rep_dim());
  for (int a = 0; a < r; ++a) {
    const CMat ta = k.dense(a).adjoint();
    for (Eigen::Index x = 0; x < ta.rows(); ++x) d.v.row(x * r + a) = ta.row(x);
  }
  return d;
}

DilationPair stinespring_dilate(const Channel& alpha) { return stinespring_dilate(kraus_decompose(alpha)); }

cplx bilinear_form(const State& phi, const AlgebraElement& m1, const AlgebraElement& m2) {
  check_conforms(m1, phi.algebra, "bilinear_form");
  check_conforms(m2, phi.algebra, "bilinear_form");
  cplx s = 0.0;
  for (int j = 0; j < phi.algebra.num_blocks(); ++j) {
    const CMat h = mat_sqrt(phi.weighted(j));
    s += (h * m1.blocks[static_cast<std::size_t>(j)] * h * m2.blocks[static_cast<std::size_t>(j)]).trace();
  }
  return s;
}

AlgebraElement Homomorphism::operator()(const AlgebraElement& x) const {
  check_conforms(x, source, "homomorphism");
  AlgebraElement out;
  for (int j = 0; j < target.num_blocks(); ++j) {
    std::vector<CMat> parts;
    for (int i = 0; i < source.num_blocks(); ++i) {
      const int mult = multiplicity(i, j);
      if (mult > 0) parts.push_back(kron(x.blocks[static_cast<std::size_t>(i)], CMat::Identity(mult, mult)));
    }
    CMat y = block_diag(parts);
    if (!unitaries.empty()) {
      const CMat& u = unitaries[static_cast<std::size_t>(j)];
      y = u * y * u.adjoint();
    }
    out.blocks.push_back(std::move(y));
  }
  return out;
}

Channel Homomorphism::channel() const {
  return validate_channel(Channel::from_map(source, target, [this](const AlgebraElement& x) { return (*this)(x); }));
}

Homomorphism make_homomorphism(const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m,
                               const IMat& multiplicity, std::vector<CMat> unitaries) {
  if (multiplicity.rows() != n.num_blocks() || multiplicity.cols() != m.num_blocks())
    throw ValidationError("homomorphism: multiplicity matrix has wrong shape");
  if ((multiplicity.array() < 0).any()) throw ValidationError("homomorphism: negative multiplicity");
  for (int i = 0; i < n.num_blocks(); ++i)
    if (multiplicity.row(i).sum() == 0) throw ValidationError("homomorphism: not injective");
  for (int j = 0; j < m.num_blocks(); ++j) {
    int d = 0;
    for (int i = 0; i < n.num_blocks(); ++i) d += multiplicity(i, j) * n.block_dim(i);
    if (d != m.block_dim(j)) throw ValidationError("homomorphism: not unital (dimension mismatch)");
  }
  if (!unitaries.empty()) {
    if (unitaries.size() != static_cast<std::size_t>(m.num_blocks()))
      throw ValidationError("homomorphism: one unitary per target block expected");
    for (int j = 0; j < m.num_blocks(); ++j) {
      const CMat& u = unitaries[static_cast<std::size_t>(j)];
      const int q = m.block_dim(j);
      if (u.rows() != q || u.cols() != q) throw ValidationError("homomorphism: unitary has wrong shape");
      if ((u.adjoint() * u - CMat::Identity(q, q)).norm() > 1e-9 * q)
        throw ValidationError("homomorphism: matrix is not unitary");
    }
  }
  return Homomorphism{n, m, multiplicity, std::move(unitaries)};
}

}  // namespace qthermo
