#include "qthermo/bimodule.hpp"

#include <cmath>

namespace qthermo {

namespace {

// Range of an orthogonal projection.  Eigenvalues are 0 or 1, so an
// absolute cut also handles the zero projection.
CMat projection_range(const CMat& p) {
  const HermitianSpectrum s = herm_eig(0.5 * (p + p.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = s.eigenvalues.size() - 1; k >= 0; --k)
    if (s.eigenvalues(k) > 0.5) keep.push_back(k);
  CMat out(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(keep[c]);
  return out;
}


std::size_t sz(int x) { return static_cast<std::size_t>(x); }

// Offset of unit (i, r, s) in matrix_units order.
int unit_index(const MultiMatrixAlgebra& a, int i, int r, int s) {
  int off = 0;
  for (int b = 0; b < i; ++b) off += a.block_dim(b) * a.block_dim(b);
  return off + r * a.block_dim(i) + s;
}

std::vector<CMat> unit_images(const MultiMatrixAlgebra& a, const std::function<CMat(const AlgebraElement&)>& f) {
  std::vector<CMat> out;
  for (const auto& u : matrix_units(a)) out.push_back(f(AlgebraElement::unit(a, u[0], u[1], u[2])));
  return out;
}

CMat expand(const MultiMatrixAlgebra& a, const std::vector<CMat>& units, const AlgebraElement& x, int dim) {
  if (!x.conforms(a)) throw ValidationError("bimodule action: element does not match algebra");
  CMat out = CMat::Zero(dim, dim);
  std::size_t u = 0;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const CMat& b = x.blocks[sz(i)];
    for (int r = 0; r < a.block_dim(i); ++r)
      for (int s = 0; s < a.block_dim(i); ++s, ++u)
        if (b(r, s) != cplx(0.0)) out += b(r, s) * units[u];
  }
  return out;
}

// Fused multiplicity offset of middle block j inside piece (i, l).
int fused_offset(const IMat& mh, const IMat& mk, int i, int l, int j) {
  int off = 0;
  for (int jj = 0; jj < j; ++jj) off += mh(i, jj) * mk(jj, l);
  return off;
}

}  // namespace

Bimodule::Bimodule(MultiMatrixAlgebra left, MultiMatrixAlgebra right, IMat multiplicity)
    : left_(std::move(left)), right_(std::move(right)), mult_(std::move(multiplicity)) {
  if (mult_.rows() != left_.num_blocks() || mult_.cols() != right_.num_blocks())
    throw ValidationError("bimodule: multiplicity matrix has wrong shape");
  if ((mult_.array() < 0).any()) throw ValidationError("bimodule: negative multiplicity");
  for (int i = 0; i < left_.num_blocks(); ++i)
    for (int j = 0; j < right_.num_blocks(); ++j)
      if (mult_(i, j) > 0) {
        pieces_.push_back({i, j, mult_(i, j), dim_});
        dim_ += left_.block_dim(i) * mult_(i, j) * right_.block_dim(j);
      }
}

int Bimodule::piece_index(int i, int j) const {
  for (std::size_t p = 0; p < pieces_.size(); ++p)
    if (pieces_[p].i == i && pieces_[p].j == j) return static_cast<int>(p);
  return -1;
}

int Bimodule::index(int piece, int a, int k, int c) const {
  const Piece& p = pieces_[sz(piece)];
  const int q = right_.block_dim(p.j);
  return p.offset + (a * p.mult + k) * q + c;
}

CMat Bimodule::left(const AlgebraElement& n) const {
  if (!n.conforms(left_)) throw ValidationError("bimodule: left element does not match algebra");
  CMat out = CMat::Zero(dim_, dim_);
  for (const Piece& p : pieces_) {
    const int ni = left_.block_dim(p.i);
    const int q = right_.block_dim(p.j);
    const int d = ni * p.mult * q;
    out.block(p.offset, p.offset, d, d) = kron(n.blocks[sz(p.i)], CMat::Identity(p.mult * q, p.mult * q));
  }
  return out;
}

CMat Bimodule::right(const AlgebraElement& m) const {
  if (!m.conforms(right_)) throw ValidationError("bimodule: right element does not match algebra");
  CMat out = CMat::Zero(dim_, dim_);
  for (const Piece& p : pieces_) {
    const int ni = left_.block_dim(p.i);
    const int q = right_.block_dim(p.j);
    const int d = ni * p.mult * q;
    out.block(p.offset, p.offset, d, d) =
        kron(CMat::Identity(ni * p.mult, ni * p.mult), m.blocks[sz(p.j)].transpose());
  }
  return out;
}

CMat Bimodule::central_projection(int i, int j) const {
  CMat out = CMat::Zero(dim_, dim_);
  const int p = piece_index(i, j);
  if (p < 0) return out;
  const Piece& pc = pieces_[sz(p)];
  const int d = left_.block_dim(i) * pc.mult * right_.block_dim(j);
  out.block(pc.offset, pc.offset, d, d).setIdentity();
  return out;
}

CMat Bimodule::multiplicity_operator(int piece, const CMat& x) const {
  const Piece& p = pieces_[sz(piece)];
  if (x.rows() != p.mult || x.cols() != p.mult) throw ValidationError("multiplicity operator has wrong shape");
  const int ni = left_.block_dim(p.i);
  const int q = right_.block_dim(p.j);
  CMat out = CMat::Zero(dim_, dim_);
  out.block(p.offset, p.offset, ni * p.mult * q, ni * p.mult * q) =
      kron(kron(CMat::Identity(ni, ni), x), CMat::Identity(q, q));
  return out;
}

std::vector<int> Bimodule::right_commutant_dims() const {
  std::vector<int> a(sz(right_.num_blocks()), 0);
  for (const Piece& p : pieces_) a[sz(p.j)] += left_.block_dim(p.i) * p.mult;
  return a;
}

std::vector<int> Bimodule::left_commutant_dims() const {
  std::vector<int> b(sz(left_.num_blocks()), 0);
  for (const Piece& p : pieces_) b[sz(p.i)] += p.mult * right_.block_dim(p.j);
  return b;
}

CMat Bimodule::right_frame() const {
  const std::vector<int> a = right_commutant_dims();
  std::vector<int> joff(a.size(), 0), uoff(pieces_.size(), 0);
  for (std::size_t j = 1; j < a.size(); ++j)
    joff[j] = joff[j - 1] + a[j - 1] * right_.block_dim(static_cast<int>(j - 1));
  std::vector<int> fill(a.size(), 0);
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    uoff[p] = fill[sz(pieces_[p].j)];
    fill[sz(pieces_[p].j)] += left_.block_dim(pieces_[p].i) * pieces_[p].mult;
  }
  CMat f = CMat::Zero(dim_, dim_);
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const Piece& pc = pieces_[p];
    const int q = right_.block_dim(pc.j);
    const int nu = left_.block_dim(pc.i) * pc.mult;
    for (int u = 0; u < nu; ++u)
      for (int c = 0; c < q; ++c) f(pc.offset + u * q + c, joff[sz(pc.j)] + (uoff[p] + u) * q + c) = 1.0;
  }
  return f;
}

CMat Bimodule::left_frame() const {
  const std::vector<int> b = left_commutant_dims();
  std::vector<int> joff(b.size(), 0), woff(pieces_.size(), 0);
  for (std::size_t i = 1; i < b.size(); ++i)
    joff[i] = joff[i - 1] + b[i - 1] * left_.block_dim(static_cast<int>(i - 1));
  std::vector<int> fill(b.size(), 0);
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    woff[p] = fill[sz(pieces_[p].i)];
    fill[sz(pieces_[p].i)] += pieces_[p].mult * right_.block_dim(pieces_[p].j);
  }
  CMat f = CMat::Zero(dim_, dim_);
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const Piece& pc = pieces_[p];
    const int ni = left_.block_dim(pc.i);
    const int w = pc.mult * right_.block_dim(pc.j);
    const int bi = b[sz(pc.i)];
    for (int a = 0; a < ni; ++a)
      for (int x = 0; x < w; ++x) f(pc.offset + a * w + x, joff[sz(pc.i)] + a * bi + woff[p] + x) = 1.0;
  }
  return f;
}

CMat Bimodule::right_commutant_element(const std::vector<CMat>& b) const {
  const std::vector<int> a = right_commutant_dims();
  if (b.size() != a.size()) throw ValidationError("commutant element: wrong number of blocks");
  std::vector<CMat> parts;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (b[j].rows() != a[j] || b[j].cols() != a[j]) throw ValidationError("commutant element: block has wrong shape");
    const int q = right_.block_dim(static_cast<int>(j));
    parts.push_back(kron(b[j], CMat::Identity(q, q)));
  }
  const CMat f = right_frame();
  return f * block_diag(parts) * f.adjoint();
}

Bimodule identity_bimodule(const MultiMatrixAlgebra& m) {
  IMat id = IMat::Identity(m.num_blocks(), m.num_blocks());
  return Bimodule(m, m, id);
}

CMat ConcreteBimodule::left(const AlgebraElement& n) const { return expand(left_algebra, left_units, n, dim); }

CMat ConcreteBimodule::right(const AlgebraElement& m) const { return expand(right_algebra, right_units, m, dim); }

ConcreteBimodule concrete(const Bimodule& h) {
  ConcreteBimodule c;
  c.left_algebra = h.left_algebra();
  c.right_algebra = h.right_algebra();
  c.dim = h.dim();
  c.left_units = unit_images(c.left_algebra, [&](const AlgebraElement& x) { return h.left(x); });
  c.right_units = unit_images(c.right_algebra, [&](const AlgebraElement& x) { return h.right(x); });
  return c;
}

Decomposition normal_form(const ConcreteBimodule& h, std::uint64_t seed) {
  const auto& n = h.left_algebra;
  const auto& m = h.right_algebra;
  IMat mult = IMat::Zero(n.num_blocks(), m.num_blocks());
  std::vector<CMat> seeds;  // rotated bases of l(e^i_00) r(e^j_00) H
  for (int i = 0; i < n.num_blocks(); ++i)
    for (int j = 0; j < m.num_blocks(); ++j) {
      const CMat p = h.left_units[sz(unit_index(n, i, 0, 0))] * h.right_units[sz(unit_index(m, j, 0, 0))];
      CMat basis = projection_range(p);
      const int k = static_cast<int>(basis.cols());
      mult(i, j) = k;
      if (k > 1) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i * m.num_blocks() + j)));
        basis = basis * herm_eig(random_hermitian(rng, k)).eigenvectors;
      }
      seeds.push_back(basis);
    }
  Decomposition d{Bimodule(n, m, mult), CMat()};
  if (d.nf.dim() != h.dim)
    throw ConsistencyError("normal form: central pieces do not exhaust the space (actions not unital?)");
  d.v = CMat::Zero(h.dim, h.dim);
  std::size_t s = 0;
  for (int i = 0; i < n.num_blocks(); ++i)
    for (int j = 0; j < m.num_blocks(); ++j, ++s) {
      const int p = d.nf.piece_index(i, j);
      if (p < 0) continue;
      const CMat& b = seeds[s];
      for (int a = 0; a < n.block_dim(i); ++a) {
        const CMat la = h.left_units[sz(unit_index(n, i, a, 0))] * b;
        for (int c = 0; c < m.block_dim(j); ++c) {
          const CMat col = h.right_units[sz(unit_index(m, j, 0, c))] * la;
          for (int k = 0; k < mult(i, j); ++k) d.v.col(d.nf.index(p, a, k, c)) = col.col(k);
        }
      }
    }
  const double err = (d.v.adjoint() * d.v - CMat::Identity(h.dim, h.dim)).norm();
  if (err > 1e-8 * std::max(1.0, std::sqrt(static_cast<double>(h.dim))))
    throw ConsistencyError("normal form: basis is not orthonormal (actions do not commute?)");
  return d;
}

GnsBimodule gns_bimodule(const Channel& alpha, const State& phi_in, std::uint64_t seed) {
  if (!(phi_in.algebra == alpha.target)) throw ValidationError("gns: input state lives on the wrong algebra");
  if (!phi_in.faithful) throw ValidationError("gns: input state is not faithful");
  if (!alpha.faithful) throw ValidationError("gns: channel is not faithful");
  const auto& n = alpha.source;
  const auto& m = alpha.target;
  GnsBimodule g;
  g.alpha = alpha;
  g.phi_in = phi_in;
  g.phi_out = output_state(alpha, phi_in);

  struct Block {
    int i, j, d, r, offset;
    HermitianSpectrum w;
  };
  std::vector<Block> blocks;
  std::vector<CMat> qh;
  for (int j = 0; j < m.num_blocks(); ++j) qh.push_back(mat_sqrt(phi_in.weighted(j)));
  double top = 0.0;
  for (int i = 0; i < n.num_blocks(); ++i)
    for (int j = 0; j < m.num_blocks(); ++j) {
      const int ni = n.block_dim(i);
      const int q = m.block_dim(j);
      const CMat& c = alpha.choi[sz(i)][sz(j)];
      CMat w(ni * q, ni * q);
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b) {
          const CMat t = qh[sz(j)] * c.block(a * q, b * q, q, q) * qh[sz(j)];
          for (int cc = 0; cc < q; ++cc)
            for (int dd = 0; dd < q; ++dd) w(b * q + cc, a * q + dd) = t(dd, cc);
        }
      Block bl{i, j, ni * q, 0, 0, herm_eig(w)};
      if (bl.w.eigenvalues.size() > 0) top = std::max(top, bl.w.eigenvalues.maxCoeff());
      blocks.push_back(std::move(bl));
    }
  int dim = 0;
  for (Block& b : blocks) {
    const double lo = b.w.eigenvalues.size() ? b.w.eigenvalues.minCoeff() : 0.0;
    if (lo < -1e-9 * std::max(1.0, top)) throw ValidationError("gns: pairing functional is not positive");
    for (Eigen::Index k = 0; k < b.w.eigenvalues.size(); ++k)
      if (b.w.eigenvalues(k) > 1e-10 * top) ++b.r;
    b.offset = dim;
    dim += b.d * b.r;
  }

  g.gns.left_algebra = n;
  g.gns.right_algebra = m;
  g.gns.dim = dim;
  g.xi_gns = CVec::Zero(dim);
  for (const Block& b : blocks) {
    const Eigen::Index top_k = b.w.eigenvalues.size();
    for (int k = 0; k < b.r; ++k) {
      const Eigen::Index e = top_k - 1 - k;  // descending
      const double s = std::sqrt(b.w.eigenvalues(e));
      for (int x = 0; x < b.d; ++x) g.xi_gns(b.offset + x * b.r + k) = s * b.w.eigenvectors(x, e);
    }
  }
  auto act = [&](bool left_side, const AlgebraElement& x) {
    CMat out = CMat::Zero(dim, dim);
    for (const Block& b : blocks) {
      if (b.r == 0) continue;
      const int ni = n.block_dim(b.i);
      const int q = m.block_dim(b.j);
      const CMat core = left_side ? kron(x.blocks[sz(b.i)], CMat::Identity(q, q))
                                  : kron(CMat::Identity(ni, ni), x.blocks[sz(b.j)].transpose());
      out.block(b.offset, b.offset, b.d * b.r, b.d * b.r) = kron(core, CMat::Identity(b.r, b.r));
    }
    return out;
  };
  g.gns.left_units = unit_images(n, [&](const AlgebraElement& x) { return act(true, x); });
  g.gns.right_units = unit_images(m, [&](const AlgebraElement& x) { return act(false, x); });

  Decomposition dec = normal_form(g.gns, seed);
  g.h = std::move(dec.nf);
  g.v = std::move(dec.v);
  g.xi = g.v.adjoint() * g.xi_gns;
  return g;
}

std::vector<CentralPiece> central_decomposition(const Bimodule& h) {
  std::vector<CentralPiece> out;
  for (const auto& p : h.pieces()) {
    const int ni = h.left_algebra().block_dim(p.i);
    const int q = h.right_algebra().block_dim(p.j);
    IMat m(1, 1);
    m(0, 0) = p.mult;
    CentralPiece c{p.i, p.j, Bimodule(MultiMatrixAlgebra({ni}), MultiMatrixAlgebra({q}), m), CMat()};
    const int d = ni * p.mult * q;
    c.isometry = CMat::Zero(h.dim(), d);
    c.isometry.block(p.offset, 0, d, d).setIdentity();
    out.push_back(std::move(c));
  }
  return out;
}

Bimodule conjugate(const Bimodule& h) {
  return Bimodule(h.right_algebra(), h.left_algebra(), h.multiplicity().transpose());
}

CMat conjugation_permutation(const Bimodule& h) {
  const Bimodule c = conjugate(h);
  CMat perm = CMat::Zero(h.dim(), h.dim());
  for (std::size_t p = 0; p < h.pieces().size(); ++p) {
    const auto& pc = h.pieces()[p];
    const int pb = c.piece_index(pc.j, pc.i);
    for (int a = 0; a < h.left_algebra().block_dim(pc.i); ++a)
      for (int k = 0; k < pc.mult; ++k)
        for (int cc = 0; cc < h.right_algebra().block_dim(pc.j); ++cc)
          perm(c.index(pb, cc, k, a), h.index(static_cast<int>(p), a, k, cc)) = 1.0;
  }
  return perm;
}

CVec conjugate_vector(const Bimodule& h, const CVec& x) { return (conjugation_permutation(h) * x).conjugate(); }

CMat conjugate_operator(const Bimodule& h, const CMat& a) {
  const CMat p = conjugation_permutation(h);
  return p * a.conjugate() * p.transpose();
}

DirectSum direct_sum(const Bimodule& h, const Bimodule& k) {
  if (!(h.left_algebra() == k.left_algebra()) || !(h.right_algebra() == k.right_algebra()))
    throw ValidationError("direct sum: algebra mismatch");
  DirectSum s{Bimodule(h.left_algebra(), h.right_algebra(), h.multiplicity() + k.multiplicity()), CMat(), CMat()};
  s.inject_first = CMat::Zero(s.sum.dim(), h.dim());
  s.inject_second = CMat::Zero(s.sum.dim(), k.dim());
  auto fill = [&](const Bimodule& src, CMat& inj, bool second) {
    for (std::size_t p = 0; p < src.pieces().size(); ++p) {
      const auto& pc = src.pieces()[p];
      const int ps = s.sum.piece_index(pc.i, pc.j);
      const int shift = second ? h.multiplicity()(pc.i, pc.j) : 0;
      for (int a = 0; a < src.left_algebra().block_dim(pc.i); ++a)
        for (int x = 0; x < pc.mult; ++x)
          for (int c = 0; c < src.right_algebra().block_dim(pc.j); ++c)
            inj(s.sum.index(ps, a, shift + x, c), src.index(static_cast<int>(p), a, x, c)) = 1.0;
    }
  };
  fill(h, s.inject_first, false);
  fill(k, s.inject_second, true);
  return s;
}

IMat fused_multiplicity(const Bimodule& h, const Bimodule& k) {
  if (!(h.right_algebra() == k.left_algebra())) throw ValidationError("relative tensor: middle algebras differ");
  return h.multiplicity() * k.multiplicity();
}

RelativeTensor relative_tensor(const Bimodule& h, const Bimodule& k, const State& phi) {
  const IMat mult = fused_multiplicity(h, k);
  if (!(phi.algebra == h.right_algebra())) throw ValidationError("relative tensor: state lives on the wrong algebra");
  if (!phi.faithful) throw ValidationError("relative tensor: middle state is not faithful");
  RelativeTensor r{Bimodule(h.left_algebra(), k.right_algebra(), mult), CMat()};
  r.fusion = CMat::Zero(r.fused.dim(), static_cast<Eigen::Index>(h.dim()) * k.dim());
  const auto& mid = h.right_algebra();
  std::vector<CMat> qm;
  for (int j = 0; j < mid.num_blocks(); ++j) qm.push_back(mat_pow(phi.weighted(j), -0.5));
  for (std::size_t ph = 0; ph < h.pieces().size(); ++ph) {
    const auto& a = h.pieces()[ph];
    for (std::size_t pk = 0; pk < k.pieces().size(); ++pk) {
      const auto& b = k.pieces()[pk];
      if (b.i != a.j) continue;
      const int j = a.j;
      const int q = mid.block_dim(j);
      const int pf = r.fused.piece_index(a.i, b.j);
      const int off = fused_offset(h.multiplicity(), k.multiplicity(), a.i, b.j, j);
      for (int aa = 0; aa < h.left_algebra().block_dim(a.i); ++aa)
        for (int x = 0; x < a.mult; ++x)
          for (int y = 0; y < b.mult; ++y)
            for (int c = 0; c < k.right_algebra().block_dim(b.j); ++c) {
              const int row = r.fused.index(pf, aa, off + x * b.mult + y, c);
              for (int eta = 0; eta < q; ++eta)
                for (int zeta = 0; zeta < q; ++zeta) {
                  const Eigen::Index col = static_cast<Eigen::Index>(h.index(static_cast<int>(ph), aa, x, eta)) * k.dim() +
                                           k.index(static_cast<int>(pk), zeta, y, c);
                  r.fusion(row, col) = qm[sz(j)](eta, zeta);
                }
            }
    }
  }
  return r;
}

std::vector<CMat> intertwiner_components(const CMat& t, const Bimodule& h, const Bimodule& h1, double tol) {
  if (!(h.left_algebra() == h1.left_algebra()) || !(h.right_algebra() == h1.right_algebra()))
    throw ValidationError("intertwiner: algebra mismatch");
  if (t.rows() != h1.dim() || t.cols() != h.dim()) throw ValidationError("intertwiner: wrong shape");
  std::vector<CMat> comps;
  CMat rebuilt = CMat::Zero(t.rows(), t.cols());
  for (std::size_t p = 0; p < h.pieces().size(); ++p) {
    const auto& pc = h.pieces()[p];
    const int p1 = h1.piece_index(pc.i, pc.j);
    if (p1 < 0) {
      comps.emplace_back();
      continue;
    }
    const int m1 = h1.pieces()[sz(p1)].mult;
    CMat c(m1, pc.mult);
    for (int x1 = 0; x1 < m1; ++x1)
      for (int x = 0; x < pc.mult; ++x) c(x1, x) = t(h1.index(p1, 0, x1, 0), h.index(static_cast<int>(p), 0, x, 0));
    const int ni = h.left_algebra().block_dim(pc.i);
    const int q = h.right_algebra().block_dim(pc.j);
    rebuilt.block(h1.pieces()[sz(p1)].offset, pc.offset, ni * m1 * q, ni * pc.mult * q) =
        kron(kron(CMat::Identity(ni, ni), c), CMat::Identity(q, q));
    comps.push_back(std::move(c));
  }
  if ((rebuilt - t).norm() > tol * (1.0 + t.norm())) throw ConsistencyError("operator is not an intertwiner");
  return comps;
}

std::vector<CMat> intertwiner_basis(const Bimodule& h, const Bimodule& h1) {
  if (!(h.left_algebra() == h1.left_algebra()) || !(h.right_algebra() == h1.right_algebra()))
    throw ValidationError("intertwiner: algebra mismatch");
  std::vector<CMat> basis;
  for (std::size_t p = 0; p < h.pieces().size(); ++p) {
    const auto& pc = h.pieces()[p];
    const int p1 = h1.piece_index(pc.i, pc.j);
    if (p1 < 0) continue;
    const int m1 = h1.pieces()[sz(p1)].mult;
    const int ni = h.left_algebra().block_dim(pc.i);
    const int q = h.right_algebra().block_dim(pc.j);
    for (int x1 = 0; x1 < m1; ++x1)
      for (int x = 0; x < pc.mult; ++x) {
        CMat e = CMat::Zero(m1, pc.mult);
        e(x1, x) = 1.0;
        CMat t = CMat::Zero(h1.dim(), h.dim());
        t.block(h1.pieces()[sz(p1)].offset, pc.offset, ni * m1 * q, ni * pc.mult * q) =
            kron(kron(CMat::Identity(ni, ni), e), CMat::Identity(q, q));
        basis.push_back(std::move(t));
      }
  }
  return basis;
}

std::vector<CMat> intertwiner_nullspace(const ConcreteBimodule& h, const ConcreteBimodule& h1, double tol) {
  if (!(h.left_algebra == h1.left_algebra) || !(h.right_algebra == h1.right_algebra))
    throw ValidationError("intertwiner: algebra mismatch");
  const int d = h.dim;
  const int d1 = h1.dim;
  const Eigen::Index nv = static_cast<Eigen::Index>(d) * d1;
  CMat gram = CMat::Zero(nv, nv);
  const CMat id = CMat::Identity(d, d);
  const CMat id1 = CMat::Identity(d1, d1);
  auto add = [&](const MultiMatrixAlgebra& a, const std::vector<CMat>& u, const std::vector<CMat>& u1) {
    for (int i = 0; i < a.num_blocks(); ++i)
      for (int r = 0; r < a.block_dim(i); ++r)
        for (int pass = 0; pass < 2; ++pass) {
          const int ui = pass == 0 ? unit_index(a, i, r, 0) : unit_index(a, i, 0, r);
          // vec(T L - L1 T) with column-major vec
          const CMat eq = kron(u[sz(ui)].transpose(), id1) - kron(id, u1[sz(ui)]);
          gram += eq.adjoint() * eq;
        }
  };
  add(h.left_algebra, h.left_units, h1.left_units);
  add(h.right_algebra, h.right_units, h1.right_units);
  const HermitianSpectrum s = herm_eig(gram);
  const double cut = tol * std::max(1.0, s.eigenvalues.size() ? s.eigenvalues.maxCoeff() : 0.0);
  std::vector<CMat> out;
  for (Eigen::Index k = 0; k < s.eigenvalues.size() && s.eigenvalues(k) <= cut; ++k) {
    const CVec col = s.eigenvectors.col(k);
    out.push_back(Eigen::Map<const CMat>(col.data(), d1, d));
  }
  return out;
}

CMat tensor_intertwiners(const CMat& t, const Bimodule& h, const Bimodule& h1, const CMat& s, const Bimodule& k,
                         const Bimodule& k1) {
  const std::vector<CMat> tc = intertwiner_components(t, h, h1);
  const std::vector<CMat> sc = intertwiner_components(s, k, k1);
  const Bimodule src(h.left_algebra(), k.right_algebra(), fused_multiplicity(h, k));
  const Bimodule dst(h1.left_algebra(), k1.right_algebra(), fused_multiplicity(h1, k1));
  CMat out = CMat::Zero(dst.dim(), src.dim());
  for (std::size_t ps = 0; ps < src.pieces().size(); ++ps) {
    const auto& pc = src.pieces()[ps];
    const int pd = dst.piece_index(pc.i, pc.j);
    if (pd < 0) continue;
    const int md = dst.pieces()[sz(pd)].mult;
    CMat mid = CMat::Zero(md, pc.mult);
    for (int j = 0; j < h.right_algebra().num_blocks(); ++j) {
      const int ph = h.piece_index(pc.i, j);
      const int pk = k.piece_index(j, pc.j);
      if (ph < 0 || pk < 0) continue;
      const CMat& tij = tc[sz(ph)];
      const CMat& sjl = sc[sz(pk)];
      if (tij.size() == 0 || sjl.size() == 0) continue;
      const int os = fused_offset(h.multiplicity(), k.multiplicity(), pc.i, pc.j, j);
      const int od = fused_offset(h1.multiplicity(), k1.multiplicity(), pc.i, pc.j, j);
      mid.block(od, os, tij.rows() * sjl.rows(), tij.cols() * sjl.cols()) = kron(tij, sjl);
    }
    const int ni = src.left_algebra().block_dim(pc.i);
    const int pl = src.right_algebra().block_dim(pc.j);
    out.block(dst.pieces()[sz(pd)].offset, pc.offset, ni * md * pl, ni * pc.mult * pl) =
        kron(kron(CMat::Identity(ni, ni), mid), CMat::Identity(pl, pl));
  }
  return out;
}

CMat cyclic_equivalence(const ConcreteBimodule& h1, const CVec& xi1, const ConcreteBimodule& h2, const CVec& xi2,
                        double tol) {
  if (!(h1.left_algebra == h2.left_algebra) || !(h1.right_algebra == h2.right_algebra))
    throw ValidationError("cyclic equivalence: algebra mismatch");
  if (h1.dim != h2.dim) throw ConsistencyError("cyclic equivalence: dimensions differ");
  const std::size_t nl = h1.left_units.size();
  const std::size_t nr = h1.right_units.size();
  CMat x1(h1.dim, static_cast<Eigen::Index>(nl * nr));
  CMat x2(h2.dim, static_cast<Eigen::Index>(nl * nr));
  Eigen::Index col = 0;
  for (std::size_t a = 0; a < nl; ++a) {
    const CVec l1 = h1.left_units[a] * xi1;
    const CVec l2 = h2.left_units[a] * xi2;
    for (std::size_t b = 0; b < nr; ++b, ++col) {
      x1.col(col) = h1.right_units[b] * l1;
      x2.col(col) = h2.right_units[b] * l2;
    }
  }
  const CMat u = x2 * pinv(x1, 1e-10);
  const CMat id = CMat::Identity(h1.dim, h1.dim);
  const double scale = std::max(1.0, x2.norm());
  if ((u * x1 - x2).norm() > tol * scale || (u.adjoint() * u - id).norm() > tol * std::sqrt(h1.dim + 1.0))
    throw ConsistencyError("cyclic vectors are not unitarily equivalent");
  return u;
}

}  // namespace qthermo
