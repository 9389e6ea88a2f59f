#include "spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qthermo::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "non-finite number");
  return x;
}

cplx complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected a number or [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

int positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 4096) fail(path, "expected a positive integer");
  return j.get<int>();
}

MultiMatrixAlgebra algebra(const json& j, const std::string& path) {
  const json& b = field(j, "blocks", path);
  const std::string bp = path + ".blocks";
  if (!b.is_array() || b.empty()) fail(bp, "expected a non-empty list of block dimensions");
  std::vector<int> dims;
  for (std::size_t k = 0; k < b.size(); ++k) dims.push_back(positive_int(b[k], bp + "[" + std::to_string(k) + "]"));
  return MultiMatrixAlgebra(dims);
}

std::string idx(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

Channel parse_channel(const json& j, const MultiMatrixAlgebra& n, const MultiMatrixAlgebra& m) {
  const std::string path = "channel";
  if (!j.is_object() || j.size() != 1) fail(path, "expected exactly one of kraus, choi, homomorphism");
  if (j.contains("kraus")) {
    const json& ops = j["kraus"];
    const std::string kp = "channel.kraus";
    if (!ops.is_array() || ops.empty()) fail(kp, "expected a non-empty list");
    KrausSet k{n, m, {}};
    for (std::size_t a = 0; a < ops.size(); ++a) {
      const std::string p = idx(kp, a);
      KrausOperator op;
      op.source_block = static_cast<int>(number(field(ops[a], "source_block", p), p + ".source_block"));
      op.target_block = static_cast<int>(number(field(ops[a], "target_block", p), p + ".target_block"));
      if (op.source_block < 0 || op.source_block >= n.num_blocks()) fail(p + ".source_block", "out of range");
      if (op.target_block < 0 || op.target_block >= m.num_blocks()) fail(p + ".target_block", "out of range");
      op.op = decode_matrix(field(ops[a], "op", p), p + ".op");
      if (op.op.rows() != m.block_dim(op.target_block) || op.op.cols() != n.block_dim(op.source_block))
        fail(p + ".op", "shape does not match the block dimensions");
      k.ops.push_back(std::move(op));
    }
    try {
      return channel_from_kraus(k);
    } catch (const ValidationError& e) {
      fail(kp, e.what());
    }
  }
  if (j.contains("choi")) {
    const json& c = j["choi"];
    const std::string cp = "channel.choi";
    if (!c.is_array() || c.size() != static_cast<std::size_t>(n.num_blocks())) fail(cp, "expected one row per source block");
    Channel ch{n, m, {}, false};
    for (int i = 0; i < n.num_blocks(); ++i) {
      const std::string rp = idx(cp, static_cast<std::size_t>(i));
      if (!c[static_cast<std::size_t>(i)].is_array() || c[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(m.num_blocks()))
        fail(rp, "expected one block per target block");
      ch.choi.emplace_back();
      for (int jj = 0; jj < m.num_blocks(); ++jj) {
        const std::string bp = idx(rp, static_cast<std::size_t>(jj));
        CMat b = decode_matrix(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)], bp);
        const int d = n.block_dim(i) * m.block_dim(jj);
        if (b.rows() != d || b.cols() != d) fail(bp, "Choi block must be square of size n_i * q_j");
        ch.choi.back().push_back(std::move(b));
      }
    }
    try {
      return validate_channel(ch);
    } catch (const ValidationError& e) {
      fail(cp, e.what());
    }
  }
  if (j.contains("homomorphism")) {
    const json& h = j["homomorphism"];
    const std::string hp = "channel.homomorphism";
    const json& mu = field(h, "multiplicity", hp);
    const std::string mp = hp + ".multiplicity";
    if (!mu.is_array() || mu.size() != static_cast<std::size_t>(n.num_blocks())) fail(mp, "expected one row per source block");
    IMat lam(n.num_blocks(), m.num_blocks());
    for (int i = 0; i < n.num_blocks(); ++i) {
      const json& row = mu[static_cast<std::size_t>(i)];
      const std::string rp = idx(mp, static_cast<std::size_t>(i));
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m.num_blocks())) fail(rp, "expected one entry per target block");
      for (int jj = 0; jj < m.num_blocks(); ++jj) {
        const json& x = row[static_cast<std::size_t>(jj)];
        if (!x.is_number_integer() || x.get<long long>() < 0) fail(idx(rp, static_cast<std::size_t>(jj)), "expected a non-negative integer");
        lam(i, jj) = x.get<int>();
      }
    }
    std::vector<CMat> us;
    if (h.contains("unitaries")) {
      const json& u = h["unitaries"];
      const std::string up = hp + ".unitaries";
      if (!u.is_array() || u.size() != static_cast<std::size_t>(m.num_blocks())) fail(up, "expected one unitary per target block");
      for (std::size_t k = 0; k < u.size(); ++k) us.push_back(decode_matrix(u[k], idx(up, k)));
    }
    try {
      return make_homomorphism(n, m, lam, us).channel();
    } catch (const ValidationError& e) {
      fail(hp, e.what());
    }
  }
  fail(path, "expected exactly one of kraus, choi, homomorphism");
}

State parse_state(const json& j, const MultiMatrixAlgebra& m) {
  const std::string path = "input_state";
  const json& w = field(j, "weights", path);
  const json& d = field(j, "densities", path);
  const auto nb = static_cast<std::size_t>(m.num_blocks());
  if (!w.is_array() || w.size() != nb) fail(path + ".weights", "expected one weight per target block");
  if (!d.is_array() || d.size() != nb) fail(path + ".densities", "expected one density per target block");
  State s;
  s.algebra = m;
  s.weights = RVec(m.num_blocks());
  for (std::size_t k = 0; k < nb; ++k) {
    const std::string wp = idx(path + ".weights", k);
    s.weights(static_cast<Eigen::Index>(k)) = number(w[k], wp);
    if (!(s.weights(static_cast<Eigen::Index>(k)) > 0.0)) fail(wp, "weight must be positive (faithful state required)");
    const std::string dp = idx(path + ".densities", k);
    CMat r = decode_matrix(d[k], dp);
    const int q = m.block_dim(static_cast<int>(k));
    if (r.rows() != q || r.cols() != q) fail(dp, "shape does not match the block dimension");
    HermitianSpectrum sp;
    try {
      sp = herm_eig(r);
    } catch (const ValidationError& e) {
      fail(dp, e.what());
    }
    const double lo = sp.eigenvalues.minCoeff();
    if (lo < 0.0) fail(dp, "negative eigenvalue " + std::to_string(lo));
    if (lo <= 1e-12 * std::max(1.0, sp.eigenvalues.maxCoeff())) fail(dp, "density is singular (faithful state required)");
    s.densities.push_back(std::move(r));
  }
  return validate_state(s, true);
}

}  // namespace

json encode_matrix(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat decode_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty row-major matrix");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(path, "expected a non-empty row-major matrix");
  CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = idx(path, r);
    if (!j[r].is_array() || j[r].size() != cols) fail(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_number(j[r][c], idx(rp, c));
  }
  return m;
}

Analysis parse_spec(const json& doc) {
  if (!doc.is_object()) fail("$", "expected a JSON object");
  const json& fmt = field(doc, "format", "$");
  if (!fmt.is_number_integer() || fmt.get<int>() != 1) fail("format", "unsupported format (expected 1)");
  Analysis a;
  if (doc.contains("id")) {
    if (!doc["id"].is_string()) fail("id", "expected a string");
    a.label = doc["id"].get<std::string>();
  }
  const MultiMatrixAlgebra n = algebra(field(doc, "source", "$"), "source");
  const MultiMatrixAlgebra m = algebra(field(doc, "target", "$"), "target");
  a.channel = parse_channel(field(doc, "channel", "$"), n, m);
  if (!a.channel.faithful) fail("channel", "channel is not faithful");
  a.input_state = parse_state(field(doc, "input_state", "$"), m);
  if (doc.contains("beta")) a.config.beta = number(doc["beta"], "beta");
  if (doc.contains("k")) a.config.k = number(doc["k"], "k");
  try {
    a.config.validate();
  } catch (const ValidationError& e) {
    fail("$", e.what());
  }
  return a;
}

Analysis read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return parse_spec(doc);
}

json spec_document(const std::string& label, const KrausSet& kraus, const State& phi, const ThermoConfig& cfg) {
  json doc;
  doc["format"] = 1;
  doc["id"] = label;
  doc["source"]["blocks"] = kraus.source.block_dims();
  doc["target"]["blocks"] = kraus.target.block_dims();
  json ops = json::array();
  for (const KrausOperator& op : kraus.ops)
    ops.push_back({{"source_block", op.source_block}, {"target_block", op.target_block}, {"op", encode_matrix(op.op)}});
  doc["channel"]["kraus"] = std::move(ops);
  json dens = json::array();
  for (const CMat& r : phi.densities) dens.push_back(encode_matrix(r));
  doc["input_state"]["weights"] = std::vector<double>(phi.weights.data(), phi.weights.data() + phi.weights.size());
  doc["input_state"]["densities"] = std::move(dens);
  doc["beta"] = cfg.beta;
  doc["k"] = cfg.k;
  return doc;
}

double report_number(double x) {
  if (!std::isfinite(x)) return x;
  if (std::abs(x) < 1e-12) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json report_json(const ThermoReport& r, const ThermoConfig& cfg, const MultiMatrixAlgebra& source,
                 const MultiMatrixAlgebra& target, const std::vector<double>& component_dims,
                 std::uint64_t seed) {
  json out;
  out["format"] = 1;
  out["tool"] = {{"name", "qthermo"}, {"version", QTHERMO_VERSION}};
  out["id"] = r.label;
  out["source_blocks"] = source.block_dims();
  out["target_blocks"] = target.block_dims();
  json mult = json::array();
  for (Eigen::Index i = 0; i < r.multiplicity.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.multiplicity.cols(); ++j) row.push_back(r.multiplicity(i, j));
    mult.push_back(std::move(row));
  }
  out["dimension_matrix"] = std::move(mult);
  out["connected"] = r.connected;
  json comps = json::array();
  for (double d : component_dims) comps.push_back(report_number(d));
  out["component_dimensions"] = std::move(comps);
  out["scalar_dimension"] = report_number(r.dimension);
  out["index"] = report_number(r.index);
  out["entropy"] = report_number(r.entropy);
  out["mean_energy"] = report_number(r.energy);
  out["free_energy"] = report_number(r.free_energy_theorem);
  out["free_energy_infimum"] = report_number(r.free_energy_infimum);
  out["infimum_attained"] = r.infimum_attained;
  // -F in units of kT log 2, so the Landauer bound reads 1.
  const double bit = cfg.k / cfg.beta * std::log(2.0);
  out["neg_free_energy_kT_log2"] = report_number(-r.free_energy_theorem / bit);
  out["neg_free_energy_infimum_kT_log2"] = report_number(-r.free_energy_infimum / bit);
  out["landauer_bound"] = report_number(r.landauer_bound);
  out["reversible"] = r.reversible;
  out["bound_satisfied"] = r.bound_satisfied;
  out["consistency_residual_below_tol"] = r.consistency_residual <= cfg.tol;
  out["beta"] = cfg.beta;
  out["k"] = cfg.k;
  out["tolerance"] = cfg.tol;
  out["seed"] = seed;
  return out;
}

std::string report_markdown(const json& report) {
  std::ostringstream os;
  os << "# qthermo report";
  if (!report["id"].get<std::string>().empty()) os << ": " << report["id"].get<std::string>();
  os << "\n\n| quantity | value |\n|---|---|\n";
  for (const char* key : {"dimension_matrix", "connected", "scalar_dimension", "index", "entropy", "mean_energy",
                          "free_energy", "free_energy_infimum", "neg_free_energy_kT_log2",
                          "neg_free_energy_infimum_kT_log2", "infimum_attained", "landauer_bound", "reversible",
                          "bound_satisfied", "beta", "k"})
    os << "| " << key << " | " << report[key].dump() << " |\n";
  return os.str();
}

}  // namespace qthermo::cli
