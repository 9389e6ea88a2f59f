#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "spec_io.hpp"
#include "suites.hpp"

using namespace qthermo;
using namespace qthermo::cli;

namespace {

enum Exit { kOk = 0, kInput = 1, kNumeric = 2, kProperty = 3 };

std::vector<int> parse_dims(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || v < 1 || v > 64) throw ValidationError(std::string(what) + ": bad block dimension '" + tok + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": no block dimensions");
  return out;
}

std::string residual_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

unsigned thread_count() {
  if (const char* env = std::getenv("QTHERMO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  return 1;
}

int run_analyze(const std::string& path, bool markdown, bool timing, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const Analysis a = read_spec_file(path);
  ThermoReport r = landauer_verdict(a.channel, a.input_state, a.config, seed);
  r.label = a.label;
  const GnsBimodule g = gns_bimodule(a.channel, a.input_state, seed);
  json out = report_json(r, a.config, a.channel.source, a.channel.target, component_dimensions(g.h), seed);
  if (timing)
    out["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cout << (markdown ? report_markdown(out) : out.dump(2) + "\n");
  return kOk;
}

int run_random(const std::string& source, const std::string& target, int rank, std::uint64_t seed, double beta) {
  const MultiMatrixAlgebra n(parse_dims(source, "--source")), m(parse_dims(target, "--target"));
  ThermoConfig cfg;
  cfg.beta = beta;
  cfg.validate();
  Rng rng(seed);
  const Channel c = catalog::random_channel(n, m, rank, rng);
  if (!c.faithful) throw ValidationError("--rank: too small for a faithful channel between these algebras");
  const State phi = random_faithful_state(m, rng);
  std::cout << spec_document("random-" + std::to_string(seed), kraus_decompose(c), phi, cfg).dump(2) << "\n";
  return kOk;
}

int run_verify(std::uint64_t seed, int max_dim, int trials, double tol, const std::string& replay) {
  if (trials < 1) throw ValidationError("--trials must be positive");
  if (max_dim < 1 || max_dim > 8) throw ValidationError("--max-dim must lie in [1, 8]");
  if (!(tol > 0.0)) throw ValidationError("--tol must be positive");
  const auto& suites = verification_suites();
  const unsigned threads = thread_count();
  bool ok = true;
  for (std::size_t s = 0; s < suites.size(); ++s) {
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    std::vector<std::string> errors(static_cast<std::size_t>(trials));
    auto work = [&](unsigned w) {
      for (int k = static_cast<int>(w); k < trials; k += static_cast<int>(threads)) {
        const std::uint64_t ts = derive_seed(derive_seed(seed, s), static_cast<std::uint64_t>(k));
        try {
          results[static_cast<std::size_t>(k)] = suites[s].run(ts, max_dim);
        } catch (const std::exception& e) {
          errors[static_cast<std::size_t>(k)] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();

    int passed = 0, first_bad = -1;
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
      const auto& r = results[static_cast<std::size_t>(k)];
      const bool good = errors[static_cast<std::size_t>(k)].empty() && r.residual <= tol;
      passed += good ? 1 : 0;
      worst = std::max(worst, r.residual);
      if (!good && first_bad < 0) first_bad = k;
    }
    std::cout << suites[s].name << ": " << passed << "/" << trials << " passed, worst residual " << residual_text(worst) << "\n";
    if (first_bad >= 0 && ok) {
      ok = false;
      const auto k = static_cast<std::size_t>(first_bad);
      json art = {{"suite", suites[s].name},
                  {"seed", seed},
                  {"trial", first_bad},
                  {"trial_seed", derive_seed(derive_seed(seed, s), k)},
                  {"max_dim", max_dim},
                  {"tol", tol},
                  {"residual", results[k].residual},
                  {"detail", errors[k].empty() ? results[k].detail : errors[k]}};
      std::ofstream(replay) << art.dump(2) << "\n";
      std::cerr << "first failure: " << suites[s].name << " trial " << first_bad << ", replay written to " << replay
                << "\n";
    }
  }
  return ok ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics of finite-dimensional quantum channels"};
  app.require_subcommand(1);

  std::string file;
  bool markdown = false, json_flag = false, timing = false;
  std::uint64_t gns_seed = 0;
  auto* analyze = app.add_subcommand("analyze", "Analyze a channel specification");
  analyze->add_option("file", file, "Channel specification (JSON)")->required();
  auto* jf = analyze->add_flag("--json", json_flag, "Canonical JSON report (default)");
  analyze->add_flag("--markdown", markdown, "Markdown table")->excludes(jf);
  analyze->add_flag("--timing", timing, "Include wall-clock timing in the report");
  analyze->add_option("--seed", gns_seed, "Seed for the multiplicity-space basis");

  std::uint64_t seed = 0;
  int max_dim = 4, trials = 25;
  double tol = 1e-7;
  std::string replay = "qthermo-replay.json";
  auto* verify = app.add_subcommand("verify", "Run the property suites on random instances");
  verify->add_option("--seed", seed, "Master seed")->required();
  verify->add_option("--max-dim", max_dim, "Largest representation dimension of a random algebra");
  verify->add_option("--trials", trials, "Instances per suite");
  verify->add_option("--tol", tol, "Residual tolerance");
  verify->add_option("--replay", replay, "Where to write the first failing instance");

  std::string source, target;
  int rank = 1;
  double beta = 1.0;
  auto* random = app.add_subcommand("random", "Emit a random channel specification");
  random->add_option("--source", source, "Source block dimensions, e.g. 2,1")->required();
  random->add_option("--target", target, "Target block dimensions")->required();
  random->add_option("--rank", rank, "Kraus operators per target block")->required();
  random->add_option("--seed", seed, "Seed")->required();
  random->add_option("--beta", beta, "Inverse temperature");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*analyze) return run_analyze(file, markdown, timing, gns_seed);
    if (*verify) return run_verify(seed, max_dim, trials, tol, replay);
    return run_random(source, target, rank, seed, beta);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const SingularityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const ConsistencyError& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return kProperty;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
}
