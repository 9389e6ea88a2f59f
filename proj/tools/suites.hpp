#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qthermo/qthermo.hpp"

namespace qthermo::cli {

/// Random algebra with rep_dim <= max_dim, one or two blocks.
MultiMatrixAlgebra random_algebra(Rng& rng, int max_dim);

/// Faithful random channel between random algebras; resamples until the
/// drawn shape admits a faithful map.
Channel random_faithful_channel(Rng& rng, int max_dim);

struct TrialResult {
  double residual = 0.0;  // worst violation; compared against the tolerance
  std::string detail;
};

struct Suite {
  std::string name;
  std::function<TrialResult(std::uint64_t seed, int max_dim)> run;
};

/// Chain rule, Kosaki, Delta functoriality, U naturality, transpose and
/// Landauer sweeps, in that order.
const std::vector<Suite>& verification_suites();

}  // namespace qthermo::cli
