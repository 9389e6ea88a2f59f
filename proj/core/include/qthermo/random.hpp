#pragma once

#include <cstdint>
#include <random>

#include "qthermo/numerics.hpp"

namespace qthermo {

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations (mt19937_64 is fully specified; the
/// uniform and normal transforms are done here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  double uniform();                         // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);          // inclusive
  double normal();
  cplx complex_normal();                    // E|z|^2 = 1

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for trial k of a run started from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k);

CMat ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);
CMat random_hermitian(Rng& rng, Eigen::Index n);
CMat random_unitary(Rng& rng, Eigen::Index n);
/// Trace-one positive definite matrix, minimum eigenvalue bounded away from 0.
CMat random_density(Rng& rng, Eigen::Index n);

}  // namespace qthermo
