#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "adjsim/null_model.hpp"

namespace adjsim {

using Rng = std::mt19937_64;

// Uniform integer in [0, bound) by rejection; fully specified so that
// samples are reproducible across standard libraries.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

// Seed of stream `stream` derived from the root seed (SplitMix64 mixing).
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream);

// Draws joint counts from M^t by simulating the label-level process that
// defines each model.
class TableSampler {
 public:
  TableSampler(const NullModel& model, const ContingencyTable& t);
  ContingencyTable draw(Rng& rng) const;

 private:
  // Category index for a uniform draw against cumulative integer weights.
  static std::size_t pick(const std::vector<Count>& cumulative, Rng& rng);

  NullModel model_;
  std::size_t rows_;
  std::size_t cols_;
  Count total_;
  std::vector<std::size_t> x_labels_;  // perm: observed x (row) per observation
  std::vector<std::size_t> y_labels_;  // perm: observed y (col) per observation
  std::vector<Count> x_cumulative_;
  std::vector<Count> y_cumulative_;
};

// `count` tables drawn from M^t with a single stream seeded by `seed`.
std::vector<ContingencyTable> sample(const NullModel& model, const ContingencyTable& t, std::uint64_t seed,
                                     std::size_t count);

}  // namespace adjsim
