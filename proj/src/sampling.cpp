#include "adjsim/sampling.hpp"

#include <limits>

#include "adjsim/errors.hpp"

namespace adjsim {

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TableSampler::TableSampler(const NullModel& model, const ContingencyTable& t)
    : model_(model), rows_(t.rows()), cols_(t.cols()), total_(t.total()) {
  require_model_shape(model, t);
  const auto u = t.row_margins();
  const auto v = t.col_margins();
  auto cumulate = [](std::vector<Count>& out, auto weight, std::size_t n) {
    out.resize(n);
    Count acc = 0;
    for (std::size_t k = 0; k < n; ++k) out[k] = acc += weight(k);
  };
  switch (model.kind) {
    case ModelKind::perm:
      x_labels_.reserve(total_);
      y_labels_.reserve(total_);
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
          for (Count k = 0; k < t(i, j); ++k) {
            x_labels_.push_back(i);
            y_labels_.push_back(j);
          }
      break;
    case ModelKind::ind2:
      cumulate(x_cumulative_, [&](std::size_t i) { return u[i]; }, rows_);
      cumulate(y_cumulative_, [&](std::size_t j) { return v[j]; }, cols_);
      break;
    case ModelKind::ind1:
      cumulate(x_cumulative_, [&](std::size_t i) { return u[i] + v[i]; }, rows_);
      y_cumulative_ = x_cumulative_;
      break;
    case ModelKind::fixed_uniform:
      cumulate(x_cumulative_, [](std::size_t) { return Count{1}; }, rows_);
      cumulate(y_cumulative_, [](std::size_t) { return Count{1}; }, cols_);
      break;
  }
}

std::size_t TableSampler::pick(const std::vector<Count>& cumulative, Rng& rng) {
  const auto r = static_cast<Count>(uniform_below(rng, static_cast<std::uint64_t>(cumulative.back())));
  std::size_t lo = 0, hi = cumulative.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (r < cumulative[mid]) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

ContingencyTable TableSampler::draw(Rng& rng) const {
  std::vector<Count> counts(rows_ * cols_, 0);
  if (model_.kind == ModelKind::perm) {
    std::vector<std::size_t> y = y_labels_;
    for (std::size_t k = y.size(); k > 1; --k) std::swap(y[k - 1], y[uniform_below(rng, k)]);
    for (std::size_t k = 0; k < y.size(); ++k) ++counts[x_labels_[k] * cols_ + y[k]];
  } else {
    std::vector<std::size_t> x(static_cast<std::size_t>(total_));
    for (auto& xi : x) xi = pick(x_cumulative_, rng);
    for (std::size_t k = 0; k < x.size(); ++k) ++counts[x[k] * cols_ + pick(y_cumulative_, rng)];
  }
  return ContingencyTable(rows_, cols_, std::move(counts));
}

std::vector<ContingencyTable> sample(const NullModel& model, const ContingencyTable& t, std::uint64_t seed,
                                     std::size_t count) {
  if (count < 1) throw InputError("sample count must be at least 1");
  const TableSampler sampler(model, t);
  Rng rng(seed);
  std::vector<ContingencyTable> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.draw(rng));
  return out;
}

}  // namespace adjsim
