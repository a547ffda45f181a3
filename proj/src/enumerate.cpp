#include "adjsim/enumerate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "adjsim/errors.hpp"

namespace adjsim {

namespace {

[[noreturn]] void budget_exceeded(const EnumerationBudget& budget, const std::string& what) {
  throw ResourceError("enumeration budget of " + std::to_string(budget.max_tables) +
                      " tables exceeded for " + what + " (raise --budget or use --method monte_carlo)");
}

}  // namespace

std::uint64_t domain_size(Count total, std::size_t cells) {
  if (cells == 0) return total == 0 ? 1 : 0;
  // C(total + cells - 1, cells - 1), computed incrementally with overflow guard.
  const std::uint64_t n = static_cast<std::uint64_t>(total) + cells - 1;
  const std::uint64_t k = std::min<std::uint64_t>(cells - 1, static_cast<std::uint64_t>(total));
  unsigned __int128 out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
    if (out > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(out);
}

TableSet TableSet::over_cells(Count total, std::size_t rows, std::size_t cols, std::vector<bool> mask,
                              EnumerationBudget budget) {
  if (total < 1) throw InputError("table total must be positive");
  if (rows == 0 || cols == 0) throw InputError("table shape must be at least 1x1");
  if (mask.empty()) mask.assign(rows * cols, true);
  if (mask.size() != rows * cols) throw InputError("cell mask does not match table shape");
  TableSet set;
  set.kind_ = Kind::cells;
  set.rows_ = rows;
  set.cols_ = cols;
  set.total_ = total;
  for (std::size_t c = 0; c < mask.size(); ++c)
    if (mask[c]) set.positions_.push_back(c);
  set.budget_ = budget;
  set.constraint_ = "total N=" + std::to_string(total) + " on " + std::to_string(rows) + "x" +
                    std::to_string(cols);
  if (set.positions_.size() != mask.size()) set.constraint_ += " (restricted cells)";
  if (domain_size(total, set.positions_.size()) > budget.max_tables) budget_exceeded(budget, set.constraint_);
  set.self_ = std::make_shared<const TableSet>(set);
  return set;
}

TableSet TableSet::with_margins(std::vector<Count> row_margins, std::vector<Count> col_margins,
                                EnumerationBudget budget) {
  if (row_margins.empty() || col_margins.empty()) throw InputError("margins must be non-empty");
  for (Count m : row_margins)
    if (m < 0) throw InputError("row margin entries must be nonnegative");
  for (Count m : col_margins)
    if (m < 0) throw InputError("column margin entries must be nonnegative");
  const Count nu = std::accumulate(row_margins.begin(), row_margins.end(), Count{0});
  const Count nv = std::accumulate(col_margins.begin(), col_margins.end(), Count{0});
  if (nu != nv) {
    throw InputError("margin totals differ (" + std::to_string(nu) + " vs " + std::to_string(nv) + ")");
  }
  if (nu < 1) throw InputError("margin total must be positive");
  TableSet set;
  set.kind_ = Kind::margins;
  set.rows_ = row_margins.size();
  set.cols_ = col_margins.size();
  set.total_ = nu;
  set.positions_.resize(set.rows_ * set.cols_);
  std::iota(set.positions_.begin(), set.positions_.end(), std::size_t{0});
  set.row_margins_ = std::move(row_margins);
  set.col_margins_ = std::move(col_margins);
  set.budget_ = budget;
  set.constraint_ = "fixed margins on " + std::to_string(set.rows_) + "x" + std::to_string(set.cols_);
  set.self_ = std::make_shared<const TableSet>(set);
  return set;
}

std::vector<ContingencyTable> TableSet::collect() const {
  std::vector<ContingencyTable> out;
  for_each([&](const ContingencyTable& t) { out.push_back(t); });
  return out;
}

std::uint64_t TableSet::size() const {
  if (kind_ == Kind::cells) return domain_size(total_, positions_.size());
  std::uint64_t n = 0;
  for_each([&](const ContingencyTable&) { ++n; });
  return n;
}

TableSet::Cursor::Cursor(std::shared_ptr<const TableSet> set)
    : set_(std::move(set)), values_(set_->positions_.size(), 0), row_used_(set_->rows_, 0),
      col_used_(set_->cols_, 0) {}

void TableSet::Cursor::bounds(std::size_t p, Count& lo, Count& hi) const {
  const TableSet& s = *set_;
  if (s.kind_ == Kind::cells) {
    const Count remaining = s.total_ - used_;
    hi = remaining;
    lo = (p + 1 == s.positions_.size()) ? remaining : 0;
    return;
  }
  const std::size_t i = p / s.cols_;
  const std::size_t j = p % s.cols_;
  const Count row_left = s.row_margins_[i] - row_used_[i];
  Count later_cols = 0;
  for (std::size_t jj = j + 1; jj < s.cols_; ++jj) later_cols += s.col_margins_[jj] - col_used_[jj];
  hi = std::min(row_left, s.col_margins_[j] - col_used_[j]);
  lo = std::max<Count>(0, row_left - later_cols);
}

void TableSet::Cursor::apply(std::size_t p, Count delta) {
  const std::size_t cell = set_->positions_[p];
  row_used_[cell / set_->cols_] += delta;
  col_used_[cell % set_->cols_] += delta;
  used_ += delta;
  values_[p] += delta;
}

void TableSet::Cursor::fill_from(std::size_t p) {
  for (std::size_t q = p; q < values_.size(); ++q) {
    Count lo = 0, hi = 0;
    bounds(q, lo, hi);
    apply(q, lo);
  }
}

void TableSet::Cursor::publish() {
  if (++yielded_ > set_->budget_.max_tables) budget_exceeded(set_->budget_, set_->constraint_);
  std::vector<Count> counts(set_->rows_ * set_->cols_, 0);
  for (std::size_t p = 0; p < values_.size(); ++p) counts[set_->positions_[p]] = values_[p];
  current_.emplace(set_->rows_, set_->cols_, std::move(counts));
}

bool TableSet::Cursor::next() {
  if (done_) return false;
  if (values_.empty()) {
    done_ = true;
    return false;
  }
  if (!started_) {
    started_ = true;
    fill_from(0);
    publish();
    return true;
  }
  for (std::size_t p = values_.size(); p-- > 0;) {
    const Count v = values_[p];
    apply(p, -v);
    Count lo = 0, hi = 0;
    bounds(p, lo, hi);
    if (v < hi) {
      apply(p, v + 1);
      fill_from(p + 1);
      publish();
      return true;
    }
  }
  done_ = true;
  return false;
}

TableSet enumerate_domain(Count total, std::size_t rows, std::size_t cols, EnumerationBudget budget) {
  return TableSet::over_cells(total, rows, cols, {}, budget);
}

TableSet enumerate_fixed_margins(std::span<const Count> row_margins, std::span<const Count> col_margins,
                                 EnumerationBudget budget) {
  return TableSet::with_margins({row_margins.begin(), row_margins.end()},
                                {col_margins.begin(), col_margins.end()}, budget);
}

}  // namespace adjsim
