#include "adjsim/table.hpp"

#include <map>
#include <sstream>

#include "adjsim/combinatorics.hpp"
#include "adjsim/errors.hpp"

namespace adjsim {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts)
    : rows_(rows), cols_(cols), counts_(std::move(counts)), row_margins_(rows, 0),
      col_margins_(cols, 0) {
  if (rows_ == 0 || cols_ == 0) throw InputError("contingency table needs at least one row and column");
  if (counts_.size() != rows_ * cols_) {
    throw InputError("contingency table expects " + std::to_string(rows_ * cols_) + " cells, got " +
                     std::to_string(counts_.size()));
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Count c = counts_[i * cols_ + j];
      if (c < 0) {
        throw InputError("negative count at cell (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      }
      row_margins_[i] += c;
      col_margins_[j] += c;
      total_ += c;
    }
  }
  if (total_ < 1) throw InputError("contingency table total must be positive");
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<Count>>& rows) {
  if (rows.empty()) throw InputError("contingency table needs at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<Count> counts;
  counts.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw InputError("ragged table: row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " columns, expected " + std::to_string(cols));
    }
    counts.insert(counts.end(), rows[i].begin(), rows[i].end());
  }
  return ContingencyTable(rows.size(), cols, std::move(counts));
}

ContingencyTable ContingencyTable::from_rows(std::initializer_list<std::initializer_list<Count>> rows) {
  std::vector<std::vector<Count>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

ContingencyTable ContingencyTable::with_labels(std::vector<std::string> row_labels,
                                               std::vector<std::string> col_labels) const {
  if (row_labels.size() != rows_ || col_labels.size() != cols_) {
    throw InputError("label count does not match table shape");
  }
  ContingencyTable out = *this;
  out.row_labels_ = std::move(row_labels);
  out.col_labels_ = std::move(col_labels);
  return out;
}

std::string ContingencyTable::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::vector<std::vector<Count>> ContingencyTable::to_rows() const {
  std::vector<std::vector<Count>> out(rows_, std::vector<Count>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

namespace {

struct LabelCodes {
  std::vector<std::size_t> codes;
  std::vector<std::string> labels;
};

LabelCodes encode(std::span<const std::string> values) {
  LabelCodes out;
  std::map<std::string, std::size_t> index;
  out.codes.reserve(values.size());
  for (const auto& v : values) {
    auto [it, inserted] = index.try_emplace(v, out.labels.size());
    if (inserted) out.labels.push_back(v);
    out.codes.push_back(it->second);
  }
  return out;
}

std::size_t resolve_extent(std::optional<std::size_t> declared, std::vector<std::string>& labels,
                           const char* axis) {
  if (!declared) return labels.size();
  if (*declared < labels.size()) {
    throw InputError(std::string("declared ") + axis + " count " + std::to_string(*declared) +
                     " is smaller than the " + std::to_string(labels.size()) + " observed categories");
  }
  while (labels.size() < *declared) labels.push_back("");
  return *declared;
}

}  // namespace

ContingencyTable table_from_labels(std::span<const std::string> x, std::span<const std::string> y,
                                   LabelShape shape) {
  if (x.size() != y.size()) {
    throw InputError("label sequences differ in length (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  if (x.empty()) throw InputError("label sequences are empty");
  LabelCodes xc = encode(x);
  LabelCodes yc = encode(y);
  const std::size_t rows = resolve_extent(shape.rows, xc.labels, "row");
  const std::size_t cols = resolve_extent(shape.cols, yc.labels, "column");
  std::vector<Count> counts(rows * cols, 0);
  for (std::size_t k = 0; k < xc.codes.size(); ++k) ++counts[xc.codes[k] * cols + yc.codes[k]];
  return ContingencyTable(rows, cols, std::move(counts)).with_labels(std::move(xc.labels),
                                                                     std::move(yc.labels));
}

PairTable pair_table(const ContingencyTable& t) {
  if (t.total() < 2) throw DomainError("pair table needs N >= 2 (got N = " + std::to_string(t.total()) + ")");
  Count joint = 0, row = 0, col = 0;
  for (Count c : t.cells()) joint += pairs(c);
  for (Count c : t.row_margins()) row += pairs(c);
  for (Count c : t.col_margins()) col += pairs(c);
  PairTable out;
  out.same_same = joint;
  out.same_diff = row - joint;
  out.diff_same = col - joint;
  out.diff_diff = pairs(t.total()) - row - col + joint;
  return out;
}

}  // namespace adjsim
