#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "adjsim/table.hpp"

namespace adjsim {

struct EnumerationBudget {
  std::uint64_t max_tables = 5'000'000;
};

// Lazily enumerable collection of contingency tables sharing a shape and a
// total. Either every table over a set of admissible cells (the domain, or a
// model support that forces some cells empty) or every table with fixed
// margins. Each cursor restarts the enumeration from the beginning.
class TableSet {
 public:
  class Cursor {
   public:
    // Advances to the next table. Returns false once the set is exhausted.
    // Throws ResourceError when more tables than the budget would be yielded.
    bool next();
    const ContingencyTable& current() const { return *current_; }

   private:
    friend class TableSet;
    explicit Cursor(std::shared_ptr<const TableSet> set);

    void bounds(std::size_t p, Count& lo, Count& hi) const;
    void apply(std::size_t p, Count delta);
    void fill_from(std::size_t p);
    void publish();

    std::shared_ptr<const TableSet> set_;
    std::vector<Count> values_;
    std::vector<Count> row_used_;
    std::vector<Count> col_used_;
    Count used_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::uint64_t yielded_ = 0;
    std::optional<ContingencyTable> current_;
  };

  Cursor cursor() const { return Cursor(self_); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    Cursor c = cursor();
    while (c.next()) fn(c.current());
  }

  std::vector<ContingencyTable> collect() const;

  // Number of tables; closed form for cell sets, counted for fixed margins.
  std::uint64_t size() const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count total() const { return total_; }
  const std::string& constraint() const { return constraint_; }
  const EnumerationBudget& budget() const { return budget_; }

  // Tables on rows x cols summing to total, restricted to the admissible
  // cells (row-major mask; empty mask = all cells).
  static TableSet over_cells(Count total, std::size_t rows, std::size_t cols, std::vector<bool> mask,
                             EnumerationBudget budget);
  static TableSet with_margins(std::vector<Count> row_margins, std::vector<Count> col_margins,
                               EnumerationBudget budget);

 private:
  enum class Kind { cells, margins };
  TableSet() = default;

  Kind kind_ = Kind::cells;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Count total_ = 0;
  std::vector<std::size_t> positions_;  // admissible cells, row-major
  std::vector<Count> row_margins_;
  std::vector<Count> col_margins_;
  EnumerationBudget budget_;
  std::string constraint_;
  std::shared_ptr<const TableSet> self_;
};

// Number of rows x cols tables summing to total: C(total + k - 1, k - 1).
// Saturates at UINT64_MAX.
std::uint64_t domain_size(Count total, std::size_t cells);

// Every nonnegative rows x cols matrix summing to total.
TableSet enumerate_domain(Count total, std::size_t rows, std::size_t cols, EnumerationBudget budget = {});

// Every nonnegative table with the given row and column sums.
TableSet enumerate_fixed_margins(std::span<const Count> row_margins, std::span<const Count> col_margins,
                                 EnumerationBudget budget = {});

}  // namespace adjsim
