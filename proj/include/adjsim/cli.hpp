#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adjsim/enumerate.hpp"
#include "adjsim/scalar.hpp"

namespace adjsim::cli {

struct RunConfig {
  std::string command;  // compute, adjust, expect, check, repro
  std::string target;   // repro: prop1, figure1, asymptotic

  std::optional<std::string> table_path;
  std::optional<std::string> labels_path;
  bool header = false;
  std::optional<Count> u1;  // with n: the 2x1 table [[u1],[n-u1]]
  std::optional<Count> n;

  std::string measure;
  std::string index = "p";
  std::string model = "perm";
  std::string max = "domain";
  std::optional<double> max_value;
  bool max_fallback = false;
  std::string convention = "0";

  std::string method = "auto";
  std::uint64_t samples = 100'000;
  std::optional<std::uint64_t> seed;
  unsigned streams = 1;
  std::uint64_t budget = EnumerationBudget{}.max_tables;

  std::string format = "json";  // json | csv
  bool rational = false;

  bool variance = false;
  std::string property;
  std::string second_max = "derived";
  double tolerance = 1e-9;

  int part = 0;
  Count n_max = 100;
  std::vector<double> c_values{0.0, 1.0, -1.0};
  std::optional<std::string> out_path;
  std::optional<std::string> plot_script_path;
  Count j = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitResource = 3;

// Executes a validated config. Reports go to out, one-line diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (argv[0] is the program name) into a RunConfig and runs it.
// Usage errors exit 2; --help exits 0.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adjsim::cli
