#include "adjsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "adjsim/errors.hpp"

namespace adjsim {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r\n") == std::string::npos; }

std::string cell_ref(std::size_t row, std::size_t col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

ContingencyTable parse_table_csv(std::istream& in, bool header) {
  std::vector<std::vector<Count>> rows;
  std::string line;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    const std::size_t r = rows.size() + 1;
    std::vector<Count> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      Count value = 0;
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc{} || end != f.data() + f.size()) {
        throw InputError("cell " + cell_ref(r, c + 1) + ": '" + f + "' is not an integer count");
      }
      if (value < 0) throw InputError("cell " + cell_ref(r, c + 1) + ": negative count " + f);
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("row " + std::to_string(r) + " has " + std::to_string(row.size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("table CSV has no data rows");
  return ContingencyTable::from_rows(rows);
}

ContingencyTable parse_labels_csv(std::istream& in, bool header, LabelShape shape) {
  std::vector<std::string> x, y;
  std::string line;
  bool skipped_header = !header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw InputError("labels CSV line " + std::to_string(line_no) + ": expected 2 columns (x,y), got " +
                       std::to_string(fields.size()));
    }
    x.push_back(std::move(fields[0]));
    y.push_back(std::move(fields[1]));
  }
  return table_from_labels(x, y, shape);
}

ContingencyTable read_table_file(const std::string& path, InputFormat format, bool header, LabelShape shape) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return format == InputFormat::table ? parse_table_csv(in, header) : parse_labels_csv(in, header, shape);
}

Json to_json(const ContingencyTable& t) {
  Json j;
  j["counts"] = t.to_rows();
  if (!t.row_labels().empty()) {
    j["row_labels"] = t.row_labels();
    j["col_labels"] = t.col_labels();
  }
  return j;
}

template <class Real>
Json to_json(const EstimateResult<Real>& e) {
  Json j;
  j["value"] = to_double(e.value);
  j["method"] = std::string(method_name(e.method));
  j["stderr"] = e.mc_std_error ? Json(*e.mc_std_error) : Json(nullptr);
  if (e.samples) j["samples"] = *e.samples;
  if (e.seed) j["seed"] = *e.seed;
  if constexpr (is_exact_v<Real>) j["exact"] = format_scalar(e.value);
  return j;
}

template <class Real>
Json to_json(const AdjustmentResult<Real>& r) {
  Json j;
  j["index"] = r.index_id;
  j["model"] = r.model_id;
  j["max_spec"] = r.max_spec;
  j["raw"] = to_double(r.raw);
  j["expected"] = to_json(r.expected);
  j["max"] = to_double(r.max_value);
  j["max_method"] = r.max_method;
  j["adjusted"] = to_double(r.adjusted);
  j["degenerate"] = r.degenerate;
  j["convention_c"] = to_double(r.convention_c);
  j["seed"] = r.expected.seed ? Json(*r.expected.seed) : Json(nullptr);
  if (r.null_variance) j["null_variance"] = to_json(*r.null_variance);
  if constexpr (is_exact_v<Real>) {
    j["exact"] = {{"raw", format_scalar(r.raw)},
                  {"expected", format_scalar(r.expected.value)},
                  {"max", format_scalar(r.max_value)},
                  {"adjusted", format_scalar(r.adjusted)},
                  {"convention_c", format_scalar(r.convention_c)}};
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

namespace {

Json quantities_json(const std::vector<Quantity>& qs) {
  Json j = Json::object();
  for (const auto& q : qs) {
    j[q.name] = q.value;
    if (!q.exact.empty()) j[q.name + "_exact"] = q.exact;
  }
  return j;
}

}  // namespace

Json to_json(const PropertyReport& r) {
  Json j;
  j["property"] = r.property;
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["exact"] = r.exact;
  j["tolerance"] = r.tolerance;
  j["checked"] = r.checked;
  j["summary"] = quantities_json(r.summary);
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) {
    Json wj;
    wj["table"] = w.table.to_rows();
    wj["values"] = quantities_json(w.values);
    witnesses.push_back(std::move(wj));
  }
  j["witnesses"] = std::move(witnesses);
  j["methods"] = r.methods;
  j["notes"] = r.notes;
  return j;
}

template <class Real>
Json to_json(const repro::CounterexampleRecord<Real>& r) {
  Json j;
  j["part"] = r.part;
  j["u1"] = r.u1;
  j["N"] = r.n;
  j["c"] = to_double(r.c);
  Json values = Json::object();
  Json exact = Json::object();
  auto put = [&](const char* name, const std::optional<Real>& v) {
    if (!v) return;
    values[name] = to_double(*v);
    if constexpr (is_exact_v<Real>) exact[name] = format_scalar(*v);
  };
  put("expectation", r.expectation);
  put("nested_expectation", r.nested_expectation);
  put("adjusted", r.adjusted);
  put("expected_adjusted", r.expected_adjusted);
  put("adjusted_max", r.adjusted_max);
  put("double_adjusted", r.double_adjusted);
  put("affine_residual", r.affine_residual);
  put("standardized", r.standardized);
  put("standardized_mean", r.standardized_mean);
  put("standardized_variance", r.standardized_variance);
  j["values"] = std::move(values);
  if constexpr (is_exact_v<Real>) j["exact"] = std::move(exact);
  j["violated"] = r.violated;
  j["method"] = "closed_form";
  return j;
}

template Json to_json(const EstimateResult<double>&);
template Json to_json(const EstimateResult<Rational>&);
template Json to_json(const AdjustmentResult<double>&);
template Json to_json(const AdjustmentResult<Rational>&);
template Json to_json(const repro::CounterexampleRecord<double>&);
template Json to_json(const repro::CounterexampleRecord<Rational>&);

}  // namespace adjsim
