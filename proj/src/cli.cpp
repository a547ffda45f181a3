#include "adjsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "adjsim/errors.hpp"
#include "adjsim/io.hpp"

namespace adjsim::cli {

namespace {

// "1/2", "-3", "0.25", "1e-3". Decimal literals are read exactly in rational
// mode so that --convention 0.1 means 1/10.
template <class Real>
Real parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<Real>) {
    try {
      if (text.find('/') != std::string::npos) return Rational(text);
      const auto e = text.find_first_of("eE");
      std::string mantissa = text.substr(0, e);
      long exponent = e == std::string::npos ? 0 : std::stol(text.substr(e + 1));
      const auto dot = mantissa.find('.');
      if (dot != std::string::npos) {
        exponent -= static_cast<long>(mantissa.size() - dot - 1);
        mantissa.erase(dot, 1);
      }
      if (mantissa.empty() || mantissa == "-" || mantissa == "+") throw std::invalid_argument(text);
      if (mantissa.front() == '+') mantissa.erase(0, 1);
      Rational value{BigInt(mantissa)};
      BigInt scale = 1;
      for (long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) scale *= 10;
      return exponent < 0 ? Rational(value / Rational(scale)) : Rational(value * Rational(scale));
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + text + "' as a number (use a/b, an integer or a decimal)");
    }
  } else {
    try {
      std::size_t used = 0;
      if (const auto slash = text.find('/'); slash != std::string::npos) {
        return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
      }
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + text + "' as a number (use a/b, an integer or a decimal)");
    }
  }
}

EngineConfig engine_config(const RunConfig& c) {
  EngineConfig e;
  e.method = method_from_id(c.method);
  e.mc.samples = c.samples;
  e.mc.seed = c.seed;
  e.mc.streams = c.streams;
  e.budget.max_tables = c.budget;
  if (e.method == Method::monte_carlo && !c.seed) throw InputError("--method monte_carlo needs an explicit --seed");
  return e;
}

ContingencyTable input_table(const RunConfig& c) {
  const int sources = int(c.table_path.has_value()) + int(c.labels_path.has_value()) + int(c.u1 || c.n);
  if (sources != 1) throw InputError("give exactly one input: --table FILE, --labels FILE, or --u1 U --n N");
  if (c.table_path) return read_table_file(*c.table_path, InputFormat::table, c.header);
  if (c.labels_path) return read_table_file(*c.labels_path, InputFormat::labels, c.header);
  if (!c.u1 || !c.n) throw InputError("--u1 and --n must be given together");
  if (*c.n < 1 || *c.u1 < 0 || *c.u1 > *c.n) throw InputError("--u1 must satisfy 0 <= u1 <= n with n >= 1");
  return ContingencyTable::from_rows({{*c.u1}, {*c.n - *c.u1}});
}

MaxSpec max_spec(const RunConfig& c) {
  MaxSpec spec = max_spec_from_id(c.max, c.max_value);
  spec.monte_carlo_fallback = c.max_fallback;
  return spec;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string csv_number(double x) { return format_scalar(x); }

template <class Real>
std::string csv_value(const Real& x) {
  return format_scalar(x);
}

void require_json(const RunConfig& c, std::string_view what) {
  if (c.format != "json") throw InputError(std::string(what) + " supports --format json only");
}

template <class Real>
void emit_adjustment(const RunConfig& c, std::ostream& out, const AdjustmentResult<Real>& r,
                     const std::optional<std::string>& measure) {
  if (c.format == "csv") {
    out << (measure ? "measure," : "")
        << "index,model,max_spec,raw,expected,expected_method,max,max_method,adjusted,degenerate,convention_c\n";
    if (measure) out << *measure << ',';
    out << r.index_id << ',' << r.model_id << ',' << r.max_spec << ',' << csv_value(r.raw) << ','
        << csv_value(r.expected.value) << ',' << method_name(r.expected.method) << ',' << csv_value(r.max_value)
        << ',' << r.max_method << ',' << csv_value(r.adjusted) << ',' << (r.degenerate ? "true" : "false") << ','
        << csv_value(r.convention_c) << '\n';
    return;
  }
  Json j;
  if (measure) j["measure"] = *measure;
  j.update(to_json(r));
  j["mode"] = is_exact_v<Real> ? "rational" : "double";
  emit(out, j);
}

template <class Real>
int run_compute(const RunConfig& c, std::ostream& out) {
  if (c.measure.empty()) throw InputError("compute needs --measure (see --help for identifiers)");
  const Measure m = measure_from_id(c.measure);
  const auto t = input_table(c);
  const auto r = named_measure<Real>(m, t, parse_scalar<Real>(c.convention), engine_config(c));
  emit_adjustment(c, out, r, std::string(measure_id(m)));
  return kExitOk;
}

template <class Real>
int run_adjust(const RunConfig& c, std::ostream& out) {
  const auto t = input_table(c);
  const auto s = index_by_id<Real>(c.index);
  const auto r = adjust<Real>(s, model_from_id(c.model), max_spec(c), t, parse_scalar<Real>(c.convention),
                              engine_config(c));
  emit_adjustment(c, out, r, std::nullopt);
  return kExitOk;
}

template <class Real>
int run_expect(const RunConfig& c, std::ostream& out) {
  const auto t = input_table(c);
  const auto s = index_by_id<Real>(c.index);
  const auto model = model_from_id(c.model);
  const auto config = engine_config(c);
  const auto e = expectation<Real>(model, t, s, config);
  std::optional<EstimateResult<Real>> v;
  if (c.variance) v = variance<Real>(model, t, s, config);
  if (c.format == "csv") {
    out << "index,model,quantity,value,method,stderr,seed\n";
    auto row = [&](const char* name, const EstimateResult<Real>& r) {
      out << s.id << ',' << model.id() << ',' << name << ',' << csv_value(r.value) << ',' << method_name(r.method)
          << ',' << (r.mc_std_error ? csv_number(*r.mc_std_error) : "") << ','
          << (r.seed ? std::to_string(*r.seed) : "") << '\n';
    };
    row("expectation", e);
    if (v) row("variance", *v);
    return kExitOk;
  }
  Json j;
  j["index"] = s.id;
  j["model"] = std::string(model.id());
  j["table"] = t.to_rows();
  j["expected"] = to_json(e);
  if (v) j["variance"] = to_json(*v);
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["mode"] = is_exact_v<Real> ? "rational" : "double";
  emit(out, j);
  return kExitOk;
}

template <class Real>
int run_check(const RunConfig& c, std::ostream& out) {
  require_json(c, "check");
  if (c.property.empty()) throw InputError("check needs --property (see --help for identifiers)");
  const auto t = input_table(c);
  const auto model = model_from_id(c.model);
  const Real conv = parse_scalar<Real>(c.convention);
  CheckConfig cc;
  cc.engine = engine_config(c);
  cc.tolerance = c.tolerance;

  PropertyReport report;
  const std::string& p = c.property;
  if (p == "linear-equiv" || p == "linear_equiv") {
    if (c.index != "rand") {
      throw InputError("linear-equiv is available for --index rand (as a linear member of q_joint)");
    }
    report = check_linear_equivalence<Real>(rand_as_linear_member<Real>(), model, max_spec(c), t, conv, cc);
  } else {
    const auto s = index_by_id<Real>(c.index);
    if (p == "constancy") {
      report = check_constancy<Real>(s, model, max_spec(c), t, cc);
    } else if (p == "mean-zero" || p == "mean_zero") {
      report = check_mean_zero<Real>(s, model, max_spec(c), t, conv, cc);
    } else if (p == "variance-one" || p == "variance_one") {
      report = check_variance_one<Real>(s, model, t, conv, cc);
    } else if (p == "idempotent" || p == "idempotency") {
      report = check_idempotency<Real>(s, model, max_spec(c), second_max_from_id(c.second_max), t, conv, cc);
    } else if (p == "nested-collapse" || p == "nested_collapse") {
      report = check_nested_collapse<Real>(s, model, t, cc);
    } else {
      throw InputError("unknown property '" + p +
                       "' (constancy, mean-zero, variance-one, idempotent, nested-collapse, linear-equiv)");
    }
  }
  Json j = to_json(report);
  j["index"] = c.index;
  j["model"] = std::string(model.id());
  j["table"] = t.to_rows();
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  emit(out, j);
  return kExitOk;
}

template <class Real>
int run_prop1(const RunConfig& c, std::ostream& out) {
  require_json(c, "repro prop1");
  if (!c.u1 || !c.n) throw InputError("repro prop1 needs --u1 and --n");
  const auto r = repro::prop1_record<Real>(c.part, *c.u1, *c.n, parse_scalar<Real>(c.convention));
  Json j = to_json(r);
  j["mode"] = is_exact_v<Real> ? "rational" : "double";
  emit(out, j);
  return kExitOk;
}

int run_figure1(const RunConfig& c, std::ostream& out) {
  const auto cells = repro::figure1_grid(c.n_max, c.c_values);
  if (!c.out_path) {
    repro::write_grid_csv(out, cells);
    return kExitOk;
  }
  {
    std::ofstream f(*c.out_path);
    if (!f) throw InputError("cannot open '" + *c.out_path + "' for writing");
    repro::write_grid_csv(f, cells);
  }
  if (c.plot_script_path) {
    std::ofstream f(*c.plot_script_path);
    if (!f) throw InputError("cannot open '" + *c.plot_script_path + "' for writing");
    f << repro::plot_script(*c.out_path);
  }
  std::size_t underflow = 0;
  for (const auto& cell : cells) underflow += cell.underflow;
  Json j;
  j["cells"] = cells.size();
  j["n_max"] = c.n_max;
  j["c"] = c.c_values;
  j["underflow_cells"] = underflow;
  j["out"] = *c.out_path;
  if (c.plot_script_path) j["plot_script"] = *c.plot_script_path;
  j["method"] = "closed_form";
  emit(out, j);
  return kExitOk;
}

int run_asymptotic(const RunConfig& c, std::ostream& out) {
  require_json(c, "repro asymptotic");
  if (!c.n) throw InputError("repro asymptotic needs --n");
  const double conv = parse_scalar<double>(c.convention);
  const auto r = repro::asymptotic_check(c.j, conv, *c.n);
  Json j;
  j["j"] = c.j;
  j["c"] = conv;
  j["N"] = *c.n;
  j["u1"] = *c.n - c.j;
  j["adjusted"] = r.adjusted;
  j["double_adjusted"] = r.double_adjusted;
  j["ratio"] = r.ratio;
  j["limit"] = r.limit;
  j["relative_gap"] = r.limit != 0.0 ? Json(std::abs(r.ratio - r.limit) / std::abs(r.limit)) : Json(nullptr);
  j["method"] = "closed_form";
  emit(out, j);
  return kExitOk;
}

template <class Real>
int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "compute") return run_compute<Real>(c, out);
  if (c.command == "adjust") return run_adjust<Real>(c, out);
  if (c.command == "expect") return run_expect<Real>(c, out);
  if (c.command == "check") return run_check<Real>(c, out);
  if (c.command == "repro") {
    if (c.target == "prop1") return run_prop1<Real>(c, out);
    if (c.target == "figure1") return run_figure1(c, out);
    if (c.target == "asymptotic") return run_asymptotic(c, out);
    throw InputError("unknown repro target '" + c.target + "' (prop1, figure1, asymptotic)");
  }
  throw InputError("unknown command '" + c.command + "' (compute, adjust, expect, check, repro)");
}

std::string identifier_list() {
  std::ostringstream os;
  os << "\nIndices (--index):\n";
  for (auto id : kIndexIds) os << "  " << id << "  " << describe_index(id) << '\n';
  os << "\nNull models (--model):\n";
  for (auto id : kModelIds) os << "  " << id << "  " << describe_model(id) << '\n';
  os << "\nMeasures (--measure):\n";
  for (auto id : kMeasureIds) os << "  " << id << "  " << describe_measure(id) << '\n';
  os << "\nMaxima (--max):\n"
        "  domain       max of S over all tables with the observed shape and total\n"
        "  model        max of S over the support of the null distribution\n"
        "  pair_mean    (q(u) + q(v)) / 2\n"
        "  pair_min     min(q(u), q(v))\n"
        "  standardize  E[S] + sd(S) under the null\n"
        "  fixed        constant from --max-value\n";
  os << "\nMethods (--method): auto, closed_form, enumeration, monte_carlo\n";
  return os.str();
}

void add_input_options(CLI::App* app, RunConfig& c) {
  app->add_option("--table", c.table_path, "CSV of I rows x J columns of counts");
  app->add_option("--labels", c.labels_path, "CSV of x,y label pairs, one observation per row");
  app->add_flag("--header", c.header, "skip the first CSV line");
  app->add_option("--u1", c.u1, "shortcut input: the 2x1 table [[u1],[n-u1]]");
  app->add_option("--n", c.n, "total for the --u1 shortcut");
}

void add_engine_options(CLI::App* app, RunConfig& c) {
  app->add_option("--convention,-c,--c", c.convention, "value of the adjusted index when max = E (default 0)");
  app->add_option("--method", c.method, "auto | closed_form | enumeration | monte_carlo");
  app->add_option("--samples", c.samples, "Monte Carlo draws (default 100000)");
  app->add_option("--seed", c.seed, "Monte Carlo seed; required whenever sampling is used");
  app->add_option("--streams", c.streams, "independent Monte Carlo streams (threads)")->check(CLI::PositiveNumber);
  app->add_option("--budget", c.budget, "maximum tables visited by enumeration (default 5000000)");
  app->add_flag("--rational", c.rational, "exact rational arithmetic");
  app->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_index_options(CLI::App* app, RunConfig& c) {
  app->add_option("--index", c.index, "index identifier");
  app->add_option("--model", c.model, "null model identifier");
  app->add_option("--max", c.max, "maximum rule");
  app->add_option("--max-value", c.max_value, "constant for --max fixed");
  app->add_flag("--max-fallback", c.max_fallback,
                "use the largest sampled value when an enumerated maximum is over budget (needs --seed)");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return config.rational ? dispatch<Rational>(config, out) : dispatch<double>(config, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Chance-adjusted similarity indices for contingency tables", "adjsim"};
  app.require_subcommand(1);
  app.footer(identifier_list());

  auto* compute = app.add_subcommand("compute", "adjusted value of a named measure");
  compute->add_option("--measure", c.measure, "measure identifier")->required();
  add_input_options(compute, c);
  add_engine_options(compute, c);

  auto* adj = app.add_subcommand("adjust", "adjust an index under a null model and maximum rule");
  add_index_options(adj, c);
  add_input_options(adj, c);
  add_engine_options(adj, c);

  auto* expect = app.add_subcommand("expect", "null expectation (and variance) of an index");
  add_index_options(expect, c);
  add_input_options(expect, c);
  add_engine_options(expect, c);
  expect->add_flag("--variance", c.variance, "also report the null variance");

  auto* check = app.add_subcommand("check", "verify an adjustment property and report witnesses");
  add_index_options(check, c);
  add_input_options(check, c);
  add_engine_options(check, c);
  check
      ->add_option("--property", c.property,
                   "constancy | mean-zero | variance-one | idempotent | nested-collapse | linear-equiv")
      ->required();
  check->add_option("--second-max", c.second_max,
                    "maximum of AS for the second adjustment: derived (1, or c when degenerate) | domain");
  check->add_option("--tolerance", c.tolerance, "absolute tolerance in double mode (default 1e-9)");

  auto* repro = app.add_subcommand("repro", "counterexample values, idempotency-gap grid, asymptotics");
  repro->require_subcommand(1);
  auto* prop1 = repro->add_subcommand("prop1", "one part (1-5) of the u1 / u1^2 counterexample");
  prop1->add_option("--part", c.part, "1 nested expectation, 2 affine fit, 3 E[AS], 4 A^2S, 5 standardized")
      ->required();
  prop1->add_option("--u1", c.u1, "u1")->required();
  prop1->add_option("--n", c.n, "N")->required();
  prop1->add_option("--convention,--c,-c", c.convention, "degenerate convention c");
  prop1->add_flag("--rational", c.rational, "exact rational arithmetic");
  prop1->add_option("--format", c.format, "json")->check(CLI::IsMember({"json"}));

  auto* fig = repro->add_subcommand("figure1", "grid of -log10|AS - A^2S| over (c, N, u1) as CSV");
  fig->add_option("--n-max", c.n_max, "largest N (default 100)")->check(CLI::Range(Count{2}, Count{100000}));
  fig->add_option("--c", c.c_values, "comma-separated conventions (default 0,1,-1)")->delimiter(',');
  fig->add_option("--out", c.out_path, "CSV path; stdout when omitted");
  fig->add_option("--plot-script", c.plot_script_path, "also write a matplotlib script reading --out");

  auto* asym = repro->add_subcommand("asymptotic", "(1/N) A^2S / AS at u1 = N - j against its limit");
  asym->add_option("--j", c.j, "j >= 1")->required();
  asym->add_option("--convention,--c,-c", c.convention, "nonzero convention c")->required();
  asym->add_option("--n", c.n, "N > j")->required();

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (auto* sub : {compute, adj, expect, check, repro}) {
    if (sub->parsed()) c.command = sub->get_name();
  }
  for (auto* sub : {prop1, fig, asym}) {
    if (sub->parsed()) c.target = sub->get_name();
  }
  return run(c, out, err);
}

}  // namespace adjsim::cli
