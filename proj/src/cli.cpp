#include "kfun/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kfun/dist.hpp"
#include "kfun/errors.hpp"
#include "kfun/identities.hpp"

namespace kfun {

namespace {

using json = nlohmann::ordered_json;

// Every named numeric parameter any subcommand can bind.
const std::vector<std::string> kParamNames = {"eta", "k", "s", "t", "v", "x", "y", "p",
                                              "q",   "r", "l", "n", "zeta", "xi", "u"};

std::string human(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Named parameters bound on the command line; each may be given once.
struct Bindings {
  std::map<std::string, double> value;
  std::map<std::string, CLI::Option*> option;

  void add_to(CLI::App* app, const std::vector<std::string>& names) {
    for (const auto& n : names) option[n] = app->add_option("--" + n, value[n]);
  }
  bool bound(const std::string& n) const {
    const auto it = option.find(n);
    return it != option.end() && it->second->count() > 0;
  }
  double get(const std::string& n) const { return value.at(n); }

  /// Exactly the names in `allowed` may be bound, and all of `required` must be.
  void expect(const std::string& what, const std::vector<std::string>& required,
              const std::vector<std::string>& allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [n, opt] : option) {
      if (opt->count() > 0 && !ok.count(n)) throw UsageError("--" + n + " is not a parameter of " + what);
    }
    for (const auto& n : required) {
      if (!bound(n)) throw UsageError(what + " needs --" + n);
    }
  }
};

struct Outcome {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::string method;
};

Outcome from(const EvalResult& r) { return {r.value, r.error_estimate, r.converged, "quadrature"}; }

std::string_view method_name(SeriesMethod m) {
  switch (m) {
    case SeriesMethod::Double:
      return "series (double)";
    case SeriesMethod::Extended:
      return "series (quad precision)";
    case SeriesMethod::Multiprecision:
      return "series (multiprecision)";
    case SeriesMethod::Asymptotic:
      return "large-argument expansion";
  }
  return "series";
}

struct EvalSpec {
  std::vector<std::string> required;
  bool kernel = true;  // takes k, p, q, r and --mode
};

const std::map<std::string, EvalSpec>& eval_functions() {
  static const std::map<std::string, EvalSpec> fns = {
      {"k_gamma", {{"eta", "k"}, false}},
      {"k_beta", {{"s", "t", "k"}, false}},
      {"mittag_leffler_k", {{"x", "k", "p", "q", "r"}}},
      {"extended_gamma_k", {{"s", "k", "p", "q", "r"}}},
      {"extended_beta_k", {{"s", "t", "v", "k", "p", "q", "r"}}},
      {"incomplete_extended_beta_k", {{"y", "s", "t", "v", "k", "p", "q", "r"}}},
      {"eval_representation", {{"s", "t", "v", "k", "p", "q", "r"}}},
  };
  return fns;
}

// Settings shared by eval and table.
struct EvalOptions {
  std::string fn;
  std::string mode = "classical";
  std::string repr;
  bool printed = false;
  double rel_tol = QuadConfig{}.rel_tol;
  double abs_tol = QuadConfig{}.abs_tol;
  double series_tol = SeriesConfig{}.rel_tol;
  std::string format = "text";
};

void add_eval_options(CLI::App* app, EvalOptions& o, Bindings& b) {
  app->add_option("--fn", o.fn, "function to evaluate")->required();
  app->add_option("--mode", o.mode, "denominator gamma: classical|kdeformed")->capture_default_str();
  app->add_option("--repr", o.repr, "representation name (eval_representation)");
  app->add_flag("--printed", o.printed, "evaluate the representation as printed instead of corrected");
  app->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance")->capture_default_str();
  app->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance")->capture_default_str();
  app->add_option("--series-tol", o.series_tol, "Mittag-Leffler series relative tolerance")->capture_default_str();
  b.add_to(app, kParamNames);
}

// Payload keys of each representation.
std::vector<std::string> repr_keys(const std::string& name) {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"Direct", {}},
      {"Trig", {}},
      {"Power", {"n"}},
      {"ScaledInterval", {"eta"}},
      {"RationalMap", {"eta"}},
      {"HalfLine", {}},
      {"SymmetrizedHalfLine", {}},
      {"ScaledHalfLine", {"eta", "zeta"}},
      {"TanSquared", {"eta", "zeta"}},
      {"TwoParameter", {"eta", "zeta"}},
      {"ShiftedTwoParameter", {"zeta", "xi"}},
      {"Interval", {"eta", "zeta"}},
      {"SymmetricInterval", {}},
  };
  const auto it = keys.find(name);
  if (it == keys.end()) throw UsageError("unknown representation '" + name + "'");
  return it->second;
}

// Parameters o.fn needs, representation payload included.
std::vector<std::string> function_params(const EvalOptions& o) {
  const auto it = eval_functions().find(o.fn);
  if (it == eval_functions().end()) {
    std::string names;
    for (const auto& [n, spec] : eval_functions()) names += (names.empty() ? "" : ", ") + n;
    throw UsageError("unknown function '" + o.fn + "' (one of: " + names + ")");
  }
  std::vector<std::string> params = it->second.required;
  if (o.fn == "eval_representation") {
    if (o.repr.empty()) throw UsageError("eval_representation needs --repr");
    for (const auto& key : repr_keys(o.repr)) params.push_back(key);
  } else if (!o.repr.empty() || o.printed) {
    throw UsageError("--repr/--printed only apply to eval_representation");
  }
  if (!it->second.kernel && o.mode != "classical") throw UsageError("--mode does not apply to " + o.fn);
  parse_gamma_mode(o.mode);
  return params;
}

// Checks the bindings for o.fn; `free` names a parameter supplied by the caller
// (the table variable) instead of the command line.
void validate_eval(const EvalOptions& o, const Bindings& b, const std::string& free = {}) {
  std::vector<std::string> params = function_params(o);
  if (!free.empty() && std::find(params.begin(), params.end(), free) == params.end()) {
    throw UsageError("--var " + free + " is not a parameter of " + o.fn);
  }
  std::erase(params, free);
  b.expect(o.fn, params, params);
}

Outcome evaluate(const EvalOptions& o, const std::map<std::string, double>& v) {
  QuadConfig q;
  q.rel_tol = o.rel_tol;
  q.abs_tol = o.abs_tol;
  q.validate();
  const auto at = [&](const char* n) { return v.at(n); };
  if (o.fn == "k_gamma") return {k_gamma(at("eta"), at("k")), 0.0, true, "closed form"};
  if (o.fn == "k_beta") return {k_beta(at("s"), at("t"), at("k")), 0.0, true, "closed form"};

  const MLParams P(at("k"), at("p"), at("q"), at("r"), parse_gamma_mode(o.mode));
  if (o.fn == "mittag_leffler_k") {
    SeriesConfig cfg;
    cfg.rel_tol = o.series_tol;
    const SeriesResult r = mittag_leffler_k(at("x"), P, cfg);
    return {r.value, r.error_estimate, true, std::string(method_name(r.method))};
  }
  if (o.fn == "extended_gamma_k") return from(extended_gamma_k({at("s")}, P, q));
  const ExtBetaArgs a{at("s"), at("t"), at("v")};
  if (o.fn == "extended_beta_k") return from(extended_beta_k(a, P, q));
  if (o.fn == "incomplete_extended_beta_k") return from(incomplete_extended_beta_k(at("y"), a, P, q));

  std::map<std::string, double> payload;
  for (const auto& key : repr_keys(o.repr)) payload[key] = at(key.c_str());
  const Representation rep = make_representation(o.repr, payload);
  return from(o.printed ? paper_literal_representation(rep, a, P, q) : eval_representation(rep, a, P, q));
}

std::map<std::string, double> bound_values(const Bindings& b) {
  std::map<std::string, double> v;
  for (const auto& n : kParamNames)
    if (b.bound(n)) v[n] = b.get(n);
  return v;
}

json values_json(const std::map<std::string, double>& v) {
  json j = json::object();
  for (const auto& [n, x] : v) j[n] = x;
  return j;
}

int cmd_eval(const EvalOptions& o, const Bindings& b, std::ostream& out) {
  validate_eval(o, b);
  const auto values = bound_values(b);
  const Outcome r = evaluate(o, values);
  if (o.format == "json") {
    json j;
    j["function"] = o.fn;
    if (!o.repr.empty()) j["representation"] = o.repr;
    if (o.fn != "k_gamma" && o.fn != "k_beta") j["mode"] = o.mode;
    j["inputs"] = values_json(values);
    j["value"] = r.value;
    j["error_estimate"] = r.error;
    j["converged"] = r.converged;
    j["method"] = r.method;
    out << j.dump(2) << "\n";
  } else {
    out << "value          " << human(r.value) << "\n"
        << "error_estimate " << human(r.error) << "\n"
        << "converged      " << (r.converged ? "true" : "false") << "\n"
        << "method         " << r.method << "\n";
  }
  return r.converged ? kExitOk : kExitNotConverged;
}

struct TableOptions {
  std::string var;
  double from = 0.0;
  double to = 1.0;
  int steps = 10;
};

int cmd_table(const EvalOptions& o, const TableOptions& t, const Bindings& b, std::ostream& out) {
  if (t.steps < 1) throw UsageError("--steps must be at least 1");
  if (std::find(kParamNames.begin(), kParamNames.end(), t.var) == kParamNames.end()) {
    throw UsageError("unknown table variable '" + t.var + "'");
  }
  if (b.bound(t.var)) throw UsageError("--" + t.var + " is the table variable and cannot also be bound");
  validate_eval(o, b, t.var);
  auto values = bound_values(b);
  bool all = true;
  json rows = json::array();
  std::ostringstream csv;
  csv << t.var << ",value,error_estimate,converged,note\n";
  for (int i = 0; i <= t.steps; ++i) {
    const double x = t.from + (t.to - t.from) * i / t.steps;
    values[t.var] = x;
    Outcome r;
    std::string note;
    try {
      r = evaluate(o, values);
    } catch (const Error& e) {
      r = {std::nan(""), std::nan(""), false, ""};
      note = e.what();
    }
    all = all && r.converged;
    if (o.format == "json") {
      json row = {{t.var, x}, {"value", r.value}, {"error_estimate", r.error}, {"converged", r.converged}};
      if (!note.empty()) row["note"] = note;
      rows.push_back(row);
    } else {
      std::string quoted = note;
      for (char& c : quoted)
        if (c == '"') c = '\'';
      csv << full(x) << "," << full(r.value) << "," << full(r.error) << "," << (r.converged ? "true" : "false") << ","
          << (note.empty() ? "" : "\"" + quoted + "\"") << "\n";
    }
  }
  if (o.format == "json") {
    json j;
    j["function"] = o.fn;
    j["variable"] = t.var;
    j["fixed"] = values_json([&] {
      auto v = values;
      v.erase(t.var);
      return v;
    }());
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
  } else {
    out << csv.str();
  }
  return all ? kExitOk : kExitNotConverged;
}

json grid_json(const AuditGrid& g) {
  json modes = json::array();
  for (GammaMode m : g.modes) modes.push_back(std::string(to_string(m)));
  return {{"k", g.k},
          {"s", g.s},
          {"t", g.t},
          {"v", g.v},
          {"p", g.p},
          {"q", g.q},
          {"r", g.r},
          {"modes", modes},
          {"mellin_k", g.mellin_k},
          {"mellin_st", g.mellin_st},
          {"mellin_g", g.mellin_g},
          {"gamma_s", g.gamma_s},
          {"representations", g.representations}};
}

json quad_json(const QuadConfig& q) {
  return {{"abs_tol", q.abs_tol},
          {"rel_tol", q.rel_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"semi_infinite_cutoff", q.semi_infinite_cutoff}};
}

int show_config(std::ostream& out) {
  const SeriesConfig s;
  json j;
  j["mode"] = "classical";
  j["series"] = {{"rel_tol", s.rel_tol},
                 {"max_terms", s.max_terms},
                 {"max_abs_argument", s.max_abs_argument},
                 {"extended_precision", s.extended_precision},
                 {"large_argument_expansion", s.large_argument_expansion}};
  j["quadrature"] = quad_json(QuadConfig{});
  j["dist_quadrature"] = quad_json(DistParams::default_quad());
  j["tolerances"] = {{"FunctionalRelation", 1e-9}, {"Symmetry", 1e-10},        {"Mellin", 1e-6},
                     {"Lemma", 1e-8},              {"ReprEquivalence", 1e-7}, {"ReprParameterInvariance", 1e-8},
                     {"Remark22", 1e-8},           {"Remark25", 1e-10}};
  j["grids"] = {{"default", grid_json(AuditGrid::default_grid())},
                {"smoke", grid_json(AuditGrid::smoke_grid())},
                {"empty", grid_json(AuditGrid::empty_grid())}};
  j["number_format"] = {{"human_significant_digits", 12}, {"json_round_trip", true}};
  j["exit_codes"] = {{"ok", 0}, {"usage_or_domain", 1}, {"not_converged", 2}, {"asserted_failure", 3}, {"io", 4}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

struct AuditCli {
  std::string grid = "default";
  std::string out;
  std::string format = "json";
  unsigned threads = 0;
  std::vector<std::string> axes;
  bool no_representations = false;
  double rel_tol = QuadConfig{}.rel_tol;
  double abs_tol = QuadConfig{}.abs_tol;
};

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> xs;
  if (text.empty()) return xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw UsageError("--axis " + key + ": '" + item + "' is not a number");
    xs.push_back(x);
  }
  return xs;
}

void apply_axis(AuditGrid& g, const std::string& binding) {
  const auto eq = binding.find('=');
  if (eq == std::string::npos) throw UsageError("--axis expects name=v1,v2,... (got '" + binding + "')");
  const std::string key = binding.substr(0, eq), list = binding.substr(eq + 1);
  if (key == "mode" || key == "modes") {
    g.modes.clear();
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) g.modes.push_back(parse_gamma_mode(item));
    return;
  }
  const std::map<std::string, std::vector<double>*> axes = {
      {"k", &g.k}, {"s", &g.s}, {"t", &g.t}, {"v", &g.v}, {"p", &g.p}, {"q", &g.q}, {"r", &g.r},
      {"mellin_k", &g.mellin_k}, {"mellin_st", &g.mellin_st}, {"mellin_g", &g.mellin_g}, {"gamma_s", &g.gamma_s}};
  const auto it = axes.find(key);
  if (it == axes.end()) throw UsageError("unknown grid axis '" + key + "'");
  *it->second = parse_list(key, list);
}

int cmd_audit(const AuditCli& a, std::ostream& out, std::ostream& err) {
  AuditGrid grid;
  if (a.grid == "default") {
    grid = AuditGrid::default_grid();
  } else if (a.grid == "smoke") {
    grid = AuditGrid::smoke_grid();
  } else if (a.grid == "empty") {
    grid = AuditGrid::empty_grid();
  } else {
    throw UsageError("unknown grid '" + a.grid + "' (default|smoke|empty)");
  }
  for (const auto& axis : a.axes) apply_axis(grid, axis);
  if (a.no_representations) grid.representations = false;
  if (a.format != "json" && a.format != "csv") throw UsageError("--format must be json or csv");
  AuditOptions options;
  options.qcfg.rel_tol = a.rel_tol;
  options.qcfg.abs_tol = a.abs_tol;
  options.threads = a.threads;

  // Open the destination first: an unwritable path fails before the run.
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open '" << a.out << "' for writing\n";
      return kExitIo;
    }
  }
  const AuditResult result = run_audit(grid, options);
  const std::string text = a.format == "json" ? audit_json(grid, options, result) : audit_csv(result);
  std::ostream& dest = a.out.empty() ? out : file;
  dest << text;
  dest.flush();
  if (!dest) {
    err << "error: writing the report failed\n";
    return kExitIo;
  }
  err << result.summary.total << " checks, " << result.summary.asserted_failures
      << " asserted identities did not hold\n";
  for (const auto& c : result.checks) {
    if (c.asserted && c.verdict != Verdict::Holds) err << "  " << c.label() << ": " << to_string(c.verdict) << "\n";
  }
  return result.summary.asserted_failures == 0 ? kExitOk : kExitAssertedFailure;
}

struct DistCli {
  std::string query;
  std::string mode = "classical";
  std::string format = "text";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int max_terms = 200;
};

int cmd_dist(const DistCli& d, const Bindings& b, CLI::App* sub, std::ostream& out) {
  static const std::vector<std::string> base = {"s", "t", "v", "l", "p", "q", "k"};
  static const std::map<std::string, std::vector<std::string>> extra = {
      {"pdf", {"x"}},  {"cdf", {"x"}},      {"moment", {"r"}},   {"mean", {}},
      {"variance", {}}, {"mgf", {"y"}},     {"quantile", {"u"}}, {"sample", {}}};
  const auto it = extra.find(d.query);
  if (it == extra.end()) {
    throw UsageError("unknown query '" + d.query + "' (pdf|cdf|moment|mean|variance|mgf|quantile|sample)");
  }
  std::vector<std::string> req = base;
  req.insert(req.end(), it->second.begin(), it->second.end());
  b.expect("dist --query " + d.query, req, req);
  const bool sampling = d.query == "sample";
  if (sampling && (sub->get_option("--n")->count() == 0 || sub->get_option("--seed")->count() == 0)) {
    throw UsageError("sample needs --n and --seed");
  }
  if (!sampling && (sub->get_option("--n")->count() > 0 || sub->get_option("--seed")->count() > 0)) {
    throw UsageError("--n/--seed only apply to sample");
  }
  const auto g = [&](const char* n) { return b.get(n); };
  const DistParams P(g("s"), g("t"), g("v"), g("l"), g("p"), g("q"), g("k"), parse_gamma_mode(d.mode));

  if (sampling) {
    const auto xs = sample(d.n, d.seed, P);
    if (d.format == "json") {
      out << json{{"query", "sample"}, {"n", d.n}, {"seed", d.seed}, {"values", xs}}.dump(2) << "\n";
    } else {
      for (double x : xs) out << human(x) << "\n";
    }
    return kExitOk;
  }
  double value = 0.0;
  if (d.query == "pdf") value = pdf(g("x"), P);
  if (d.query == "cdf") value = cdf(g("x"), P);
  if (d.query == "moment") value = moment(g("r"), P);
  if (d.query == "mean") value = mean(P);
  if (d.query == "variance") value = variance(P);
  if (d.query == "mgf") value = mgf(g("y"), P, d.max_terms);
  if (d.query == "quantile") value = quantile(g("u"), P);
  if (d.format == "json") {
    out << json{{"query", d.query}, {"inputs", values_json(bound_values(b))}, {"mode", d.mode}, {"value", value}}
               .dump(2)
        << "\n";
  } else {
    out << human(value) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended gamma and beta k-functions: evaluation, identity audit, distribution queries", "kfun"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::Throw);
  bool show = false;
  app.add_flag("--show-config", show, "print every default (tolerances, grids, mode) as JSON and exit");

  EvalOptions eval_opts;
  Bindings eval_bind;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one function");
  add_eval_options(eval, eval_opts, eval_bind);
  eval->add_option("--format", eval_opts.format, "text|json")->check(CLI::IsMember({"text", "json"}));

  EvalOptions table_opts;
  table_opts.format = "csv";
  Bindings table_bind;
  TableOptions table;
  CLI::App* tab = app.add_subcommand("table", "tabulate a function over one parameter");
  add_eval_options(tab, table_opts, table_bind);
  tab->add_option("--var", table.var, "parameter to vary")->required();
  tab->add_option("--from", table.from)->capture_default_str();
  tab->add_option("--to", table.to)->capture_default_str();
  tab->add_option("--steps", table.steps, "intervals (steps + 1 rows)")->capture_default_str();
  tab->add_option("--format", table_opts.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  AuditCli audit_opts;
  CLI::App* aud = app.add_subcommand("audit", "run the identity audit");
  aud->add_option("--grid", audit_opts.grid, "default|smoke|empty")->capture_default_str();
  aud->add_option("--out", audit_opts.out, "report path (standard output when absent)");
  aud->add_option("--format", audit_opts.format, "json|csv")->capture_default_str();
  aud->add_option("--threads", audit_opts.threads, "worker threads (0 = all cores)")->capture_default_str();
  aud->add_option("--axis", audit_opts.axes, "override a grid axis: name=v1,v2,...")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  aud->add_flag("--no-representations", audit_opts.no_representations, "skip the representation checks");
  aud->add_option("--rel-tol", audit_opts.rel_tol, "quadrature relative tolerance")->capture_default_str();
  aud->add_option("--abs-tol", audit_opts.abs_tol, "quadrature absolute tolerance")->capture_default_str();

  DistCli dist_opts;
  Bindings dist_bind;
  CLI::App* dis = app.add_subcommand("dist", "query the distribution");
  dis->add_option("--query", dist_opts.query, "pdf|cdf|moment|mean|variance|mgf|quantile|sample")->required();
  dis->add_option("--mode", dist_opts.mode)->capture_default_str();
  dis->add_option("--n", dist_opts.n, "sample size");
  dis->add_option("--seed", dist_opts.seed, "sample seed");
  dis->add_option("--max-terms", dist_opts.max_terms, "mgf series budget")->capture_default_str();
  dis->add_option("--format", dist_opts.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  dist_bind.add_to(dis, {"s", "t", "v", "l", "p", "q", "k", "x", "r", "y", "u"});

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (show) return show_config(out);
    if (eval->parsed()) return cmd_eval(eval_opts, eval_bind, out);
    if (tab->parsed()) return cmd_table(table_opts, table, table_bind, out);
    if (aud->parsed()) return cmd_audit(audit_opts, out, err);
    if (dis->parsed()) return cmd_dist(dist_opts, dist_bind, dis, out);
    err << "usage error: a subcommand is required (eval|audit|dist|table)\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "not converged: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace kfun
