#include "gammaflow/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gammaflow/curvature.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/families.hpp"
#include "gammaflow/gamma.hpp"
#include "gammaflow/graph_io.hpp"
#include "gammaflow/heat.hpp"
#include "gammaflow/metrics.hpp"
#include "gammaflow/verify.hpp"

namespace gammaflow {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string family;
  std::string flavor;
  std::string m_expr = "1";
  std::string b_expr = "1";
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  int jobs = 0;  // 0: GAMMAFLOW_JOBS, else 1
  double curvature_tol = 1e-8;
  double psd_tol = 1e-10;
  double check_tol = 1e-9;
  bool no_timestamp = false;
  std::string heat_mode = "auto";

  // curvature
  bool verify_cd = false;
  int trials = 20;
  // metric
  std::string base;
  std::string metric_kind = "default";
  int certificate_k = 0;
  // heat
  std::vector<double> times;
  std::string function = "random";
  std::vector<double> radii;
  std::string balls = "combinatorial";
  double plateau_threshold = 1e-6;
  // verify
  bool all_checks = false;
  std::vector<std::string> checks;
  std::optional<double> K;
  // generate
  int random_vertices = 0;

  unsigned resolved_jobs() const {
    if (jobs > 0) return static_cast<unsigned>(jobs);
    if (const char* env = std::getenv("GAMMAFLOW_JOBS")) {
      try {
        const int v = std::stoi(env);
        if (v > 0) return static_cast<unsigned>(v);
      } catch (const std::exception&) {
      }
    }
    return 1;
  }

  json to_json() const {
    json j{{"command", command},
           {"input", input},
           {"family", family},
           {"flavor", flavor},
           {"m", m_expr},
           {"b", b_expr},
           {"format", format},
           {"seed", seed},
           {"jobs", resolved_jobs()},
           {"tolerances", {{"curvature_tol", curvature_tol}, {"psd_tol", psd_tol}, {"check_tol", check_tol}}},
           {"heat_mode", heat_mode}};
    if (command == "curvature") {
      j["verify_cd"] = verify_cd;
      j["trials"] = trials;
    } else if (command == "metric") {
      j["base"] = base;
      j["metric"] = metric_kind;
      j["certificate_k"] = certificate_k;
    } else if (command.rfind("heat", 0) == 0) {
      j["times"] = times;
      j["radii"] = radii;
      j["function"] = function;
      j["base"] = base;
      j["balls"] = balls;
      j["plateau_threshold"] = plateau_threshold;
    } else if (command == "verify") {
      j["checks"] = checks;
      j["K"] = K ? json(*K) : json(nullptr);
      j["trials"] = trials;
      j["times"] = times;
    } else if (command == "generate") {
      j["random_vertices"] = random_vertices;
    }
    return j;
  }
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::optional<Flavor> flavor_of(const RunConfig& c) {
  if (c.flavor.empty()) return std::nullopt;
  return parse_flavor(c.flavor);
}

FamilySpec family_of(const RunConfig& c) { return parse_family_spec(c.family, c.m_expr, c.b_expr, flavor_of(c)); }

WeightedGraph load_graph(const RunConfig& c) {
  if (!c.input.empty() && !c.family.empty()) throw Error(ErrorCode::InvalidArgument, "give either --input or --family");
  if (!c.input.empty()) return read_graph_file(c.input);
  if (!c.family.empty()) return generate_family(family_of(c));
  throw Error(ErrorCode::InvalidArgument, "no graph: pass --input FILE or --family SPEC");
}

// Exact id first; otherwise a single lowercase letter names a vertex by
// position (a = first vertex), which keeps "delta:b" meaningful on the
// numerically labelled families.
VertexIndex resolve_vertex(const WeightedGraph& g, const std::string& sel) {
  if (auto idx = g.find(sel)) return *idx;
  if (sel.size() == 1 && sel[0] >= 'a' && sel[0] <= 'z') {
    const auto pos = static_cast<std::size_t>(sel[0] - 'a');
    if (pos < g.size()) return pos;
  }
  throw Error(ErrorCode::UnknownVertex, "no vertex '" + sel + "'");
}

VertexFunction parse_function(const WeightedGraph& g, const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("delta:", 0) == 0) return delta(g, resolve_vertex(g, spec.substr(6)));
  if (spec.rfind("const:", 0) == 0) {
    try {
      return constant(g, std::stod(spec.substr(6)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad constant in '" + spec + "'");
    }
  }
  if (spec == "random") {
    std::mt19937_64 rng(seed);
    return random_function(g, rng);
  }
  if (!spec.empty() && spec.front() == '{') {
    try {
      return function_from_json(g, json::parse(spec));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("function literal: ") + e.what());
    }
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + spec.substr(5) + "'");
    try {
      return function_from_json(g, json::parse(in));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("function file: ") + e.what());
    }
  }
  throw Error(ErrorCode::ParseError, "unknown function '" + spec + "' (delta:ID, const:C, random, file:PATH, {json})");
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    first = false;
    line += c;
  }
  return line + '\n';
}

struct Output {
  json document;
  std::string csv;
  int exit_code = 0;
};

Output cmd_curvature(const RunConfig& c) {
  const WeightedGraph g = load_graph(c);
  const auto profile = curvature_profile(g, {c.curvature_tol, c.psd_tol}, c.resolved_jobs());
  Output o;
  json vertices = json::array();
  o.csv = "vertex,curvature,bracket_lo,bracket_hi\n";
  for (const auto& r : profile.vertices) {
    vertices.push_back({{"vertex", g.id(r.vertex)},
                        {"curvature", r.curvature},
                        {"bracket_lo", r.bracket_lo},
                        {"bracket_hi", r.bracket_hi},
                        {"tolerance", r.tolerance},
                        {"minimizer", function_to_json(g, r.minimizer)}});
    o.csv += csv_row({g.id(r.vertex), format_double(r.curvature), format_double(r.bracket_lo), format_double(r.bracket_hi)});
  }
  o.document = {{"vertices", std::move(vertices)}, {"k_min", profile.k_min}, {"argmin", g.id(profile.argmin)}};
  if (c.verify_cd) {
    const auto rep = verify_cd(g, profile.k_min, c.trials, c.seed, c.check_tol);
    o.document["verify_cd"] = report_to_json(g, rep);
    o.exit_code = exit_code(rep.status);
  }
  return o;
}

Output cmd_metric(const RunConfig& c) {
  const WeightedGraph g = load_graph(c);
  VertexIndex base = 0;
  if (!c.base.empty()) base = resolve_vertex(g, c.base);
  else if (!c.family.empty()) base = g.index_of(family_origin(family_of(c)));
  const bool hop = c.metric_kind == "hop";
  if (!hop && c.metric_kind != "default")
    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + c.metric_kind + "' (default, hop)");

  const BaseMetric metric = hop ? hop_metric(g, base) : default_intrinsic_metric(g, base);
  VerificationReport intrinsic;
  if (hop) {
    const auto all = all_base_metrics(g, MetricProvenance::hop_metric, c.resolved_jobs());
    intrinsic = verify_intrinsic(g, all, 1e-12);
  } else {
    intrinsic = verify_default_intrinsic(g, 1e-12);
  }
  Output o;
  o.document = {{"metric", metric_to_json(g, metric)}, {"intrinsic", report_to_json(g, intrinsic)}};
  std::vector<VerificationReport> reports{intrinsic};
  if (c.certificate_k > 0) {
    std::vector<VertexIndex> boundary;
    if (!c.family.empty())
      for (const auto& id : truncation_boundary(family_of(c))) boundary.push_back(g.index_of(id));
    const auto cert = completeness_certificate(g, base, c.certificate_k, boundary, 1e-12);
    o.document["certificate"] = report_to_json(g, cert.report);
    reports.push_back(cert.report);
  }
  o.csv = "vertex,dist\n";
  for (VertexIndex x = 0; x < g.size(); ++x) o.csv += csv_row({g.id(x), format_double(metric.dist[static_cast<Eigen::Index>(x)])});
  o.exit_code = exit_code(aggregate_status(reports));
  return o;
}

Output cmd_heat_apply(const RunConfig& c) {
  const WeightedGraph g = load_graph(c);
  if (c.times.empty()) throw Error(ErrorCode::InvalidArgument, "heat apply needs --t");
  const VertexFunction f = parse_function(g, c.function, c.seed);
  const SemigroupOperator op = build_semigroup(g, parse_heat_mode(c.heat_mode));
  Output o;
  json rows = json::array();
  o.csv = c.times.size() == 1 ? "vertex,value\n" : "t,vertex,value\n";
  for (double t : c.times) {
    const VertexFunction u = op.apply(t, f);
    json values = json::object();
    for (VertexIndex x = 0; x < g.size(); ++x) {
      const double v = u[static_cast<Eigen::Index>(x)];
      values[g.id(x)] = v;
      o.csv += c.times.size() == 1 ? csv_row({g.id(x), format_double(v)})
                                   : csv_row({format_double(t), g.id(x), format_double(v)});
    }
    rows.push_back({{"t", t}, {"values", std::move(values)}});
  }
  o.document = {{"function", function_to_json(g, f)}, {"mode", to_string(op.mode())}, {"solutions", std::move(rows)}};
  return o;
}

MassCurveOptions curve_options(const RunConfig& c) {
  return {parse_ball_kind(c.balls), parse_heat_mode(c.heat_mode), c.resolved_jobs()};
}

double single_time(const RunConfig& c) {
  if (c.times.size() != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one --t");
  return c.times.front();
}

Output cmd_heat_mass(const RunConfig& c) {
  const double t = single_time(c);
  MassCurve curve;
  if (!c.input.empty()) {
    const WeightedGraph g = load_graph(c);
    const VertexIndex o = c.base.empty() ? 0 : resolve_vertex(g, c.base);
    curve = exhaustion_mass_curve(g, o, t, c.radii, curve_options(c));
  } else {
    curve = exhaustion_mass_curve(family_of(c), t, c.radii, curve_options(c));
  }
  return {mass_curve_to_json(curve), mass_curve_to_csv(curve), 0};
}

Output cmd_heat_verdict(const RunConfig& c) {
  if (c.family.empty()) throw Error(ErrorCode::InvalidArgument, "heat verdict needs --family");
  const FamilySpec family = family_of(c);
  CompletenessOptions opts;
  opts.plateau_threshold = c.plateau_threshold;
  opts.curve = curve_options(c);
  const auto analysis = check_stochastic_completeness(family, single_time(c), c.radii, opts);
  Output o;
  // The report holds no vertex witness, so any graph serves for ids.
  const WeightedGraph dummy = generate_family(FamilySpec::path(2));
  o.document = {{"verdict", to_string(analysis.verdict)},
                {"curve", mass_curve_to_json(analysis.curve)},
                {"report", report_to_json(dummy, analysis.report)}};
  o.csv = "verdict,last_deficit,status\n" + csv_row({std::string(to_string(analysis.verdict)),
                                                     format_double(analysis.curve.deficits.back()),
                                                     std::string(to_string(analysis.report.status))});
  o.exit_code = exit_code(analysis.report.status);
  return o;
}

Output cmd_verify(const RunConfig& c) {
  const WeightedGraph g = load_graph(c);
  std::vector<std::string> names = c.all_checks ? check_names() : c.checks;
  if (names.empty()) throw Error(ErrorCode::InvalidArgument, "select checks with --all or --check");
  SuiteConfig sc;
  sc.K = c.K;
  sc.seed = c.seed;
  sc.trials = c.trials;
  if (!c.times.empty()) sc.times = c.times;
  sc.tol = c.check_tol;
  sc.curvature_tol = c.curvature_tol;
  sc.psd_tol = c.psd_tol;
  sc.mode = parse_heat_mode(c.heat_mode);
  sc.jobs = c.resolved_jobs();
  auto reports = run_checks(g, names, sc);
  std::sort(reports.begin(), reports.end(),
            [](const auto& a, const auto& b) { return a.check_name < b.check_name; });
  Output o;
  json list = json::array();
  o.csv = "check,status,worst_residual\n";
  for (const auto& r : reports) {
    list.push_back(report_to_json(g, r));
    o.csv += csv_row({r.check_name, std::string(to_string(r.status)), format_double(r.worst_residual)});
  }
  const Status overall = aggregate_status(reports);
  o.document = {{"status", to_string(overall)}, {"reports", std::move(list)}};
  o.exit_code = exit_code(overall);
  return o;
}

Output cmd_generate(const RunConfig& c) {
  WeightedGraph g = c.random_vertices > 0
                        ? random_connected_graph({static_cast<std::size_t>(c.random_vertices)}, c.seed)
                        : load_graph(c);
  Output o;
  o.document = graph_to_json(g);
  o.csv = "u,v,mu\n";
  for (const auto& e : g.edges()) o.csv += csv_row({g.id(e.u), g.id(e.v), format_double(e.mu)});
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Curvature, heat-semigroup and gradient-estimate checks on weighted graphs", "gammaflow"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--input", c.input, "Graph file (gammaflow-graph-v1 JSON)");
  app.add_option("--family", c.family, "Family spec, e.g. path:10, hypercube:3, birth_death");
  app.add_option("--flavor", c.flavor, "combinatorial, normalized or custom");
  app.add_option("--m", c.m_expr, "birth_death measure m(k)");
  app.add_option("--b", c.b_expr, "birth_death edge weight b(k) on (k, k+1)");
  app.add_option("--output", c.output, "Write the report here instead of stdout");
  app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", c.seed, "Seed for random functions");
  app.add_option("--jobs", c.jobs, "Worker threads (default: GAMMAFLOW_JOBS, else 1)");
  app.add_option("--tol-curvature", c.curvature_tol, "Curvature bisection width");
  app.add_option("--tol-psd", c.psd_tol, "Relative PSD test tolerance");
  app.add_option("--tol-check", c.check_tol, "Verification tolerance");
  app.add_option("--mode", c.heat_mode, "Heat solver: spectral, ode or auto");
  app.add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp field");

  auto* curv = app.add_subcommand("curvature", "Per-vertex curvature and K_min");
  curv->add_flag("--verify-cd", c.verify_cd, "Sample CD(K_min) with random functions");
  curv->add_option("--trials", c.trials, "Random functions for --verify-cd");

  auto* metric = app.add_subcommand("metric", "Intrinsic metric, intrinsic check and cut-off certificate");
  metric->add_option("--base", c.base, "Base vertex");
  metric->add_option("--metric", c.metric_kind, "default or hop");
  metric->add_option("--certificate", c.certificate_k, "Build cut-offs eta_k for k = 1..K");

  auto* heat = app.add_subcommand("heat", "Heat semigroup");
  heat->require_subcommand(1);
  auto* apply = heat->add_subcommand("apply", "P_t f");
  apply->add_option("--t", c.times, "Times")->required()->delimiter(',');
  apply->add_option("--f", c.function, "delta:ID, const:C, random, file:PATH or a JSON map");
  auto* mass = heat->add_subcommand("mass", "Dirichlet heat mass over an exhaustion");
  auto* verdict = heat->add_subcommand("verdict", "Stochastic completeness verdict");
  for (auto* sub : {mass, verdict}) {
    sub->add_option("--t", c.times, "Time")->required();
    sub->add_option("--radii", c.radii, "Increasing ball radii")->required()->delimiter(',');
    sub->add_option("--balls", c.balls, "combinatorial or intrinsic");
  }
  mass->add_option("--base", c.base, "Base vertex (host graph input)");
  verdict->add_option("--threshold", c.plateau_threshold, "Deficit threshold for a complete verdict");

  auto* verify = app.add_subcommand("verify", "Run theorem checks");
  verify->add_flag("--all", c.all_checks, "Run every check");
  verify->add_option("--check", c.checks, "Checks to run")->delimiter(',');
  verify->add_option("--K", c.K, "Curvature bound (default: K_min)");
  verify->add_option("--trials", c.trials, "Random functions per check");
  verify->add_option("--times", c.times, "Time grid")->delimiter(',');

  auto* generate = app.add_subcommand("generate", "Write a graph file");
  generate->add_option("--random", c.random_vertices, "Random connected graph with this many vertices");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (verify->parsed()) {
    for (const auto& n : c.checks)
      if (!is_check_name(n)) {
        err << "unknown check '" << n << "'; valid checks:";
        for (const auto& v : check_names()) err << ' ' << v;
        err << "\n";
        return 2;
      }
  }

  try {
    Output o;
    if (curv->parsed()) {
      c.command = "curvature";
      o = cmd_curvature(c);
    } else if (metric->parsed()) {
      c.command = "metric";
      o = cmd_metric(c);
    } else if (apply->parsed()) {
      c.command = "heat apply";
      o = cmd_heat_apply(c);
    } else if (mass->parsed()) {
      c.command = "heat mass";
      o = cmd_heat_mass(c);
    } else if (verdict->parsed()) {
      c.command = "heat verdict";
      o = cmd_heat_verdict(c);
    } else if (verify->parsed()) {
      c.command = "verify";
      o = cmd_verify(c);
    } else if (generate->parsed()) {
      c.command = "generate";
      o = cmd_generate(c);
    }

    std::string text;
    if (c.format == "csv") {
      text = o.csv;
    } else if (c.command == "generate") {
      text = o.document.dump(2) + "\n";
    } else {
      json doc{{"tool", "gammaflow"}, {"config", c.to_json()}, {"result", std::move(o.document)}, {"exit_code", o.exit_code}};
      if (!c.no_timestamp) doc["timestamp"] = timestamp_utc();
      text = doc.dump(2) + "\n";
    }
    if (c.output.empty()) {
      out << text;
    } else {
      std::ofstream file(c.output, std::ios::binary);
      if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + c.output + "'");
      file << text;
    }
    return o.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gammaflow
