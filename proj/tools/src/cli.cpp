#include "hdgc/cli.hpp"

#include "hdgc/error.hpp"
#include "hdgc/network.hpp"
#include "hdgc/panel.hpp"
#include "hdgc/serialize.hpp"
#include "hdgc/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace hdgc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::numeric: return 3;
    case ErrorKind::infeasible: return 4;
  }
  return 3;
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::infeasible: return "infeasible";
  }
  return "numeric";
}

void report(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << body;
  f.close();
  if (!f) throw ValidationError("write failed for '" + path.string() + "'");
}

// Files land in a hidden staging directory and are moved into place only once
// every artifact has been produced; anything left over is removed.
class Staging {
 public:
  explicit Staging(fs::path dir) : dir_(std::move(dir)), tmp_(dir_ / ".hdgc-staging") {}
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  ~Staging() {
    std::error_code ec;
    if (!done_)
      for (const auto& p : committed_) fs::remove(p, ec);
    fs::remove_all(tmp_, ec);
  }

  fs::path path(const std::string& name) {
    ensure();
    names_.push_back(name);
    return tmp_ / name;
  }

  void write(const std::string& name, const std::string& body) { write_file(path(name), body); }

  void heatmap(const std::string& name, const Matrix& m, const std::vector<std::string>& labels) {
    ensure();
    for (const auto& p : emit_heatmap_data(m, labels, tmp_ / name)) names_.push_back(p.filename().string());
  }

  std::vector<std::string> commit() {
    for (const auto& n : names_) {
      fs::rename(tmp_ / n, dir_ / n);
      committed_.push_back(dir_ / n);
    }
    done_ = true;
    return names_;
  }

 private:
  void ensure() {
    if (fs::exists(tmp_)) return;
    fs::create_directories(tmp_);
  }

  fs::path dir_;
  fs::path tmp_;
  std::vector<std::string> names_;
  std::vector<fs::path> committed_;
  bool done_ = false;
};

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".partial";
  try {
    write_file(tmp, body);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

TimeSeriesPanel load_data(const RunConfig& c, bool apply_difference = true) {
  auto panel = load_panel(c.data.path, c.data.vars, c.data.time_column, LoadOptions{c.data.trim_common});
  if (apply_difference && !c.data.difference.empty())
    panel = difference(panel, parse_difference_spec(c.data.difference));
  if (c.data.demean) panel = demean(panel);
  return panel;
}

int resolve_p(const RunConfig& c, const TimeSeriesPanel& panel, int fallback) {
  if (c.p_auto) return select_lag_length(panel, c.p_max);
  return c.p.value_or(fallback);
}

NetworkOptions network_options(const RunConfig& c) {
  NetworkOptions o;
  o.statistic = c.statistic;
  o.selection = c.selection;
  o.df_augment_per_equation = c.df_augment_per_equation;
  o.chi2_df_includes_augmentation = c.df_include_augmentation;
  o.threads = c.threads;
  return o;
}

void stage_network(Staging& stage, const CausalNetwork& net, const std::string& prefix) {
  stage.write(prefix + ".json", network_to_json(net) + "\n");
  stage.write(prefix == "network" ? "edges.json" : prefix + "_edges.json", edges_to_json(net) + "\n");
  stage.write(prefix + ".dot", network_to_dot(net));
  const std::string tag = prefix == "network" ? "" : prefix + "_";
  stage.heatmap(tag + "pvalues.csv", net.pvalue_matrix(), net.nodes);
  stage.write(tag + "pvalue_bins.csv", heatmap_csv(net.pvalue_matrix(), net.nodes, pvalue_bin));
  stage.heatmap(tag + "long_run.csv", net.magnitude, net.nodes);
}

json partition_json(const CausalNetwork& net, const CommunityPartition& part) {
  json communities = json::array();
  for (int c = 0; c < part.communities(); ++c) {
    json members = json::array();
    for (std::size_t v = 0; v < part.assignment.size(); ++v)
      if (part.assignment[v] == c) members.push_back(net.nodes[v]);
    communities.push_back(std::move(members));
  }
  json assignment = json::object();
  for (std::size_t v = 0; v < part.assignment.size(); ++v) assignment[net.nodes[v]] = part.assignment[v];
  return {{"modularity", part.modularity}, {"communities", communities}, {"assignment", assignment}};
}

json paths_json(const std::vector<Path>& paths) {
  json out = json::array();
  for (const auto& p : paths) out.push_back(p);
  return out;
}

CausalNetwork obtain_network(const RunConfig& c) {
  if (c.network_in) return network_from_json(read_file(*c.network_in));
  const auto panel = load_data(c);
  LagSpec spec{resolve_p(c, panel, 1), c.d};
  return build_network(panel, spec, c.alpha, network_options(c));
}

void emit(const RunConfig& c, std::ostream& out, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.json_out) write_atomic(*c.json_out, text);
  out << text;
}

int run_test(const RunConfig& c, std::ostream& out) {
  const auto panel = load_data(c);
  GcQuery q;
  q.caused = c.caused;
  q.causing = c.causing;
  q.spec = {resolve_p(c, panel, 1), c.d};
  q.alpha = c.alpha;
  q.statistic = c.statistic;
  q.df_augment_per_equation = c.df_augment_per_equation;
  q.chi2_df_includes_augmentation = c.df_include_augmentation;
  q.selection = c.selection;
  const std::string text = result_to_json(pds_lm_test(panel, q)) + "\n";
  if (c.json_out) write_atomic(*c.json_out, text);
  out << text;
  return 0;
}

int run_network(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto panel = load_data(c);
  const LagSpec spec{resolve_p(c, panel, 1), c.d};
  const auto net = build_network(panel, spec, c.alpha, network_options(c));
  for (const auto& w : net.warnings) err << "warning: " << w << '\n';

  fs::create_directories(c.out_dir);
  Staging stage(c.out_dir);
  stage_network(stage, net, "network");
  const auto files = stage.commit();
  out << json{{"nodes", net.nodes.size()}, {"edges", net.edges.size()}, {"p", spec.p}, {"d", spec.d},
              {"warnings", net.warnings.size()}, {"out_dir", c.out_dir.string()}, {"files", files}}
             .dump(2)
      << '\n';
  return 0;
}

int run_paths(const RunConfig& c, std::ostream& out) {
  const auto net = obtain_network(c);
  const auto paths = simple_paths(net, c.from, c.to, c.max_len, c.cap);
  json j{{"from", c.from}, {"to", c.to}, {"count", paths.size()}, {"paths", paths_json(paths)}};
  j["max_len"] = c.max_len ? json(*c.max_len) : json(nullptr);
  emit(c, out, j);
  return 0;
}

int run_cycles(const RunConfig& c, std::ostream& out) {
  const auto net = obtain_network(c);
  const auto cycles = cycles_through(net, c.via, c.cap);
  emit(c, out, json{{"via", c.via}, {"count", cycles.size()}, {"cycles", paths_json(cycles)}});
  return 0;
}

int run_cluster(const RunConfig& c, std::ostream& out) {
  const auto net = obtain_network(c);
  emit(c, out, partition_json(net, greedy_modularity_clusters(net)));
  return 0;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  Integration integration = Integration::stationary;
  double strength = 0.0;
  if (c.dgp == "power") {
    strength = c.strength;
  } else if (c.dgp == "unitroot") {
    integration = Integration::unit_root_diagonal;
  } else if (c.dgp == "cointegrated") {
    integration = Integration::cointegrated;
    strength = c.strength;
  }
  make_gc_pair_spec(strength, integration, c.seed).validate();

  GcQuery q;
  q.caused = {"y2"};
  q.causing = {"y1"};
  q.spec = {c.p.value_or(1), c.d};
  q.alpha = c.alpha;
  q.statistic = c.statistic;
  q.df_augment_per_equation = c.df_augment_per_equation;
  q.chi2_df_includes_augmentation = c.df_include_augmentation;
  q.selection = c.selection;
  q.validate();

  const auto reps = static_cast<std::size_t>(c.reps);
  std::vector<signed char> outcome(reps, -1);
  std::vector<std::string> failures(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        const auto spec = make_gc_pair_spec(strength, integration, c.seed + r);
        const auto panel = demean(simulate_var(spec, c.T, c.burn_in));
        outcome[r] = pds_lm_test(panel, q).reject ? 1 : 0;
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(reps)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t rejections = 0;
  std::size_t completed = 0;
  std::string first_failure;
  for (std::size_t r = 0; r < reps; ++r) {
    if (outcome[r] < 0) {
      if (first_failure.empty()) first_failure = failures[r];
      continue;
    }
    ++completed;
    rejections += static_cast<std::size_t>(outcome[r]);
  }
  if (completed == 0) throw NumericError("simulate: every replication failed: " + first_failure);

  json settings{{"dgp", c.dgp},     {"T", c.T},     {"alpha", c.alpha},           {"p", q.spec.p},
                {"d", c.d},         {"seed", c.seed}, {"strength", strength},     {"burn_in", c.burn_in},
                {"statistic", to_string(c.statistic)}};
  emit(c, out,
       json{{"rejection_rate", static_cast<double>(rejections) / static_cast<double>(completed)},
            {"reps", c.reps},
            {"rejections", rejections},
            {"failed", reps - completed},
            {"settings", settings}});
  return 0;
}

int run_convert(const RunConfig& c, std::ostream& out) {
  const Gas gas = parse_gas(c.gas);
  if (c.concentration) {
    const double f = concentration_to_forcing({gas, *c.concentration, 0}, c.baseline);
    emit(c, out,
         json{{"gas", to_string(gas)},
              {"concentration", *c.concentration},
              {"unit", gas == Gas::co2 ? "ppm" : "ppb"},
              {"forcing", f}});
    return 0;
  }
  const auto panel = load_panel(c.data.path, {c.column}, c.data.time_column, LoadOptions{c.data.trim_common});
  std::ostringstream csv;
  csv << c.data.time_column << ',' << c.column << "_forcing\n";
  for (Index t = 0; t < panel.T(); ++t) {
    const long year = panel.time_index()[static_cast<std::size_t>(t)];
    const double f = concentration_to_forcing({gas, panel.values()(t, 0), static_cast<int>(year)}, c.baseline);
    csv << year << ',' << format_raw(f) << '\n';
  }
  if (c.json_out) write_atomic(*c.json_out, csv.str());
  out << csv.str();
  return 0;
}

int run_study(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto panel = load_data(c, false);
  const int p = resolve_p(c, panel, 3);
  const auto options = network_options(c);
  const auto net = build_network(panel, {p, c.d}, c.alpha, options);
  for (const auto& w : net.warnings) err << "warning: " << w << '\n';

  const Index target = net.index_of(c.target);
  json into_target = json::array();
  for (const auto& [i, j] : net.edges)
    if (j == target) into_target.push_back(net.nodes[static_cast<std::size_t>(i)]);

  json blocks = json::array();
  for (int bp : {p, c.stress_p}) {
    try {
      blocks.push_back(json::parse(result_to_json(block_test(panel, {c.target}, c.block, {bp, c.d}, c.alpha, options))));
    } catch (const Error& e) {
      blocks.push_back(json{{"p", bp}, {"error", e.what()}, {"kind", kind_name(e.kind())}});
    }
  }

  json summary{{"nodes", net.nodes},
               {"p", p},
               {"d", c.d},
               {"alpha", c.alpha},
               {"edge_count", net.edges.size()},
               {"edges_into_target", into_target},
               {"target", c.target},
               {"block", c.block},
               {"block_tests", blocks},
               {"clusters", partition_json(net, greedy_modularity_clusters(net))},
               {"cycles_through_target", cycles_through(net, c.target, c.cap).size()}};

  fs::create_directories(c.out_dir);
  Staging stage(c.out_dir);
  stage_network(stage, net, "network");
  if (!c.data.difference.empty()) {
    auto diffed = difference(load_panel(c.data.path, c.data.vars, c.data.time_column, LoadOptions{c.data.trim_common}),
                             parse_difference_spec(c.data.difference));
    if (c.data.demean) diffed = demean(diffed);
    const auto dnet = build_network(diffed, {p, 0}, c.alpha, options);
    stage_network(stage, dnet, "network_differenced");
    summary["differenced"] = {{"edge_count", dnet.edges.size()}, {"difference", c.data.difference}};
  }
  stage.write("study.json", summary.dump(2) + "\n");
  stage.commit();
  out << summary.dump(2) << '\n';
  return 0;
}

}  // namespace

std::map<std::string, int> parse_difference_spec(const std::string& spec) {
  std::map<std::string, int> orders;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0)
      throw ValidationError("--difference: expected name:order, got '" + item + "'");
    int order = -1;
    const char* first = item.data() + colon + 1;
    const char* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, order);
    if (ec != std::errc{} || ptr != last || order < 0)
      throw ValidationError("--difference: bad order in '" + item + "'");
    if (!orders.emplace(item.substr(0, colon), order).second)
      throw ValidationError("--difference: '" + item.substr(0, colon) + "' given twice");
  }
  return orders;
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
  };
  need(!(p && p_auto), "--p and --p-auto are mutually exclusive");
  need(!p || *p >= 1, "--p must be >= 1");
  need(p_max >= 1, "--p-max must be >= 1");
  need(d >= 0, "--d must be >= 0");
  need(alpha > 0.0 && alpha < 1.0, "--alpha must lie in (0, 1)");
  need(selection.n_lambda >= 1, "--n-lambda must be >= 1");
  need(selection.lambda_ratio > 0.0 && selection.lambda_ratio < 1.0, "--lambda-ratio must lie in (0, 1)");
  need(threads >= 1, "--threads must be >= 1");
  need(cap >= 1, "--cap must be >= 1");
  const bool has_data = !data.path.empty();
  switch (mode) {
    case Mode::test:
      need(has_data, "test: --data is required");
      need(!caused.empty() && !causing.empty(), "test: --caused and --causing are required");
      break;
    case Mode::network:
      need(has_data, "network: --data is required");
      break;
    case Mode::paths:
      need(has_data != network_in.has_value(), "paths: give exactly one of --data and --network");
      need(!from.empty() && !to.empty(), "paths: --from and --to are required");
      break;
    case Mode::cycles:
      need(has_data != network_in.has_value(), "cycles: give exactly one of --data and --network");
      need(!via.empty(), "cycles: --via is required");
      break;
    case Mode::cluster:
      need(has_data != network_in.has_value(), "cluster: give exactly one of --data and --network");
      break;
    case Mode::simulate:
      need(dgp == "h0" || dgp == "power" || dgp == "unitroot" || dgp == "cointegrated",
           "simulate: --dgp must be one of h0, power, unitroot, cointegrated");
      need(reps >= 1, "simulate: --reps must be >= 1");
      need(T >= 2, "simulate: --T must be >= 2");
      need(burn_in >= 0, "simulate: --burn-in must be >= 0");
      need(!p_auto, "simulate: --p-auto is not supported");
      break;
    case Mode::convert:
      need(!gas.empty(), "convert: --gas is required");
      need(concentration.has_value() != (has_data && !column.empty()),
           "convert: give either a concentration (--ppm/--ppb) or --data with --column");
      break;
    case Mode::study:
      need(has_data, "study: --data is required");
      need(!target.empty() && !block.empty(), "study: --target and --block are required");
      need(stress_p >= 1, "study: --stress-p must be >= 1");
      break;
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code_out) {
  RunConfig cfg;
  CLI::App app{"Granger-causality networks for high-dimensional VARs in levels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hdgc 0.1.0");

  int p_value = 0;
  std::string stat = "chi2";
  std::string adaptive = "on";
  bool no_selection = false;
  std::string json_out;
  std::string network_in;
  std::size_t max_len = 0;
  double ppm = 0.0;
  double ppb = 0.0;
  std::string data_path;
  std::string out_dir = ".";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::map<CLI::App*, Mode> modes;

  auto data_opts = [&](CLI::App* s) {
    s->add_option("--data", data_path, "CSV panel with a header row");
    s->add_option("--time-col", cfg.data.time_column, "time column name")->capture_default_str();
    s->add_option("--vars", cfg.data.vars, "series to use (default: all)")->delimiter(',');
    s->add_flag("--trim-common", cfg.data.trim_common, "trim to the years where every series is observed");
    s->add_flag("--demean,!--no-demean", cfg.data.demean, "subtract column means (default on)");
    s->add_option("--difference", cfg.data.difference, "difference orders, name:order,...");
  };
  auto model_opts = [&](CLI::App* s, bool lag_choice) {
    if (lag_choice) {
      auto* po = s->add_option("--p", p_value, "VAR lag length");
      auto* pa = s->add_flag("--p-auto", cfg.p_auto, "choose p by BIC");
      po->excludes(pa);
      s->add_option("--p-max", cfg.p_max, "largest lag tried by --p-auto")->capture_default_str();
    }
    s->add_option("--d", cfg.d, "lag-augmentation order")->capture_default_str();
    s->add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();
    s->add_option("--stat", stat, "chi2 or f")->check(CLI::IsMember({"chi2", "f"}))->capture_default_str();
    s->add_option("--n-lambda", cfg.selection.n_lambda, "lambda grid size")->capture_default_str();
    s->add_option("--lambda-ratio", cfg.selection.lambda_ratio, "lambda_min / lambda_max")->capture_default_str();
    s->add_option("--adaptive", adaptive, "adaptive lasso weights on|off")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    s->add_flag("--no-selection", no_selection, "keep every candidate regressor");
    s->add_flag("--df-augment-per-equation", cfg.df_augment_per_equation,
                "count augmentation lags once per caused equation");
    s->add_flag("--df-include-augmentation", cfg.df_include_augmentation,
                "add augmentation lags to the chi-square degrees of freedom");
    s->add_option("--threads", threads, "worker threads")->envname("HDGC_THREADS");
  };
  auto network_source = [&](CLI::App* s) {
    data_opts(s);
    model_opts(s, true);
    s->add_option("--network", network_in, "network.json written by `network`");
  };

  auto* test = app.add_subcommand("test", "PDS-LM test of one (block) hypothesis");
  modes[test] = Mode::test;
  data_opts(test);
  model_opts(test, true);
  test->add_option("--caused", cfg.caused, "caused series (comma list)")->delimiter(',')->required();
  test->add_option("--causing", cfg.causing, "causing series (comma list)")->delimiter(',')->required();
  test->add_option("--json", json_out, "also write the result here");

  auto* network = app.add_subcommand("network", "pairwise tests between every ordered pair");
  modes[network] = Mode::network;
  data_opts(network);
  model_opts(network, true);
  network->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* paths = app.add_subcommand("paths", "simple directed paths between two series");
  modes[paths] = Mode::paths;
  network_source(paths);
  paths->add_option("--from", cfg.from, "start series")->required();
  paths->add_option("--to", cfg.to, "end series")->required();
  paths->add_option("--max-len", max_len, "longest path, in edges");
  paths->add_option("--cap", cfg.cap, "abort beyond this many paths")->capture_default_str();
  paths->add_option("--json", json_out, "also write the result here");

  auto* cycles = app.add_subcommand("cycles", "simple directed cycles through a series");
  modes[cycles] = Mode::cycles;
  network_source(cycles);
  cycles->add_option("--via", cfg.via, "series every cycle passes through")->required();
  cycles->add_option("--cap", cfg.cap, "abort beyond this many cycles")->capture_default_str();
  cycles->add_option("--json", json_out, "also write the result here");

  auto* cluster = app.add_subcommand("cluster", "greedy modularity communities");
  modes[cluster] = Mode::cluster;
  network_source(cluster);
  cluster->add_option("--json", json_out, "also write the result here");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rate on a bivariate VAR");
  modes[simulate] = Mode::simulate;
  model_opts(simulate, false);
  simulate->add_option("--p", p_value, "VAR lag length used by the test");
  simulate->add_option("--dgp", cfg.dgp, "h0, power, unitroot or cointegrated")
      ->check(CLI::IsMember({"h0", "power", "unitroot", "cointegrated"}))
      ->capture_default_str();
  simulate->add_option("--reps", cfg.reps, "replications")->capture_default_str();
  simulate->add_option("--T", cfg.T, "sample length")->capture_default_str();
  simulate->add_option("--strength", cfg.strength, "cross coefficient for power and cointegrated")
      ->capture_default_str();
  simulate->add_option("--burn-in", cfg.burn_in, "discarded start-up draws")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "replication r uses seed + r")->capture_default_str();
  simulate->add_option("--json", json_out, "also write the result here");

  auto* convert = app.add_subcommand("convert", "greenhouse-gas concentration to radiative forcing");
  modes[convert] = Mode::convert;
  convert->add_option("--gas", cfg.gas, "co2, ch4 or n2o")->required();
  auto* ppm_opt = convert->add_option("--ppm", ppm, "CO2 concentration");
  auto* ppb_opt = convert->add_option("--ppb", ppb, "CH4 or N2O concentration");
  ppm_opt->excludes(ppb_opt);
  convert->add_option("--data", data_path, "CSV with a concentration column");
  convert->add_option("--column", cfg.column, "column of --data to convert");
  convert->add_option("--time-col", cfg.data.time_column, "time column name")->capture_default_str();
  convert->add_flag("--trim-common", cfg.data.trim_common, "drop leading and trailing missing rows");
  convert->add_option("--c0", cfg.baseline.c0, "pre-industrial CO2, ppm")->capture_default_str();
  convert->add_option("--m0", cfg.baseline.m0, "pre-industrial CH4, ppb")->capture_default_str();
  convert->add_option("--n0", cfg.baseline.n0, "pre-industrial N2O, ppb")->capture_default_str();
  convert->add_option("--json", json_out, "also write the output here");

  auto* study = app.add_subcommand("study", "network, block tests and clustering for one target series");
  modes[study] = Mode::study;
  data_opts(study);
  model_opts(study, true);
  study->add_option("--target", cfg.target, "caused series of interest")->required();
  study->add_option("--block", cfg.block, "causing block (comma list)")->delimiter(',')->required();
  study->add_option("--stress-p", cfg.stress_p, "second lag length for the block test")->capture_default_str();
  study->add_option("--out", out_dir, "output directory")->capture_default_str();
  study->add_option("--cap", cfg.cap, "abort beyond this many cycles")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code_out = app.exit(e, out, err) == 0 ? 0 : 2;
    return std::nullopt;
  }

  for (const auto& [sub, mode] : modes) {
    if (!sub->parsed()) continue;
    cfg.mode = mode;
    auto given = [sub](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--p")) cfg.p = p_value;
    if (given("--max-len")) cfg.max_len = max_len;
    if (given("--network")) cfg.network_in = network_in;
    if (given("--json")) cfg.json_out = json_out;
    if (mode == Mode::convert) {
      if (given("--ppm")) {
        if (cfg.gas != "co2") throw ValidationError("convert: --ppm applies to co2; use --ppb");
        cfg.concentration = ppm;
      }
      if (given("--ppb")) {
        if (cfg.gas == "co2") throw ValidationError("convert: co2 is given in ppm");
        cfg.concentration = ppb;
      }
    }
  }
  cfg.data.path = data_path;
  cfg.out_dir = out_dir;
  cfg.statistic = parse_statistic(stat);
  cfg.selection.method = no_selection        ? SelectionMethod::none
                         : adaptive == "off" ? SelectionMethod::lasso
                                             : SelectionMethod::adaptive_lasso;
  cfg.threads = threads;
  exit_code_out = 0;
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.mode) {
      case Mode::test: return run_test(config, out);
      case Mode::network: return run_network(config, out, err);
      case Mode::paths: return run_paths(config, out);
      case Mode::cycles: return run_cycles(config, out);
      case Mode::cluster: return run_cluster(config, out);
      case Mode::simulate: return run_simulate(config, out);
      case Mode::convert: return run_convert(config, out);
      case Mode::study: return run_study(config, out, err);
    }
  } catch (const Error& e) {
    report(err, kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    report(err, "validation", e.what());
    return 2;
  } catch (const std::exception& e) {
    report(err, "numeric", e.what());
    return 3;
  }
  return 3;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = 0;
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv, out, err, code);
  } catch (const Error& e) {
    report(err, kind_name(e.kind()), e.what());
    return exit_code(e.kind());
  }
  if (!cfg) return code;
  return run(*cfg, out, err);
}

}  // namespace hdgc::cli
