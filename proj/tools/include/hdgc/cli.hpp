#pragma once

#include "hdgc/forcing.hpp"
#include "hdgc/pdslm.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdgc::cli {

enum class Mode { test, network, paths, cycles, cluster, simulate, convert, study };

struct DataConfig {
  std::filesystem::path path;
  std::string time_column = "year";
  std::vector<std::string> vars;
  bool trim_common = false;
  bool demean = true;
  std::string difference;  ///< "name:order,..."
};

struct RunConfig {
  Mode mode = Mode::test;
  DataConfig data;

  std::optional<int> p;
  bool p_auto = false;
  int p_max = 10;
  int d = 2;
  double alpha = 0.1;
  Statistic statistic = Statistic::chi_square;
  SelectionSettings selection{};
  bool df_augment_per_equation = false;
  bool df_include_augmentation = false;
  unsigned threads = 1;

  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> json_out;

  // test
  std::vector<std::string> caused;
  std::vector<std::string> causing;

  // paths / cycles / cluster
  std::optional<std::filesystem::path> network_in;
  std::string from;
  std::string to;
  std::string via;
  std::optional<std::size_t> max_len;
  std::size_t cap = 1'000'000;

  // simulate
  std::string dgp = "h0";
  int reps = 1000;
  Index T = 300;
  double strength = 0.4;
  Index burn_in = 200;
  std::uint64_t seed = 1;

  // convert
  std::string gas;
  std::optional<double> concentration;
  PreindustrialBaseline baseline{};
  std::string column;  ///< series mode: convert this column of --data

  // study
  std::string target;
  std::vector<std::string> block;
  int stress_p = 15;

  /// Throws ValidationError on inconsistent flags.
  void validate() const;
};

/// Parses argv into a RunConfig. Returns nullopt and sets `exit_code` when
/// parsing ends the run (help, version or a usage error).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code);

/// Executes one validated configuration. Exit codes: 0 success, 2 validation
/// error, 3 numeric failure, 4 infeasible test.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a:1,b:2" -> {{a,1},{b,2}}.
std::map<std::string, int> parse_difference_spec(const std::string& spec);

}  // namespace hdgc::cli
