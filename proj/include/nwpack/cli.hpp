#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nwpack/beam_search.hpp"
#include "nwpack/core_model.hpp"
#include "nwpack/instance_io.hpp"

namespace nwpack::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kInternal = 3 };

/// Environment variable naming the default corpus directory.
inline constexpr const char* kCorpusEnv = "NWPACK_CORPUS";

struct GenOptions {
  std::vector<std::string> families;  // empty: every table family
  std::uint64_t seed = 42;
  int instances = 100;
  std::filesystem::path output;
};

struct SolveOptions {
  std::filesystem::path instance;
  std::filesystem::path output;  // empty: <instance stem>.sol beside the instance
  std::filesystem::path dump_blocks;
  SearchConfig config;
  std::uint64_t seed = 0;
  bool verbose = false;
};

struct BenchOptions {
  std::filesystem::path corpus;
  std::filesystem::path output;  // empty: the corpus directory
  std::vector<double> alphas{0.6};
  std::vector<double> times{30.0};
  unsigned jobs = 1;
  SearchConfig config;  // alpha and time_limit are overridden per cell
  bool verbose = false;
};

struct RenderOptions {
  std::filesystem::path solution;
  std::filesystem::path instance;
  std::filesystem::path output;
  int bands = 4;
};

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err);
int cmd_audit(const std::filesystem::path& solution, const std::filesystem::path& instance, std::ostream& out,
              std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

SolutionRecord make_record(const Instance& instance, const Layout& layout, const LayoutMetrics& metrics,
                           const SearchConfig& config, std::uint64_t seed);

// ---- bench internals -------------------------------------------------------

struct BenchRow {
  std::string family;
  std::string instance;
  double alpha = 0.0;
  double time_limit = 0.0;
  double utilization = 0.0;  // fraction
  double total_dose = 0.0;
  double wall_seconds = 0.0;
  bool ok = true;
  std::string error;
};

struct BenchCell {
  int samples = 0;
  double fill_pct = 0.0;  // mean utilization, percent
  double dose = 0.0;      // mean total dose
  double dose_per_fill() const { return fill_pct > 0.0 ? dose / (fill_pct / 100.0) : 0.0; }
};

struct BenchReport {
  std::vector<std::string> families;  // row order
  std::vector<double> alphas;
  std::vector<double> times;
  std::vector<BenchRow> rows;  // ordered by (instance, time, alpha)

  BenchCell cell(const std::string& family, double alpha, double time_limit) const;
  bool all_ok() const;
};

std::string family_of(const Instance& instance);

/// Solves every instance for every (alpha, time) pair, `jobs` instances at a time.
BenchReport run_bench(const std::vector<Instance>& instances, const std::vector<double>& alphas,
                      const std::vector<double>& times, const SearchConfig& base, unsigned jobs,
                      std::ostream* log = nullptr);

/// Reference time for the alpha tables and reference alpha for the time sweep.
double reference_time(const BenchReport& report);
double reference_alpha(const BenchReport& report);

std::string fillrate_csv(const BenchReport& report);
std::string doserate_csv(const BenchReport& report);
std::string dose_per_fill_csv(const BenchReport& report);
std::string time_sweep_csv(const BenchReport& report);
std::string instances_csv(const BenchReport& report);

/// Aligned text table for humans.
std::string summary_table(const BenchReport& report);

// ---- rendering ---------------------------------------------------------------

std::string render_svg(const Instance& instance, const SolutionRecord& record, int bands);

}  // namespace nwpack::cli
