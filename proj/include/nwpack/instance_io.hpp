#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nwpack/core_model.hpp"

namespace nwpack {

/// Malformed text; `line()` is 1-based, 0 when the problem is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Well-formed text that names something inconsistent (duplicate ids, unknown types).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to exactly `v`.
std::string format_double(double v);

// Instance text:
//   POOL L W H UNIT_SCALE
//   NAME name                                   (optional)
//   SOURCE family=F seed=S types=T boxes=N      (optional)
//   TYPE id l w h count activity gamma          (one per box type)
// '#' starts a comment.
std::string write_instance(const Instance& instance);
Instance read_instance(std::string_view text, std::string default_name = {});

struct SolverEcho {
  double alpha = 0.6;
  double time_limit = 30.0;
  std::uint64_t seed = 0;
  std::size_t max_blocks = 10000;
  double min_fill_rate = 0.98;
  std::uint64_t max_evaluations = 0;
  bool operator==(const SolverEcho&) const = default;
};

struct SolutionRecord {
  std::string instance_name;
  SolverEcho config;
  Layout placements;
  Volume placed_volume = 0;
  double utilization = 0.0;
  double total_dose = 0.0;
  bool operator==(const SolutionRecord&) const = default;
};

// Solution text:
//   SOLUTION instance_name
//   CONFIG alpha=… time_limit=… seed=… max_blocks=… min_fill_rate=… max_evaluations=…
//   BOX type_id x y z                            (one per placed box)
//   METRICS boxes=N placed_volume=V utilization=U total_dose=D
std::string write_solution(const SolutionRecord& record);
SolutionRecord read_solution(std::string_view text);
/// Also rejects placements whose type id the instance does not define.
SolutionRecord read_solution(std::string_view text, const Instance& instance);

struct AuditResult {
  ValidationReport report;
  std::vector<std::string> mismatches;

  bool ok() const { return report.ok() && mismatches.empty(); }
  std::string to_string() const;
};

/// Validates the placements and checks the stored metrics against a fresh
/// recomputation (1e-9 relative).
AuditResult audit_solution(const SolutionRecord& record, const Instance& instance);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Reads and validates an instance; the file stem is the default name.
Instance load_instance(const std::filesystem::path& path);

}  // namespace nwpack
