#pragma once

#include <cstdint>
#include <stdexcept>

#include "nwpack/beam_search.hpp"
#include "nwpack/core_model.hpp"

namespace nwpack {

/// Raised when the solver's own bookkeeping disagrees with an independent
/// recomputation. Never expected; callers treat it as an internal fault.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SolveResult {
  Layout layout;
  LayoutMetrics metrics;
  SearchStats stats;
  std::size_t block_count = 0;
  double generation_seconds = 0.0;
  double wall_seconds = 0.0;
};

/// Block generation followed by beam search; the time limit covers both. The
/// returned layout has been audited against the instance.
SolveResult solve(const Instance& instance, const SearchConfig& config, const ProgressCallback& progress = {});

}  // namespace nwpack
