#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <vector>

#include "nwpack/block.hpp"
#include "nwpack/block_generation.hpp"
#include "nwpack/block_selector.hpp"
#include "nwpack/core_model.hpp"
#include "nwpack/space_manager.hpp"

namespace nwpack {

using Clock = std::chrono::steady_clock;

struct PlacedBlock {
  std::uint32_t block = 0;  // index into the master block list
  Point anchor;
  bool operator==(const PlacedBlock&) const = default;
};

struct SearchState {
  std::vector<int> remaining;              // per box type
  std::vector<std::uint32_t> live_blocks;  // master blocks still formable from `remaining`
  SpaceList spaces;
  std::vector<PlacedBlock> placements;
  Volume placed_volume = 0;
  double total_dose = 0.0;
  Volume score = 0;
};

struct Incumbent {
  bool found = false;
  std::vector<PlacedBlock> placements;
  Volume placed_volume = 0;
  double utilization = 0.0;
  double total_dose = 0.0;
};

/// Volume first, dose as the tie-break: true when the candidate should replace
/// the incumbent. Any candidate replaces an empty incumbent.
bool incumbent_compare(Volume candidate_volume, double candidate_dose, const Incumbent& incumbent);

struct SearchConfig {
  double time_limit = 30.0;  // seconds, includes block generation when run through solve()
  double alpha = 0.6;
  double initial_width = 1.0;
  double width_growth = 1.4142135623730951;
  BlockGenConfig block_gen;
  /// Stop after this many greedy evaluations; 0 means no cap. With a cap that
  /// binds before the deadline the result is independent of machine speed.
  std::uint64_t max_evaluations = 0;
  /// Drop spaces thinner than every remaining box along some axis.
  bool drop_unusable_spaces = true;

  /// Throws std::invalid_argument on a non-positive time limit or bad widths.
  void validate() const;
};

/// max(1, ⌊w + 0.5⌋).
std::size_t effective_width(double w);

struct ProgressEvent {
  int restart = 0;
  std::size_t width = 0;
  std::uint64_t evaluations = 0;
  double elapsed_seconds = 0.0;
  Volume best_volume = 0;
  double best_utilization = 0.0;
  double best_dose = 0.0;
};

using ProgressCallback = std::function<void(const ProgressEvent&)>;

struct SearchStats {
  int restarts = 0;
  std::uint64_t evaluations = 0;
  std::size_t last_width = 0;
  bool exhausted = false;  // a restart ran without truncating anything
};

struct SearchResult {
  Incumbent incumbent;
  SearchStats stats;
};

/// Search engine over a fixed instance and master block list. All operations
/// are const; states are plain values.
class BeamSearch {
 public:
  BeamSearch(const Instance& instance, const BlockList& blocks, SearchConfig config);

  SearchState initial_state() const;

  /// Copy of `state` with `block` anchored at `state.spaces[space]`.
  SearchState place(const SearchState& state, std::uint32_t block, std::size_t space) const;
  void place_in(SearchState& state, std::uint32_t block, std::size_t space) const;

  /// Successors from the first selectable space that admits a block; dead
  /// spaces met on the way are dropped from the successors' space lists.
  std::vector<SearchState> expand(const SearchState& state, std::size_t w) const;

  /// Width-1 completion; offers the finished layout to `incumbent` and returns
  /// its placed volume.
  Volume greedy_rollout(const SearchState& state, Incumbent& incumbent) const;

  /// Restarting beam search until `deadline` (or the evaluation cap).
  SearchResult run(Clock::time_point deadline, const ProgressCallback& progress = {}) const;

  /// Dose at the pool top of a block placed at height z.
  double block_dose(std::uint32_t block, Length z) const;

  const Instance& instance() const { return *instance_; }
  const BlockList& blocks() const { return *blocks_; }
  const SearchConfig& config() const { return config_; }
  const BlockSelector& selector() const { return selector_; }

 private:
  struct DoseLayer {
    Length twice_center;  // 2 × (z offset + h/2) of the boxes in this layer
    double gamma_activity;
  };

  std::vector<std::uint32_t> select(const SearchState& state, const Space& space, std::size_t w) const;
  void drop_unusable(SearchState& state) const;

  const Instance* instance_;
  const BlockList* blocks_;
  SearchConfig config_;
  BlockSelector selector_;
  std::vector<std::vector<DoseLayer>> dose_layers_;
};

/// Expands block placements to per-box placements.
Layout expand_layout(const std::vector<PlacedBlock>& placements, const BlockList& blocks);

/// Convenience: restarting beam search on pre-generated blocks with the clock
/// starting now.
SearchResult beam_search(const Instance& instance, const BlockList& blocks, const SearchConfig& config,
                         const ProgressCallback& progress = {});

}  // namespace nwpack
