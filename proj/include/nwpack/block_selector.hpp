#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nwpack/block.hpp"
#include "nwpack/block_generation.hpp"
#include "nwpack/core_model.hpp"
#include "nwpack/space_manager.hpp"

namespace nwpack {

struct ValueCount {
  Length value = 0;
  int count = 0;
};

/// Set of sums Σ c_j·v_j (0 ≤ c_j ≤ count_j) that do not exceed `limit`,
/// built by bounded subset-sum over a bitset.
class ReachableSums {
 public:
  ReachableSums() = default;
  ReachableSums(std::span<const ValueCount> items, Length limit);

  /// Largest reachable sum ≤ capacity (0 for capacity ≤ 0).
  Length best_at_most(Length capacity) const;
  Length limit() const { return limit_; }

 private:
  void shift_or(Length shift);

  Length limit_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Largest Σ c_j·v_j ≤ capacity with 0 ≤ c_j ≤ count_j.
Length max_dim_combination(std::span<const ValueCount> items, Length capacity);

/// Remaining boxes' extents per axis, with multiplicities merged by value.
struct DimInventory {
  std::array<std::vector<ValueCount>, 3> axes;

  const std::vector<ValueCount>& axis(Axis a) const { return axes[static_cast<std::size_t>(a)]; }

  /// `remaining` is indexed by box type id.
  static DimInventory from_counts(const Instance& instance, const std::vector<int>& remaining);
  /// Inventory left once `block`'s own boxes are reserved.
  static DimInventory after_reserving(const Instance& instance, const std::vector<int>& remaining,
                                      const Block& block);
};

struct ScoreParams {
  double alpha = 0.6;
  double dose_min = 0.0;
  double dose_max = 0.0;

  /// Min/max 1 m dose over `blocks`.
  static ScoreParams from_blocks(const BlockList& blocks, double alpha);
  double normalized_dose(double dose_1m) const;
};

/// Space volume the block leaves unusable: V(s) − Π(block extent + best extension).
/// `inventory` must already exclude the block's own boxes. Throws
/// std::invalid_argument if the block does not fit.
Volume v_loss(const Block& block, const Space& space, const DimInventory& inventory);

/// (V(b) − V_loss − V_waste) / V(s) + α·A_nor, with V(b) the block's bounding volume.
double score_block(const Block& block, const Space& space, const DimInventory& inventory, const ScoreParams& params);

/// Scores blocks for one space with per-axis extension tables shared between
/// candidates that leave the same effective inventory.
class BlockSelector {
 public:
  BlockSelector(const Instance& instance, const BlockList& blocks, ScoreParams params);

  /// Up to `w` indices into the block list among `candidates`, best first. Only
  /// blocks that fit `space` and whose requirement is covered by `remaining`
  /// are considered. Ties: larger box volume, then larger dose, then lower index.
  std::vector<std::uint32_t> select(std::span<const std::uint32_t> candidates, const Space& space,
                                    const std::vector<int>& remaining, std::size_t w) const;

  const ScoreParams& params() const { return params_; }
  const BlockList& blocks() const { return *blocks_; }

 private:
  const Instance* instance_;
  const BlockList* blocks_;
  ScoreParams params_;
  // Distinct extents per axis, and each type's slot in them.
  std::array<std::vector<Length>, 3> values_;
  std::vector<std::array<std::uint32_t, 3>> slots_;
};

/// Convenience form over the whole block list.
std::vector<std::uint32_t> select_blocks(const Instance& instance, const BlockList& blocks, const Space& space,
                                         const std::vector<int>& remaining, std::size_t w,
                                         const ScoreParams& params);

}  // namespace nwpack
