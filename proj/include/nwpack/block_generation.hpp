#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nwpack/block.hpp"
#include "nwpack/core_model.hpp"

namespace nwpack {

struct BlockGenConfig {
  std::size_t max_blocks = 10000;
  double min_fill_rate = 0.98;

  /// Throws std::invalid_argument on a zero cap or a fill rate outside (0, 1].
  void validate() const;
};

enum class CombineRejection { DominanceViolated, Oversize, InventoryInfeasible, FillRateTooLow };

std::string_view to_string(CombineRejection r);

using CombineResult = std::variant<Block, CombineRejection>;

using BlockList = std::vector<BlockPtr>;

/// Block dims admissible in the pool: bl ≤ L, bw ≤ W, bh ≤ H.
bool admissible(const Dims& dims, const Pool& pool);

/// Every nx×ny×nz array of a single type that fits the pool and the inventory,
/// ordered by (volume desc, type id, nx, ny, nz).
BlockList generate_simple_blocks(const Instance& instance);

/// Concatenates `second` onto `first` along `direction`. Gates are applied in
/// order: cross-section dominance, pool admissibility, inventory, fill rate.
CombineResult combine(const BlockPtr& first, const BlockPtr& second, Axis direction, const Instance& instance,
                      const BlockGenConfig& config);

/// Simple blocks followed by rounds of pairwise concatenation until the cap is
/// reached or a round adds nothing new. Deterministic for fixed inputs.
BlockList generate_blocks(const Instance& instance, const BlockGenConfig& config);

/// One line per block: dims, counts, fill rate, 1 m dose.
std::string dump_blocks(const BlockList& blocks);

}  // namespace nwpack
