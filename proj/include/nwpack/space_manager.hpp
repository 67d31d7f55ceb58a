#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nwpack/core_model.hpp"

namespace nwpack {

/// A free cuboid of the pool. Spaces in a list may overlap one another.
using Space = Cuboid;
using SpaceList = std::vector<Space>;

bool fits(const Dims& block, const Space& space);

/// Index of the lowest, then leftmost space: minimal (z, x, y), then larger
/// volume, then earlier position. Empty input gives nullopt.
std::optional<std::size_t> select_space(std::span<const Space> spaces);

/// The three maximal free cuboids left when a block of `block` dims is put at
/// the space anchor: beyond it in x, in y and in z. Zero-thickness results are
/// omitted. Throws std::invalid_argument if the block does not fit.
std::vector<Space> residual_spaces(const Space& space, const Dims& block);

/// Maximal slabs of `space` outside `region` (up to six). A space whose interior
/// misses the region is returned unchanged.
std::vector<Space> subtract_block(const Space& space, const Cuboid& region);

/// Removes every space contained in another (the first of equal spaces survives).
void prune_contained(SpaceList& spaces);

/// Space-list update after placing `region` at the anchor of `spaces[chosen]`:
/// the chosen space is replaced by its residuals, every other space touching
/// the region is cut back, and contained spaces are pruned. `spaces` must
/// already be free of nested pairs, as every list this function returns is.
SpaceList update_spaces(const SpaceList& spaces, std::size_t chosen, const Cuboid& region);

}  // namespace nwpack
