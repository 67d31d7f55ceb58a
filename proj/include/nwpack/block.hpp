#pragma once

#include <compare>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nwpack/core_model.hpp"

namespace nwpack {

struct TypeCount {
  int type = 0;
  int count = 0;
  auto operator<=>(const TypeCount&) const = default;
};

struct Block;
using BlockPtr = std::shared_ptr<const Block>;

/// nx × ny × nz grid of identical boxes.
struct SimpleArray {
  int type = 0;
  int nx = 1;
  int ny = 1;
  int nz = 1;
};

/// Two child blocks; `first` sits at the block anchor, `second` at `second_offset`.
struct Composite {
  BlockPtr first;
  BlockPtr second;
  Axis direction = Axis::X;
  Point second_offset;
};

struct Block {
  Dims dims;
  std::vector<TypeCount> counts;  // sorted by type id, zero entries omitted
  Volume box_volume = 0;
  double dose_1m = 0.0;
  std::variant<SimpleArray, Composite> composition;

  Volume volume() const { return dims.volume(); }
  Volume waste_volume() const { return volume() - box_volume; }
  double fill_rate() const { return static_cast<double>(box_volume) / static_cast<double>(volume()); }
  int box_count() const;
  int required(int type) const;
  bool is_simple() const { return std::holds_alternative<SimpleArray>(composition); }
};

Block make_simple_block(const BoxType& type, int nx, int ny, int nz);

/// True iff every count in `required` is available in `inventory` (indexed by type id).
bool counts_feasible(const std::vector<TypeCount>& required, const std::vector<int>& inventory);

struct BoxOffset {
  int type = 0;
  Point offset;
  bool operator==(const BoxOffset&) const = default;
};

/// Flattens the composition tree into per-box offsets relative to the block anchor.
std::vector<BoxOffset> enumerate_boxes(const Block& block);

/// Structural identity used to deduplicate generated blocks: dimensions, the
/// per-type requirement vector and the 1 m dose rounded to 12 significant digits.
struct BlockKey {
  Dims dims;
  std::vector<TypeCount> counts;
  std::string dose;

  bool operator==(const BlockKey&) const = default;
};

BlockKey block_key(const Block& block);

struct BlockKeyHash {
  std::size_t operator()(const BlockKey& k) const;
};

}  // namespace nwpack
