#include "nwpack/block_generation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace nwpack {

void BlockGenConfig::validate() const {
  if (max_blocks < 1) throw std::invalid_argument("max_blocks must be at least 1");
  if (!(min_fill_rate > 0.0 && min_fill_rate <= 1.0))
    throw std::invalid_argument(fmt::format("min_fill_rate must lie in (0, 1], got {}", min_fill_rate));
}

std::string_view to_string(CombineRejection r) {
  switch (r) {
    case CombineRejection::DominanceViolated: return "dominance-violated";
    case CombineRejection::Oversize: return "oversize";
    case CombineRejection::InventoryInfeasible: return "inventory-infeasible";
    case CombineRejection::FillRateTooLow: return "fill-rate-too-low";
  }
  return "unknown";
}

bool admissible(const Dims& dims, const Pool& pool) {
  return dims.l <= pool.length && dims.w <= pool.width && dims.h <= pool.height;
}

BlockList generate_simple_blocks(const Instance& instance) {
  struct Shape {
    Volume volume;
    int type, nx, ny, nz;
  };
  std::vector<Shape> shapes;
  const Pool& pool = instance.pool;
  for (const BoxType& t : instance.box_types) {
    if (t.count <= 0) continue;
    const int max_x = static_cast<int>(pool.length / t.dims.l);
    const int max_y = static_cast<int>(pool.width / t.dims.w);
    const int max_z = static_cast<int>(pool.height / t.dims.h);
    for (int nx = 1; nx <= max_x && nx <= t.count; ++nx)
      for (int ny = 1; ny <= max_y && nx * ny <= t.count; ++ny)
        for (int nz = 1; nz <= max_z && nx * ny * nz <= t.count; ++nz)
          shapes.push_back({t.volume() * nx * ny * nz, t.id, nx, ny, nz});
  }
  std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) {
    return std::tie(b.volume, a.type, a.nx, a.ny, a.nz) < std::tie(a.volume, b.type, b.nx, b.ny, b.nz);
  });
  BlockList out;
  out.reserve(shapes.size());
  for (const Shape& s : shapes)
    out.push_back(std::make_shared<const Block>(make_simple_block(instance.type(s.type), s.nx, s.ny, s.nz)));
  return out;
}

namespace {

std::vector<TypeCount> merge_counts(const std::vector<TypeCount>& a, const std::vector<TypeCount>& b) {
  std::vector<TypeCount> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].type < b[j].type)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].type < a[i].type) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].type, a[i].count + b[j].count});
      ++i;
      ++j;
    }
  }
  return out;
}

bool merged_feasible(const std::vector<TypeCount>& a, const std::vector<TypeCount>& b, const Instance& instance) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int type, n;
    if (j == b.size() || (i < a.size() && a[i].type < b[j].type)) {
      type = a[i].type;
      n = a[i++].count;
    } else if (i == a.size() || b[j].type < a[i].type) {
      type = b[j].type;
      n = b[j++].count;
    } else {
      type = a[i].type;
      n = a[i++].count + b[j++].count;
    }
    if (n > instance.type(type).count) return false;
  }
  return true;
}

}  // namespace

CombineResult combine(const BlockPtr& first, const BlockPtr& second, Axis direction, const Instance& instance,
                      const BlockGenConfig& config) {
  const Dims& a = first->dims;
  const Dims& b = second->dims;
  Dims dims;
  Point offset;
  bool dominant = false;
  switch (direction) {
    case Axis::X:
      dominant = a.w * a.h >= b.w * b.h;
      offset = {a.l, 0, 0};
      dims = {a.l + b.l, std::max(a.w, b.w), std::max(a.h, b.h)};
      break;
    case Axis::Y:
      dominant = a.l * a.h >= b.l * b.h;
      offset = {0, a.w, 0};
      dims = {std::max(a.l, b.l), a.w + b.w, std::max(a.h, b.h)};
      break;
    case Axis::Z:
      dominant = a.l * a.w >= b.l * b.w;
      offset = {0, 0, a.h};
      dims = {std::max(a.l, b.l), std::max(a.w, b.w), a.h + b.h};
      break;
  }
  if (!dominant) return CombineRejection::DominanceViolated;
  if (!admissible(dims, instance.pool)) return CombineRejection::Oversize;
  if (!merged_feasible(first->counts, second->counts, instance)) return CombineRejection::InventoryInfeasible;
  const Volume box_volume = first->box_volume + second->box_volume;
  if (static_cast<double>(box_volume) < config.min_fill_rate * static_cast<double>(dims.volume()))
    return CombineRejection::FillRateTooLow;

  Block out;
  out.dims = dims;
  out.counts = merge_counts(first->counts, second->counts);
  out.box_volume = box_volume;
  out.dose_1m = first->dose_1m + second->dose_1m;
  out.composition = Composite{first, second, direction, offset};
  return out;
}

BlockList generate_blocks(const Instance& instance, const BlockGenConfig& config) {
  config.validate();
  BlockList blocks = generate_simple_blocks(instance);
  if (blocks.size() > config.max_blocks) blocks.resize(config.max_blocks);

  std::unordered_set<BlockKey, BlockKeyHash> known;
  for (const auto& b : blocks) known.insert(block_key(*b));

  BlockList parents = blocks;
  constexpr Axis kDirections[] = {Axis::X, Axis::Y, Axis::Z};
  while (blocks.size() < config.max_blocks) {
    const std::size_t room = config.max_blocks - blocks.size();
    BlockList fresh;
    std::unordered_set<BlockKey, BlockKeyHash> fresh_keys;
    std::size_t novel = 0;
    const std::size_t partners = blocks.size();
    // Once `room` novel blocks are queued nothing later in the round can be admitted.
    for (std::size_t i = 0; i < parents.size() && novel < room; ++i) {
      for (std::size_t j = 0; j < partners && novel < room; ++j) {
        for (Axis d : kDirections) {
          auto result = combine(parents[i], blocks[j], d, instance, config);
          auto* block = std::get_if<Block>(&result);
          if (block == nullptr) continue;
          BlockKey key = block_key(*block);
          if (fresh_keys.contains(key)) continue;
          if (!known.contains(key)) ++novel;
          fresh_keys.insert(key);
          fresh.push_back(std::make_shared<const Block>(std::move(*block)));
          if (novel >= room) break;
        }
      }
    }

    bool added = false;
    for (const auto& b : fresh) {
      if (blocks.size() >= config.max_blocks) break;
      if (known.insert(block_key(*b)).second) {
        blocks.push_back(b);
        added = true;
      }
    }
    if (!added) break;
    parents = std::move(fresh);
  }
  return blocks;
}

std::string dump_blocks(const BlockList& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = *blocks[i];
    std::string counts;
    for (const auto& c : b.counts) counts += fmt::format("{}{}:{}", counts.empty() ? "" : ",", c.type, c.count);
    out += fmt::format("{} {}x{}x{} {} {} {:.6f} {:.6e}\n", i, b.dims.l, b.dims.w, b.dims.h,
                       b.is_simple() ? "simple" : "composite", counts, b.fill_rate(), b.dose_1m);
  }
  return out;
}

}  // namespace nwpack
