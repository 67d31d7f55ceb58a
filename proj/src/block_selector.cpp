#include "nwpack/block_selector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace nwpack {

ReachableSums::ReachableSums(std::span<const ValueCount> items, Length limit)
    : limit_(std::max<Length>(limit, 0)), bits_(static_cast<std::size_t>(limit_ / 64 + 1), 0) {
  bits_[0] = 1;
  for (const ValueCount& item : items) {
    if (item.value <= 0 || item.count <= 0 || item.value > limit_) continue;
    // Copies beyond limit/value can never be used.
    int remaining = static_cast<int>(std::min<Length>(item.count, limit_ / item.value));
    // Binary splitting turns the bounded item into 0/1 items of sizes 1, 2, 4, ….
    for (int chunk = 1; remaining > 0; chunk *= 2) {
      const int take = std::min(chunk, remaining);
      shift_or(item.value * take);
      remaining -= take;
    }
  }
}

void ReachableSums::shift_or(Length shift) {
  if (shift > limit_) return;
  const std::size_t words = static_cast<std::size_t>(shift / 64);
  const unsigned bit = static_cast<unsigned>(shift % 64);
  for (std::size_t i = bits_.size(); i-- > words;) {
    std::uint64_t v = bits_[i - words] << bit;
    if (bit != 0 && i - words >= 1) v |= bits_[i - words - 1] >> (64 - bit);
    bits_[i] |= v;
  }
  const unsigned tail = static_cast<unsigned>(limit_ % 64) + 1;
  if (tail < 64) bits_.back() &= (std::uint64_t{1} << tail) - 1;
}

Length ReachableSums::best_at_most(Length capacity) const {
  if (capacity <= 0) return 0;
  const Length cap = std::min(capacity, limit_);
  std::size_t word = static_cast<std::size_t>(cap / 64);
  const unsigned top = static_cast<unsigned>(cap % 64);
  std::uint64_t mask = top == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (top + 1)) - 1;
  for (;;) {
    const std::uint64_t v = bits_[word] & mask;
    if (v != 0) return static_cast<Length>(word * 64 + 63 - static_cast<std::size_t>(std::countl_zero(v)));
    if (word == 0) return 0;
    --word;
    mask = ~std::uint64_t{0};
  }
}

Length max_dim_combination(std::span<const ValueCount> items, Length capacity) {
  if (capacity <= 0) return 0;
  return ReachableSums(items, capacity).best_at_most(capacity);
}

DimInventory DimInventory::from_counts(const Instance& instance, const std::vector<int>& remaining) {
  DimInventory inv;
  for (const BoxType& t : instance.box_types) {
    const int n = remaining.at(static_cast<std::size_t>(t.id));
    if (n <= 0) continue;
    inv.axes[0].push_back({t.dims.l, n});
    inv.axes[1].push_back({t.dims.w, n});
    inv.axes[2].push_back({t.dims.h, n});
  }
  for (auto& axis : inv.axes) {
    std::sort(axis.begin(), axis.end(), [](const ValueCount& a, const ValueCount& b) { return a.value < b.value; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (out > 0 && axis[out - 1].value == axis[i].value) {
        axis[out - 1].count += axis[i].count;
      } else {
        axis[out++] = axis[i];
      }
    }
    axis.resize(out);
  }
  return inv;
}

DimInventory DimInventory::after_reserving(const Instance& instance, const std::vector<int>& remaining,
                                           const Block& block) {
  std::vector<int> left = remaining;
  for (const auto& c : block.counts) left.at(static_cast<std::size_t>(c.type)) -= c.count;
  return from_counts(instance, left);
}

ScoreParams ScoreParams::from_blocks(const BlockList& blocks, double alpha) {
  ScoreParams p;
  p.alpha = alpha;
  if (blocks.empty()) return p;
  p.dose_min = p.dose_max = blocks.front()->dose_1m;
  for (const auto& b : blocks) {
    p.dose_min = std::min(p.dose_min, b->dose_1m);
    p.dose_max = std::max(p.dose_max, b->dose_1m);
  }
  return p;
}

double ScoreParams::normalized_dose(double dose_1m) const {
  if (!(dose_max > dose_min)) return 0.0;
  return (dose_1m - dose_min) / (dose_max - dose_min);
}

namespace {

using AxisTables = std::array<ReachableSums, 3>;

Volume loss_from_tables(const Block& block, const Space& space, const AxisTables& tables) {
  const Dims& b = block.dims;
  const Dims& s = space.dims;
  const Length l = b.l + tables[0].best_at_most(s.l - b.l);
  const Length w = b.w + tables[1].best_at_most(s.w - b.w);
  const Length h = b.h + tables[2].best_at_most(s.h - b.h);
  return space.volume() - l * w * h;
}

AxisTables tables_for(const DimInventory& inv, const Space& space) {
  return {ReachableSums(inv.axes[0], space.dims.l), ReachableSums(inv.axes[1], space.dims.w),
          ReachableSums(inv.axes[2], space.dims.h)};
}

double score_from_loss(const Block& block, const Space& space, Volume loss, const ScoreParams& params) {
  const double volumetric = static_cast<double>(block.volume() - loss - block.waste_volume()) /
                            static_cast<double>(space.volume());
  return volumetric + params.alpha * params.normalized_dose(block.dose_1m);
}

}  // namespace

Volume v_loss(const Block& block, const Space& space, const DimInventory& inventory) {
  if (!fits(block.dims, space))
    throw std::invalid_argument(fmt::format("block {}x{}x{} does not fit space {}x{}x{}", block.dims.l,
                                            block.dims.w, block.dims.h, space.dims.l, space.dims.w, space.dims.h));
  return loss_from_tables(block, space, tables_for(inventory, space));
}

double score_block(const Block& block, const Space& space, const DimInventory& inventory, const ScoreParams& params) {
  return score_from_loss(block, space, v_loss(block, space, inventory), params);
}

BlockSelector::BlockSelector(const Instance& instance, const BlockList& blocks, ScoreParams params)
    : instance_(&instance), blocks_(&blocks), params_(params) {
  std::size_t max_id = 0;
  for (const BoxType& t : instance.box_types) max_id = std::max(max_id, static_cast<std::size_t>(t.id));
  slots_.assign(instance.box_types.empty() ? 0 : max_id + 1, {0, 0, 0});
  for (std::size_t a = 0; a < 3; ++a) {
    auto& vals = values_[a];
    for (const BoxType& t : instance.box_types) vals.push_back(t.dims[static_cast<Axis>(a)]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (const BoxType& t : instance.box_types) {
      const auto it = std::lower_bound(vals.begin(), vals.end(), t.dims[static_cast<Axis>(a)]);
      slots_[static_cast<std::size_t>(t.id)][a] = static_cast<std::uint32_t>(it - vals.begin());
    }
  }
}

std::vector<std::uint32_t> BlockSelector::select(std::span<const std::uint32_t> candidates, const Space& space,
                                                 const std::vector<int>& remaining, std::size_t w) const {
  if (w == 0) throw std::invalid_argument("selection width must be at least 1");
  const Instance& inst = *instance_;
  const BlockList& blocks = *blocks_;

  // Per-axis copies of each distinct extent; beyond limit/value a copy can
  // never be used, so tables only differ where the capped count changes.
  const std::array<Length, 3> limit{space.dims.l, space.dims.w, space.dims.h};
  std::array<std::vector<ValueCount>, 3> base_items;
  for (std::size_t a = 0; a < 3; ++a)
    for (Length v : values_[a]) base_items[a].push_back({v, 0});
  for (const BoxType& t : inst.box_types) {
    const auto id = static_cast<std::size_t>(t.id);
    for (std::size_t a = 0; a < 3; ++a) base_items[a][slots_[id][a]].count += std::max(0, remaining[id]);
  }
  const auto capped = [&](std::size_t a, std::uint32_t slot, int n) {
    return static_cast<int>(std::min<Length>(n, limit[a] / base_items[a][slot].value));
  };

  using Key = std::vector<std::pair<std::uint32_t, int>>;
  std::array<std::optional<ReachableSums>, 3> base;
  std::array<std::map<Key, ReachableSums>, 3> variants;
  std::vector<ValueCount> scratch;
  Key key;

  const auto table_for = [&](std::size_t a, const Block& b) -> const ReachableSums& {
    key.clear();
    for (const auto& c : b.counts) key.push_back({slots_[static_cast<std::size_t>(c.type)][a], c.count});
    std::sort(key.begin(), key.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (out > 0 && key[out - 1].first == key[i].first) {
        key[out - 1].second += key[i].second;
      } else {
        key[out++] = key[i];
      }
    }
    key.resize(out);
    out = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
      const std::uint32_t slot = key[i].first;
      const int total = base_items[a][slot].count;
      const int after = capped(a, slot, total - key[i].second);
      if (after != capped(a, slot, total)) key[out++] = {slot, after};
    }
    key.resize(out);

    if (key.empty()) {
      if (!base[a]) base[a].emplace(base_items[a], limit[a]);
      return *base[a];
    }
    auto it = variants[a].find(key);
    if (it == variants[a].end()) {
      scratch = base_items[a];
      for (const auto& [slot, n] : key) scratch[slot].count = n;
      it = variants[a].emplace(key, ReachableSums(scratch, limit[a])).first;
    }
    return it->second;
  };

  struct Ranked {
    double score;
    Volume box_volume;
    double dose;
    std::uint32_t index;
  };
  const auto better = [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.box_volume != b.box_volume) return a.box_volume > b.box_volume;
    if (a.dose != b.dose) return a.dose > b.dose;
    return a.index < b.index;
  };
  const auto score_with = [&](const Block& b, const ReachableSums& tl, const ReachableSums& tw,
                              const ReachableSums& th) {
    const Length l = b.dims.l + tl.best_at_most(space.dims.l - b.dims.l);
    const Length wd = b.dims.w + tw.best_at_most(space.dims.w - b.dims.w);
    const Length h = b.dims.h + th.best_at_most(space.dims.h - b.dims.h);
    return score_from_loss(b, space, space.volume() - l * wd * h, params_);
  };

  // Reserving a block's own boxes can only shrink the extension tables, so the
  // score against the full inventory bounds the true score from above.
  for (std::size_t a = 0; a < 3; ++a) base[a].emplace(base_items[a], limit[a]);
  std::vector<Ranked> bounds;
  for (std::uint32_t idx : candidates) {
    const Block& b = *blocks[idx];
    if (!fits(b.dims, space) || !counts_feasible(b.counts, remaining)) continue;
    bounds.push_back({score_with(b, *base[0], *base[1], *base[2]), b.box_volume, b.dose_1m, idx});
  }
  std::sort(bounds.begin(), bounds.end(), better);

  // Exact scores in bound order; stop once the w-th best beats every bound left.
  std::vector<Ranked> ranked;  // heap, worst of the kept on top
  for (const Ranked& ub : bounds) {
    if (ranked.size() == w && ub.score < ranked.front().score) break;
    const Block& b = *blocks[ub.index];
    Ranked exact = ub;
    exact.score = score_with(b, table_for(0, b), table_for(1, b), table_for(2, b));
    if (ranked.size() < w) {
      ranked.push_back(exact);
      std::push_heap(ranked.begin(), ranked.end(), better);
    } else if (better(exact, ranked.front())) {
      std::pop_heap(ranked.begin(), ranked.end(), better);
      ranked.back() = exact;
      std::push_heap(ranked.begin(), ranked.end(), better);
    }
  }
  std::sort(ranked.begin(), ranked.end(), better);
  const std::size_t keep = ranked.size();

  std::vector<std::uint32_t> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(ranked[i].index);
  return out;
}

std::vector<std::uint32_t> select_blocks(const Instance& instance, const BlockList& blocks, const Space& space,
                                         const std::vector<int>& remaining, std::size_t w,
                                         const ScoreParams& params) {
  std::vector<std::uint32_t> all(blocks.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  return BlockSelector(instance, blocks, params).select(all, space, remaining, w);
}

}  // namespace nwpack
