#include "nwpack/space_manager.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace nwpack {

bool fits(const Dims& block, const Space& space) {
  return block.l <= space.dims.l && block.w <= space.dims.w && block.h <= space.dims.h;
}

std::optional<std::size_t> select_space(std::span<const Space> spaces) {
  if (spaces.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < spaces.size(); ++i) {
    const Space& a = spaces[i];
    const Space& b = spaces[best];
    if (a.anchor.z != b.anchor.z) {
      if (a.anchor.z < b.anchor.z) best = i;
    } else if (a.anchor.x != b.anchor.x) {
      if (a.anchor.x < b.anchor.x) best = i;
    } else if (a.anchor.y != b.anchor.y) {
      if (a.anchor.y < b.anchor.y) best = i;
    } else if (a.volume() > b.volume()) {
      best = i;
    }
  }
  return best;
}

std::vector<Space> residual_spaces(const Space& space, const Dims& block) {
  if (!fits(block, space))
    throw std::invalid_argument(fmt::format("block {}x{}x{} does not fit space {}x{}x{}", block.l, block.w, block.h,
                                            space.dims.l, space.dims.w, space.dims.h));
  const Point& a = space.anchor;
  const Dims& s = space.dims;
  std::vector<Space> out;
  out.reserve(3);
  if (s.l > block.l) out.push_back({{a.x + block.l, a.y, a.z}, {s.l - block.l, s.w, s.h}});
  if (s.w > block.w) out.push_back({{a.x, a.y + block.w, a.z}, {s.l, s.w - block.w, s.h}});
  if (s.h > block.h) out.push_back({{a.x, a.y, a.z + block.h}, {s.l, s.w, s.h - block.h}});
  return out;
}

std::vector<Space> subtract_block(const Space& space, const Cuboid& region) {
  if (!space.interiors_intersect(region)) return {space};
  const Cuboid cut = space.intersection(region);
  const Point lo = space.anchor;
  const Point hi = space.far_corner();
  const Point clo = cut.anchor;
  const Point chi = cut.far_corner();
  const Dims& s = space.dims;

  std::vector<Space> out;
  out.reserve(6);
  if (clo.x > lo.x) out.push_back({lo, {clo.x - lo.x, s.w, s.h}});
  if (chi.x < hi.x) out.push_back({{chi.x, lo.y, lo.z}, {hi.x - chi.x, s.w, s.h}});
  if (clo.y > lo.y) out.push_back({lo, {s.l, clo.y - lo.y, s.h}});
  if (chi.y < hi.y) out.push_back({{lo.x, chi.y, lo.z}, {s.l, hi.y - chi.y, s.h}});
  if (clo.z > lo.z) out.push_back({lo, {s.l, s.w, clo.z - lo.z}});
  if (chi.z < hi.z) out.push_back({{lo.x, lo.y, chi.z}, {s.l, s.w, hi.z - chi.z}});
  return out;
}

namespace {

// Spaces flagged as not fresh are assumed mutually non-nested, so only pairs
// involving a fresh space need the containment test.
void prune_with(SpaceList& spaces, const std::vector<char>& fresh) {
  const std::size_t n = spaces.size();
  struct Box {
    Length lo[3];
    Length hi[3];
  };
  std::vector<Box> box(n);
  std::vector<std::size_t> fresh_idx;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = spaces[i].anchor;
    const Point b = spaces[i].far_corner();
    box[i] = {{a.x, a.y, a.z}, {b.x, b.y, b.z}};
    if (fresh[i]) fresh_idx.push_back(i);
  }
  std::vector<char> dead(n, 0);
  const auto killed_by = [&](std::size_t i, std::size_t j) {
    const Box& p = box[i];
    const Box& q = box[j];
    if (q.lo[0] > p.lo[0] || q.hi[0] < p.hi[0] || q.lo[1] > p.lo[1] || q.hi[1] < p.hi[1] || q.lo[2] > p.lo[2] ||
        q.hi[2] < p.hi[2])
      return false;
    if (i == j || dead[j]) return false;
    // Equal spaces: keep the earlier one.
    return !(spaces[i] == spaces[j] && i < j);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (fresh[i]) {
      for (std::size_t j = 0; j < n; ++j)
        if (killed_by(i, j)) {
          dead[i] = 1;
          break;
        }
    } else {
      for (std::size_t j : fresh_idx)
        if (killed_by(i, j)) {
          dead[i] = 1;
          break;
        }
    }
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!dead[i]) spaces[k++] = spaces[i];
  spaces.resize(k);
}

}  // namespace

void prune_contained(SpaceList& spaces) { prune_with(spaces, std::vector<char>(spaces.size(), 1)); }

SpaceList update_spaces(const SpaceList& spaces, std::size_t chosen, const Cuboid& region) {
  if (chosen >= spaces.size() || !(spaces[chosen].anchor == region.anchor))
    throw std::invalid_argument("placed region must sit at the chosen space's anchor");
  SpaceList out;
  std::vector<char> fresh;
  out.reserve(spaces.size() + 6);
  fresh.reserve(spaces.size() + 6);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (i == chosen) continue;
    if (!spaces[i].interiors_intersect(region)) {
      out.push_back(spaces[i]);
      fresh.push_back(0);
      continue;
    }
    for (const Space& s : subtract_block(spaces[i], region)) {
      out.push_back(s);
      fresh.push_back(1);
    }
  }
  for (const Space& s : residual_spaces(spaces.at(chosen), region.dims)) {
    out.push_back(s);
    fresh.push_back(1);
  }
  prune_with(out, fresh);
  return out;
}

}  // namespace nwpack
