#include "nwpack/block.hpp"

#include <fmt/format.h>

#include <functional>

namespace nwpack {

int Block::box_count() const {
  int n = 0;
  for (const auto& c : counts) n += c.count;
  return n;
}

int Block::required(int type) const {
  for (const auto& c : counts)
    if (c.type == type) return c.count;
  return 0;
}

Block make_simple_block(const BoxType& type, int nx, int ny, int nz) {
  Block b;
  b.dims = {type.dims.l * nx, type.dims.w * ny, type.dims.h * nz};
  const int n = nx * ny * nz;
  b.counts = {{type.id, n}};
  b.box_volume = type.volume() * n;
  b.dose_1m = type.dose_1m() * n;
  b.composition = SimpleArray{type.id, nx, ny, nz};
  return b;
}

bool counts_feasible(const std::vector<TypeCount>& required, const std::vector<int>& inventory) {
  for (const auto& c : required) {
    if (c.type < 0 || static_cast<std::size_t>(c.type) >= inventory.size()) return false;
    if (c.count > inventory[static_cast<std::size_t>(c.type)]) return false;
  }
  return true;
}

namespace {

void flatten(const Block& block, const Point& origin, std::vector<BoxOffset>& out) {
  if (const auto* s = std::get_if<SimpleArray>(&block.composition)) {
    const Length l = block.dims.l / s->nx;
    const Length w = block.dims.w / s->ny;
    const Length h = block.dims.h / s->nz;
    for (int k = 0; k < s->nz; ++k)
      for (int j = 0; j < s->ny; ++j)
        for (int i = 0; i < s->nx; ++i) out.push_back({s->type, origin + Point{i * l, j * w, k * h}});
    return;
  }
  const auto& c = std::get<Composite>(block.composition);
  flatten(*c.first, origin, out);
  flatten(*c.second, origin + c.second_offset, out);
}

}  // namespace

std::vector<BoxOffset> enumerate_boxes(const Block& block) {
  std::vector<BoxOffset> out;
  out.reserve(static_cast<std::size_t>(block.box_count()));
  flatten(block, {0, 0, 0}, out);
  return out;
}

BlockKey block_key(const Block& block) {
  return {block.dims, block.counts, fmt::format("{:.11e}", block.dose_1m)};
}

std::size_t BlockKeyHash::operator()(const BlockKey& k) const {
  std::size_t h = std::hash<std::string>{}(k.dose);
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(static_cast<std::size_t>(k.dims.l));
  mix(static_cast<std::size_t>(k.dims.w));
  mix(static_cast<std::size_t>(k.dims.h));
  for (const auto& c : k.counts) {
    mix(static_cast<std::size_t>(c.type));
    mix(static_cast<std::size_t>(c.count));
  }
  return h;
}

}  // namespace nwpack
