#include "nwpack/generator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace nwpack {

std::span<const Nuclide> default_nuclides() {
  // Air-kerma dose-rate constants converted to Sv·m²/(Bq·h).
  static constexpr Nuclide kTable[] = {
      {"Co-60", 3.70e-13},  {"Cs-134", 2.35e-13}, {"Co-58", 1.52e-13}, {"Mn-54", 1.28e-13},
      {"Cs-137", 9.27e-14}, {"Sb-125", 7.20e-14}, {"Ag-110m", 4.1e-13}, {"Am-241", 3.1e-15},
      {"Eu-154", 1.9e-13},  {"Nb-94", 2.3e-13},  {"Fe-55", 5.0e-16},   {"Ni-63", 1.0e-16},
  };
  return kTable;
}

void FamilySpec::validate() const {
  if (type_count < 1) throw GenerationError("family needs at least one box type");
  if (instances < 0) throw GenerationError("instance count must be nonnegative");
  if (target_boxes < type_count)
    throw GenerationError(fmt::format("{} boxes cannot cover {} box types", target_boxes, type_count));
  if (dim_min < 1 || dim_max < dim_min) throw GenerationError("dimension range is empty");
  if (dim_min > pool.length || dim_min > pool.width || dim_min > pool.height)
    throw GenerationError(fmt::format("dimension range [{}, {}] exceeds the pool", dim_min, dim_max));
  if (!(activity_min > 0.0) || activity_max < activity_min) throw GenerationError("activity range is empty");
  if (!(volume_low > 0.0) || volume_high < volume_low) throw GenerationError("volume band is empty");
  if (!(type_volume_spread > 0.0) || type_volume_spread >= 1.0)
    throw GenerationError("type volume spread must lie in (0, 1)");
  if (!(grid_fill_low >= 0.0) || grid_fill_high < grid_fill_low) throw GenerationError("grid fill band is empty");
  for (double g : gammas)
    if (!(g >= 0.0)) throw GenerationError("dose-rate constants must be nonnegative");
}

const std::vector<std::pair<int, int>>& family_table() {
  static const std::vector<std::pair<int, int>> kTable = {
      {1, 205},  {3, 150},  {5, 136},  {8, 134},  {10, 132}, {12, 132}, {15, 131}, {20, 130},
      {30, 130}, {40, 128}, {50, 130}, {60, 129}, {70, 130}, {80, 130}, {90, 129}, {100, 129},
  };
  return kTable;
}

FamilySpec table_family(std::string_view name, std::uint64_t seed, int instances) {
  const auto& table = family_table();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (name == fmt::format("set{}", i + 1)) {
      FamilySpec s;
      s.name = std::string(name);
      s.type_count = table[i].first;
      s.target_boxes = table[i].second;
      s.instances = instances;
      s.seed = seed;
      return s;
    }
  }
  throw GenerationError(fmt::format("unknown family '{}' (expected set1 … set{})", name, table.size()));
}

std::vector<FamilySpec> all_table_families(std::uint64_t seed, int instances) {
  std::vector<FamilySpec> out;
  for (std::size_t i = 0; i < family_table().size(); ++i)
    out.push_back(table_family(fmt::format("set{}", i + 1), seed, instances));
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr int kMaxAttempts = 200000;

// Identical boxes with fixed orientation cannot beat the axis-aligned grid.
double grid_fill(const Dims& d, int count, const Pool& pool) {
  const Volume fit = (pool.length / d.l) * (pool.width / d.w) * (pool.height / d.h);
  return static_cast<double>(std::min<Volume>(fit, count) * d.volume()) / static_cast<double>(pool.volume());
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t master, std::string_view family, int index) {
  return splitmix64(splitmix64(master ^ fnv1a(family)) + static_cast<std::uint64_t>(index));
}

Instance generate_instance(const FamilySpec& spec, int index) {
  spec.validate();
  const std::uint64_t seed = instance_seed(spec.seed, spec.name, index);
  std::mt19937_64 rng(seed);

  const int types = spec.type_count;
  const Pool& pool = spec.pool;
  const double pool_volume = static_cast<double>(pool.volume());
  const double mean_volume = pool_volume / spec.target_boxes;

  // A single type must hit the volume band on its own; several types only need
  // to straddle the mean.
  double v_lo = mean_volume * (1.0 - spec.type_volume_spread);
  double v_hi = mean_volume * (1.0 + spec.type_volume_spread);
  if (types == 1) {
    v_lo = mean_volume * spec.volume_low;
    v_hi = mean_volume * spec.volume_high;
  }

  std::vector<int> counts(static_cast<std::size_t>(types), 1);
  {
    std::uniform_int_distribution<int> pick(0, types - 1);
    for (int extra = spec.target_boxes - types; extra > 0; --extra) ++counts[static_cast<std::size_t>(pick(rng))];
  }

  std::uniform_int_distribution<Length> dim_l(spec.dim_min, std::min(spec.dim_max, pool.length));
  std::uniform_int_distribution<Length> dim_w(spec.dim_min, std::min(spec.dim_max, pool.width));
  std::uniform_int_distribution<Length> dim_h(spec.dim_min, std::min(spec.dim_max, pool.height));
  const auto draw_dims = [&]() -> Dims {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const Dims d{dim_l(rng), dim_w(rng), dim_h(rng)};
      const double v = static_cast<double>(d.volume());
      if (v < v_lo || v > v_hi) continue;
      if (types == 1) {
        const double g = grid_fill(d, counts.front(), pool);
        if (g < spec.grid_fill_low || g > spec.grid_fill_high) continue;
      }
      return d;
    }
    throw GenerationError(fmt::format("family {}: no box dimensions in range give a volume near {:.0f}",
                                      spec.name, mean_volume));
  };

  std::vector<Dims> dims(static_cast<std::size_t>(types));
  bool accepted = false;
  for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
    double total = 0.0;
    for (int t = 0; t < types; ++t) {
      dims[static_cast<std::size_t>(t)] = draw_dims();
      total += static_cast<double>(dims[static_cast<std::size_t>(t)].volume()) * counts[static_cast<std::size_t>(t)];
    }
    accepted = total >= spec.volume_low * pool_volume && total <= spec.volume_high * pool_volume;
  }
  if (!accepted)
    throw GenerationError(fmt::format("family {}: could not reach the total-volume band", spec.name));

  std::vector<double> gammas = spec.gammas;
  if (gammas.empty())
    for (const Nuclide& n : default_nuclides()) gammas.push_back(n.gamma);
  std::uniform_int_distribution<std::size_t> pick_gamma(0, gammas.size() - 1);
  std::uniform_real_distribution<double> log_activity(std::log(spec.activity_min), std::log(spec.activity_max));

  Instance inst;
  inst.name = fmt::format("{}_{:03d}", spec.name, index);
  inst.pool = pool;
  for (int t = 0; t < types; ++t) {
    BoxType b;
    b.id = t;
    b.dims = dims[static_cast<std::size_t>(t)];
    b.count = counts[static_cast<std::size_t>(t)];
    b.activity = std::exp(log_activity(rng));
    b.gamma = gammas[pick_gamma(rng)];
    inst.box_types.push_back(b);
  }
  inst.provenance = Provenance{spec.name, seed, types, spec.target_boxes};
  inst.validate();
  return inst;
}

std::vector<Instance> generate_family(const FamilySpec& spec) {
  spec.validate();
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(spec.instances));
  for (int i = 0; i < spec.instances; ++i) out.push_back(generate_instance(spec, i));
  return out;
}

}  // namespace nwpack
