#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nwpack/core_model.hpp"

namespace nwpack {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Nuclide {
  std::string_view name;
  double gamma;  // Sv·m²/(Bq·t)
};

/// Gamma-emitting nuclides typical of reactor operating waste.
std::span<const Nuclide> default_nuclides();

struct FamilySpec {
  std::string name;
  int type_count = 1;
  Pool pool{587, 233, 220, 0.01};
  int instances = 100;
  int target_boxes = 205;
  Length dim_min = 25;
  Length dim_max = 120;
  double activity_min = 1e6;
  double activity_max = 1e12;
  std::vector<double> gammas;  // empty: the default nuclide table
  std::uint64_t seed = 0;
  /// Total box volume must land in [volume_low, volume_high] × pool volume.
  double volume_low = 0.95;
  double volume_high = 1.05;
  /// Each multi-type box volume stays within ±spread of pool volume / target_boxes.
  double type_volume_spread = 0.5;
  /// Single-type families only: fill of the best fixed-orientation grid packing
  /// (capped by the box count) must land in this band.
  double grid_fill_low = 0.83;
  double grid_fill_high = 0.88;

  /// Throws GenerationError when the spec cannot produce valid instances.
  void validate() const;
};

/// Names "set1" … "set16" with box-type counts and boxes per instance following
/// the benchmark table.
const std::vector<std::pair<int, int>>& family_table();
FamilySpec table_family(std::string_view name, std::uint64_t seed, int instances = 100);
std::vector<FamilySpec> all_table_families(std::uint64_t seed, int instances = 100);

/// Per-instance seed derived from the master seed and family name.
std::uint64_t instance_seed(std::uint64_t master, std::string_view family, int index);

Instance generate_instance(const FamilySpec& spec, int index);
std::vector<Instance> generate_family(const FamilySpec& spec);

}  // namespace nwpack
