#include "nwpack/core_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nwpack {

Cuboid Cuboid::intersection(const Cuboid& o) const {
  const Point a = far_corner();
  const Point b = o.far_corner();
  const Point lo{std::max(anchor.x, o.anchor.x), std::max(anchor.y, o.anchor.y),
                 std::max(anchor.z, o.anchor.z)};
  const Point hi{std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
  return {lo, {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z}};
}

int Instance::total_boxes() const {
  int n = 0;
  for (const auto& t : box_types) n += t.count;
  return n;
}

Volume Instance::total_box_volume() const {
  Volume v = 0;
  for (const auto& t : box_types) v += t.volume() * t.count;
  return v;
}

void Instance::validate() const {
  if (pool.length <= 0 || pool.width <= 0 || pool.height <= 0)
    throw InstanceError(fmt::format("pool dimensions must be positive, got {}x{}x{}",
                                    pool.length, pool.width, pool.height));
  if (!(pool.unit_scale > 0.0) || !std::isfinite(pool.unit_scale))
    throw InstanceError("pool unit scale must be positive");
  for (std::size_t i = 0; i < box_types.size(); ++i) {
    const BoxType& t = box_types[i];
    if (t.id != static_cast<int>(i))
      throw InstanceError(fmt::format("box type ids must be dense from 0; position {} has id {}", i, t.id));
    if (t.dims.l <= 0 || t.dims.w <= 0 || t.dims.h <= 0)
      throw InstanceError(fmt::format("box type {} has a non-positive dimension", t.id));
    if (t.dims.l > pool.length || t.dims.w > pool.width || t.dims.h > pool.height)
      throw InstanceError(fmt::format("box type {} ({}x{}x{}) does not fit the pool {}x{}x{}", t.id,
                                      t.dims.l, t.dims.w, t.dims.h, pool.length, pool.width, pool.height));
    if (t.count < 0) throw InstanceError(fmt::format("box type {} has negative count", t.id));
    if (!(t.activity >= 0.0) || !(t.gamma >= 0.0))
      throw InstanceError(fmt::format("box type {} has negative activity or dose-rate constant", t.id));
  }
}

double dose_rate_single(double gamma, double activity, double r_meters) {
  if (!(r_meters > 0.0)) throw std::domain_error(fmt::format("dose distance must be positive, got {}", r_meters));
  return gamma * activity / (r_meters * r_meters);
}

double placement_dose(const Placement& placement, const BoxType& type, const Pool& pool) {
  // Twice the distance keeps the half-height exact in integers.
  const Length twice_r = 2 * pool.height - (2 * placement.anchor.z + type.dims.h);
  const double r = 0.5 * static_cast<double>(twice_r) * pool.unit_scale;
  return dose_rate_single(type.gamma, type.activity, r);
}

std::size_t ValidationReport::count(Violation::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.message;
    out += '\n';
  }
  return out;
}

ValidationReport validate_layout(const Layout& layout, const Instance& instance) {
  ValidationReport report;
  const Cuboid pool = instance.pool.region();
  std::vector<int> used(instance.box_types.size(), 0);
  std::vector<std::pair<Cuboid, std::size_t>> boxes;
  boxes.reserve(layout.size());

  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Placement& p = layout[i];
    if (p.box_type_id < 0 || p.box_type_id >= instance.type_count()) {
      report.violations.push_back({Violation::Kind::UnknownType,
                                   fmt::format("placement {}: unknown box type {}", i, p.box_type_id)});
      continue;
    }
    const BoxType& t = instance.type(p.box_type_id);
    ++used[static_cast<std::size_t>(p.box_type_id)];
    const Cuboid c{p.anchor, t.dims};
    if (!pool.contains(c)) {
      report.violations.push_back(
          {Violation::Kind::OutOfBounds,
           fmt::format("placement {}: type {} at ({}, {}, {}) leaves the pool", i, p.box_type_id, p.anchor.x,
                       p.anchor.y, p.anchor.z)});
    }
    boxes.emplace_back(c, i);
  }

  // Sweep along x so only candidates with overlapping x-ranges are compared.
  std::sort(boxes.begin(), boxes.end(), [](const auto& a, const auto& b) {
    return a.first.anchor.x != b.first.anchor.x ? a.first.anchor.x < b.first.anchor.x : a.second < b.second;
  });
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Length x_end = boxes[i].first.far_corner().x;
    for (std::size_t j = i + 1; j < boxes.size() && boxes[j].first.anchor.x < x_end; ++j) {
      if (boxes[i].first.interiors_intersect(boxes[j].first)) {
        const auto [lo, hi] = std::minmax(boxes[i].second, boxes[j].second);
        report.violations.push_back(
            {Violation::Kind::Overlap, fmt::format("placements {} and {} overlap", lo, hi)});
      }
    }
  }

  for (std::size_t t = 0; t < used.size(); ++t) {
    if (used[t] > instance.box_types[t].count) {
      report.violations.push_back({Violation::Kind::CountOverrun,
                                   fmt::format("box type {}: {} placed but only {} available", t, used[t],
                                               instance.box_types[t].count)});
    }
  }
  return report;
}

LayoutMetrics layout_metrics(const Layout& layout, const Instance& instance) {
  const ValidationReport report = validate_layout(layout, instance);
  if (!report.ok()) throw ValidationError("invalid layout:\n" + report.to_string());
  LayoutMetrics m;
  for (const Placement& p : layout) {
    const BoxType& t = instance.type(p.box_type_id);
    m.placed_volume += t.volume();
    m.total_dose += placement_dose(p, t, instance.pool);
  }
  m.utilization = static_cast<double>(m.placed_volume) / static_cast<double>(instance.pool.volume());
  return m;
}

bool relative_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace nwpack
