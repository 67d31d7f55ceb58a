#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nwpack {

using Length = std::int64_t;
using Volume = std::int64_t;

enum class Axis { X = 0, Y = 1, Z = 2 };

struct Dims {
  Length l = 0;
  Length w = 0;
  Length h = 0;

  Volume volume() const { return l * w * h; }
  Length operator[](Axis a) const { return a == Axis::X ? l : (a == Axis::Y ? w : h); }
  bool operator==(const Dims&) const = default;
};

struct Point {
  Length x = 0;
  Length y = 0;
  Length z = 0;

  Length operator[](Axis a) const { return a == Axis::X ? x : (a == Axis::Y ? y : z); }
  Point operator+(const Point& o) const { return {x + o.x, y + o.y, z + o.z}; }
  bool operator==(const Point&) const = default;
};

/// Axis-aligned cuboid given by its min corner and extents.
struct Cuboid {
  Point anchor;
  Dims dims;

  Volume volume() const { return dims.volume(); }
  Point far_corner() const { return {anchor.x + dims.l, anchor.y + dims.w, anchor.z + dims.h}; }

  /// True iff the open interiors share a point (touching faces do not count).
  bool interiors_intersect(const Cuboid& o) const {
    return anchor.x < o.anchor.x + o.dims.l && o.anchor.x < anchor.x + dims.l && anchor.y < o.anchor.y + o.dims.w &&
           o.anchor.y < anchor.y + dims.w && anchor.z < o.anchor.z + o.dims.h && o.anchor.z < anchor.z + dims.h;
  }
  /// Closed containment: every point of `o` lies in this cuboid.
  bool contains(const Cuboid& o) const {
    return anchor.x <= o.anchor.x && anchor.y <= o.anchor.y && anchor.z <= o.anchor.z &&
           o.anchor.x + o.dims.l <= anchor.x + dims.l && o.anchor.y + o.dims.w <= anchor.y + dims.w &&
           o.anchor.z + o.dims.h <= anchor.z + dims.h;
  }
  /// Intersection of the two cuboids; only meaningful when interiors_intersect().
  Cuboid intersection(const Cuboid& o) const;

  bool operator==(const Cuboid&) const = default;
};

struct Pool {
  Length length = 0;
  Length width = 0;
  Length height = 0;
  double unit_scale = 0.01;  // meters per length unit

  Dims dims() const { return {length, width, height}; }
  Volume volume() const { return length * width * height; }
  Cuboid region() const { return {{0, 0, 0}, dims()}; }
  bool operator==(const Pool&) const = default;
};

struct BoxType {
  int id = 0;
  Dims dims;
  double activity = 0.0;  // Bq
  double gamma = 0.0;     // Sv·m²/(Bq·t)
  int count = 0;

  Volume volume() const { return dims.volume(); }
  /// Dose rate at one meter, Γ·A.
  double dose_1m() const { return gamma * activity; }
  bool operator==(const BoxType&) const = default;
};

struct Placement {
  int box_type_id = 0;
  Point anchor;
  bool operator==(const Placement&) const = default;
};

using Layout = std::vector<Placement>;

/// Where a generated instance came from.
struct Provenance {
  std::string family;
  std::uint64_t seed = 0;
  int type_count = 0;
  int target_boxes = 0;
  bool operator==(const Provenance&) const = default;
};

struct Instance {
  std::string name;
  Pool pool;
  std::vector<BoxType> box_types;
  std::optional<Provenance> provenance;

  const BoxType& type(int id) const { return box_types.at(static_cast<std::size_t>(id)); }
  int type_count() const { return static_cast<int>(box_types.size()); }
  int total_boxes() const;
  Volume total_box_volume() const;

  /// Throws InstanceError if the pool is degenerate, ids are not dense from 0,
  /// a type does not fit the pool, or a quantity is negative.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eq. of the inverse-square point source: Γ·A / r². Throws std::domain_error for r ≤ 0.
double dose_rate_single(double gamma, double activity, double r_meters);

/// Dose at the pool top for one placed box, using the vertical distance from the
/// box center to the pool mouth.
double placement_dose(const Placement& placement, const BoxType& type, const Pool& pool);

struct LayoutMetrics {
  Volume placed_volume = 0;
  double utilization = 0.0;
  double total_dose = 0.0;
};

struct Violation {
  enum class Kind { UnknownType, OutOfBounds, Overlap, CountOverrun };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const;
  std::string to_string() const;
};

ValidationReport validate_layout(const Layout& layout, const Instance& instance);

/// Throws ValidationError when the layout is invalid.
LayoutMetrics layout_metrics(const Layout& layout, const Instance& instance);

/// |a - b| <= tol * max(|a|, |b|), with exact equality accepted for zeros.
bool relative_close(double a, double b, double tol);

}  // namespace nwpack
