#include <doctest.h>

#include <stdexcept>

#include "nwpack/core_model.hpp"

using namespace nwpack;

namespace {

Instance two_type_instance() {
  Instance inst;
  inst.name = "toy";
  inst.pool = {587, 233, 220, 0.01};
  inst.box_types.push_back({0, {100, 100, 100}, 1e10, 1e-13, 3});
  inst.box_types.push_back({1, {50, 40, 30}, 2e9, 3e-13, 2});
  return inst;
}

}  // namespace

TEST_CASE("point-source dose follows the inverse square law") {
  CHECK(dose_rate_single(2.0e-13, 5.0e9, 2.0) == doctest::Approx(2.5e-4).epsilon(1e-12));
  CHECK(dose_rate_single(3e-13, 7e8, 1.0) == doctest::Approx(3e-13 * 7e8).epsilon(1e-15));
  const double near = dose_rate_single(1e-13, 1e10, 1.0);
  const double far = dose_rate_single(1e-13, 1e10, 2.0);
  CHECK(near == doctest::Approx(1e-3));
  CHECK(far == doctest::Approx(2.5e-4));
  CHECK(far * 4.0 == doctest::Approx(near));

  CHECK_THROWS_AS(dose_rate_single(1e-13, 1e10, 0.0), std::domain_error);
  CHECK_THROWS_AS(dose_rate_single(1e-13, 1e10, -1.0), std::domain_error);
}

TEST_CASE("placement dose is measured from the box center to the pool top") {
  const Pool pool{587, 233, 220, 0.01};
  const BoxType t{0, {100, 100, 100}, 1e10, 1e-13, 1};
  const double d = placement_dose({0, {0, 0, 0}}, t, pool);
  CHECK(d == doctest::Approx(1e-3 / (1.7 * 1.7)).epsilon(1e-12));
  CHECK(d == doctest::Approx(3.4602e-4).epsilon(1e-4));

  // Box touching the pool top: r is half its height.
  const double top = placement_dose({0, {0, 0, 120}}, t, pool);
  CHECK(top == doctest::Approx(1e-3 / (0.5 * 0.5)));

  const double deep = placement_dose({0, {0, 0, 0}}, t, pool);
  const double shallow = placement_dose({0, {0, 0, 60}}, t, pool);
  CHECK(deep < shallow);

  // Odd heights put the center on a half unit.
  const BoxType odd{1, {10, 10, 11}, 1e10, 1e-13, 1};
  CHECK(placement_dose({1, {0, 0, 0}}, odd, pool) == doctest::Approx(1e-3 / (2.145 * 2.145)).epsilon(1e-12));
}

TEST_CASE("layout metrics") {
  const Instance inst = two_type_instance();

  SUBCASE("empty layout") {
    const LayoutMetrics m = layout_metrics({}, inst);
    CHECK(m.placed_volume == 0);
    CHECK(m.utilization == 0.0);
    CHECK(m.total_dose == 0.0);
  }

  SUBCASE("one cube") {
    const LayoutMetrics m = layout_metrics({{0, {0, 0, 0}}}, inst);
    CHECK(inst.pool.volume() == 30089620);
    CHECK(m.placed_volume == 1000000);
    CHECK(m.utilization == doctest::Approx(1e6 / 30089620.0).epsilon(1e-12));
    CHECK(m.utilization == doctest::Approx(0.033234).epsilon(1e-4));
  }

  SUBCASE("dose is additive") {
    const Layout layout{{0, {0, 0, 0}}, {1, {100, 0, 0}}};
    const LayoutMetrics m = layout_metrics(layout, inst);
    const double sum = placement_dose(layout[0], inst.type(0), inst.pool) +
                       placement_dose(layout[1], inst.type(1), inst.pool);
    CHECK(m.total_dose == doctest::Approx(sum).epsilon(1e-14));
    CHECK(m.placed_volume == 1000000 + 60000);
  }

  SUBCASE("invalid layouts are refused") {
    CHECK_THROWS_AS(layout_metrics({{0, {0, 0, 0}}, {0, {0, 0, 0}}}, inst), ValidationError);
  }
}

TEST_CASE("layout validation") {
  Instance inst = two_type_instance();
  inst.box_types.push_back({2, {1, 1, 1}, 1.0, 1e-13, 5});

  SUBCASE("coincident unit boxes overlap once") {
    const ValidationReport r = validate_layout({{2, {3, 3, 3}}, {2, {3, 3, 3}}}, inst);
    CHECK(r.violations.size() == 1);
    CHECK(r.count(Violation::Kind::Overlap) == 1);
  }

  SUBCASE("touching faces are fine") {
    const ValidationReport r = validate_layout({{2, {3, 3, 3}}, {2, {4, 3, 3}}, {2, {3, 3, 4}}}, inst);
    CHECK(r.ok());
  }

  SUBCASE("leaving the pool in x") {
    const ValidationReport r = validate_layout({{0, {500, 0, 0}}}, inst);
    CHECK(r.violations.size() == 1);
    CHECK(r.count(Violation::Kind::OutOfBounds) == 1);
  }

  SUBCASE("negative anchors are out of bounds") {
    CHECK(validate_layout({{2, {-1, 0, 0}}}, inst).count(Violation::Kind::OutOfBounds) == 1);
  }

  SUBCASE("too many boxes of a type") {
    const ValidationReport r = validate_layout({{1, {0, 0, 0}}, {1, {100, 0, 0}}, {1, {200, 0, 0}}}, inst);
    CHECK(r.count(Violation::Kind::CountOverrun) == 1);
  }

  SUBCASE("unknown type") {
    CHECK(validate_layout({{7, {0, 0, 0}}}, inst).count(Violation::Kind::UnknownType) == 1);
  }

  SUBCASE("pairwise overlap check agrees with brute force") {
    // Rows of unit boxes, every third one shifted onto its neighbour.
    Layout layout;
    Instance many = inst;
    many.box_types[2].count = 400;
    for (int i = 0; i < 60; ++i) layout.push_back({2, {i % 3 == 2 ? i - 1 : i, (i / 3) % 5, 0}});
    std::size_t expected = 0;
    for (std::size_t i = 0; i < layout.size(); ++i)
      for (std::size_t j = i + 1; j < layout.size(); ++j)
        if (Cuboid{layout[i].anchor, {1, 1, 1}}.interiors_intersect({layout[j].anchor, {1, 1, 1}})) ++expected;
    CHECK(expected > 0);
    CHECK(validate_layout(layout, many).count(Violation::Kind::Overlap) == expected);
  }
}

TEST_CASE("instance validation") {
  Instance inst = two_type_instance();
  CHECK_NOTHROW(inst.validate());

  SUBCASE("type larger than the pool") {
    inst.box_types.push_back({2, {600, 10, 10}, 1.0, 1.0, 1});
    CHECK_THROWS_AS(inst.validate(), InstanceError);
  }
  SUBCASE("ids must be dense") {
    inst.box_types[1].id = 4;
    CHECK_THROWS_AS(inst.validate(), InstanceError);
  }
  SUBCASE("negative count") {
    inst.box_types[0].count = -1;
    CHECK_THROWS_AS(inst.validate(), InstanceError);
  }
  SUBCASE("degenerate pool") {
    inst.pool.height = 0;
    CHECK_THROWS_AS(inst.validate(), InstanceError);
  }
}

TEST_CASE("cuboid predicates") {
  const Cuboid a{{0, 0, 0}, {10, 10, 10}};
  CHECK(a.contains(a));
  CHECK(a.contains({{2, 2, 2}, {8, 8, 8}}));
  CHECK_FALSE(a.contains({{2, 2, 2}, {9, 8, 8}}));
  CHECK(a.interiors_intersect({{9, 9, 9}, {5, 5, 5}}));
  CHECK_FALSE(a.interiors_intersect({{10, 0, 0}, {5, 5, 5}}));
  const Cuboid i = a.intersection({{5, -3, 8}, {10, 5, 10}});
  CHECK(i == Cuboid{{5, 0, 8}, {5, 2, 2}});
}

TEST_CASE("relative_close") {
  CHECK(relative_close(0.0, 0.0, 1e-9));
  CHECK(relative_close(1.0, 1.0 + 1e-10, 1e-9));
  CHECK_FALSE(relative_close(1.0, 1.0 + 1e-8, 1e-9));
  CHECK_FALSE(relative_close(0.0, 1e-300, 1e-9));
}
