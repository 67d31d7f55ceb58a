#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "nwpack/block_selector.hpp"
#include "nwpack/generator.hpp"

#include <fmt/format.h>

using namespace nwpack;

namespace {

Length brute_force_combination(const std::vector<ValueCount>& items, Length capacity) {
  Length best = 0;
  std::function<void(std::size_t, Length)> go = [&](std::size_t i, Length sum) {
    if (sum > capacity) return;
    if (i == items.size()) {
      best = std::max(best, sum);
      return;
    }
    for (int c = 0; c <= items[i].count; ++c) go(i + 1, sum + c * items[i].value);
  };
  go(0, 0);
  return best;
}

Instance cube_instance(int count) {
  Instance inst;
  inst.pool = {30, 30, 30, 0.01};
  inst.box_types.push_back({0, {10, 10, 10}, 1e9, 1e-13, count});
  return inst;
}

BlockPtr simple(const Instance& inst, int type, int nx, int ny, int nz) {
  return std::make_shared<const Block>(make_simple_block(inst.type(type), nx, ny, nz));
}

std::vector<int> full_inventory(const Instance& inst) {
  std::vector<int> v;
  for (const BoxType& t : inst.box_types) v.push_back(t.count);
  return v;
}

}  // namespace

TEST_CASE("max dimension combination") {
  CHECK(max_dim_combination(std::vector<ValueCount>{{10, 2}, {7, 1}}, 25) == 20);
  CHECK(max_dim_combination(std::vector<ValueCount>{{10, 2}, {7, 1}}, 0) == 0);
  CHECK(max_dim_combination(std::vector<ValueCount>{{5, 4}}, 20) == 20);
  CHECK(max_dim_combination(std::vector<ValueCount>{{5, 4}}, 19) == 15);
  CHECK(max_dim_combination(std::vector<ValueCount>{}, 19) == 0);
  CHECK(max_dim_combination(std::vector<ValueCount>{{64, 3}, {1, 1}}, 193) == 193);
  CHECK(max_dim_combination(std::vector<ValueCount>{{64, 3}, {1, 1}}, 1000) == 193);
}

TEST_CASE("bitset reachability agrees with brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int distinct = static_cast<int>(rng() % 6);
    std::vector<ValueCount> items;
    for (int i = 0; i < distinct; ++i)
      items.push_back({static_cast<Length>(1 + rng() % 30), static_cast<int>(rng() % 5)});
    const Length cap = static_cast<Length>(rng() % 61);
    CAPTURE(trial);
    REQUIRE(max_dim_combination(items, cap) == brute_force_combination(items, cap));

    // One table answers every smaller capacity.
    const ReachableSums sums(items, cap);
    for (Length c = 0; c <= cap; ++c) REQUIRE(sums.best_at_most(c) == brute_force_combination(items, c));
  }
}

TEST_CASE("large counts use binary splitting correctly") {
  const std::vector<ValueCount> items{{97, 1000}, {13, 3}, {250, 2}};
  for (Length cap : {0, 12, 13, 96, 500, 1234, 5000, 9999})
    CHECK(max_dim_combination(items, cap) == [&] {
      Length best = 0;
      for (int a = 0; a <= 1000; ++a)
        for (int b = 0; b <= 3; ++b)
          for (int c = 0; c <= 2; ++c) {
            const Length s = 97 * a + 13 * b + 250 * c;
            if (s <= cap) best = std::max(best, s);
          }
      return best;
    }());
}

TEST_CASE("lost volume") {
  const Instance inst = cube_instance(9);
  const Space space{{0, 0, 0}, {30, 30, 30}};
  const BlockPtr cube8 = simple(inst, 0, 2, 2, 2);

  SUBCASE("one spare box extends every axis") {
    const DimInventory inv = DimInventory::from_counts(inst, {1});
    CHECK(v_loss(*cube8, space, inv) == 0);
  }
  SUBCASE("exact fit") {
    const BlockPtr full = simple(inst, 0, 3, 3, 1);
    CHECK(v_loss(*full, {{0, 0, 0}, {30, 30, 10}}, DimInventory::from_counts(inst, {0})) == 0);
  }
  SUBCASE("nothing left") {
    const BlockPtr one = simple(inst, 0, 1, 1, 1);
    CHECK(v_loss(*one, space, DimInventory::from_counts(inst, {0})) == 26000);
  }
  SUBCASE("after reserving removes the block's own boxes") {
    const DimInventory inv = DimInventory::after_reserving(inst, {9}, *cube8);
    REQUIRE(inv.axis(Axis::X).size() == 1);
    CHECK(inv.axis(Axis::X)[0].count == 1);
  }
  SUBCASE("block larger than the space") {
    CHECK_THROWS_AS(v_loss(*cube8, {{0, 0, 0}, {10, 30, 30}}, DimInventory::from_counts(inst, {1})),
                    std::invalid_argument);
  }
}

TEST_CASE("block score") {
  const Instance inst = cube_instance(27);
  const BlockPtr full = simple(inst, 0, 3, 3, 3);
  const Space space{{0, 0, 0}, {30, 30, 30}};
  const DimInventory none = DimInventory::from_counts(inst, {0});

  ScoreParams p;
  p.alpha = 0.6;
  p.dose_min = 0.0;
  p.dose_max = full->dose_1m;
  CHECK(score_block(*full, space, none, p) == doctest::Approx(1.6));

  p.alpha = 0.0;
  const BlockPtr one = simple(inst, 0, 1, 1, 1);
  CHECK(score_block(*one, space, none, p) == doctest::Approx((1000.0 - 26000.0) / 27000.0));

  ScoreParams flat;
  flat.dose_min = flat.dose_max = 3.0;
  CHECK(flat.normalized_dose(3.0) == 0.0);
}

TEST_CASE("normalization uses the whole block list") {
  const Instance inst = cube_instance(8);
  const BlockList blocks{simple(inst, 0, 1, 1, 1), simple(inst, 0, 2, 1, 1), simple(inst, 0, 2, 2, 2)};
  const ScoreParams p = ScoreParams::from_blocks(blocks, 0.4);
  CHECK(p.alpha == 0.4);
  CHECK(p.dose_min == doctest::Approx(blocks[0]->dose_1m));
  CHECK(p.dose_max == doctest::Approx(blocks[2]->dose_1m));
  CHECK(p.normalized_dose(blocks[2]->dose_1m) == doctest::Approx(1.0));
  // A common scale factor leaves the normalized value unchanged.
  ScoreParams scaled = p;
  scaled.dose_min *= 1e3;
  scaled.dose_max *= 1e3;
  CHECK(scaled.normalized_dose(blocks[1]->dose_1m * 1e3) == doctest::Approx(p.normalized_dose(blocks[1]->dose_1m)));
}

TEST_CASE("selection") {
  Instance inst;
  inst.pool = {30, 30, 30, 0.01};
  inst.box_types.push_back({0, {10, 10, 10}, 1e9, 1e-13, 8});
  inst.box_types.push_back({1, {20, 20, 20}, 1e9, 1e-13, 1});
  const BlockList blocks{simple(inst, 0, 1, 1, 1), simple(inst, 1, 1, 1, 1), simple(inst, 0, 2, 2, 2)};
  ScoreParams p;
  p.alpha = 0.0;

  SUBCASE("nothing fits") {
    CHECK(select_blocks(inst, blocks, {{0, 0, 0}, {5, 5, 5}}, {8, 1}, 3, p).empty());
    CHECK(select_blocks(inst, blocks, {{0, 0, 0}, {30, 30, 30}}, {0, 0}, 3, p).empty());
  }

  SUBCASE("equal score and volume fall back to dose") {
    // Exact-fit space for both the 20-cube and the 2x2x2 array of 10-cubes;
    // the array carries eight sources.
    const auto picks = select_blocks(inst, blocks, {{0, 0, 0}, {20, 20, 20}}, {8, 1}, 5, p);
    REQUIRE(picks.size() == 3);
    CHECK(picks[0] == 2);
    CHECK(picks[1] == 1);
    CHECK(picks[2] == 0);
  }

  SUBCASE("width caps the answer") {
    CHECK(select_blocks(inst, blocks, {{0, 0, 0}, {20, 20, 20}}, {8, 1}, 1, p).size() == 1);
    CHECK_THROWS_AS(select_blocks(inst, blocks, {{0, 0, 0}, {20, 20, 20}}, {8, 1}, 0, p), std::invalid_argument);
  }

  SUBCASE("inventory filter") {
    const auto picks = select_blocks(inst, blocks, {{0, 0, 0}, {20, 20, 20}}, {7, 0}, 5, p);
    REQUIRE(picks.size() == 1);
    CHECK(picks[0] == 0);
  }
}

TEST_CASE("volume tie-break between equal scores") {
  Instance inst;
  inst.pool = {40, 40, 40, 0.01};
  inst.box_types.push_back({0, {10, 10, 10}, 4e9, 1e-13, 2});
  inst.box_types.push_back({1, {20, 20, 20}, 1e9, 1e-13, 1});
  const BlockList blocks{simple(inst, 0, 1, 1, 1), simple(inst, 1, 1, 1, 1)};
  const ScoreParams p = ScoreParams::from_blocks(blocks, 0.875);
  // In a 20-cube space: the big box scores 1 + 0, the small one 1/8 + 7/8
  // (the spare small box extends it on every axis, so nothing is lost).
  const Space s{{0, 0, 0}, {20, 20, 20}};
  const DimInventory spare = DimInventory::after_reserving(inst, {2, 1}, *blocks[0]);
  REQUIRE(score_block(*blocks[0], s, spare, p) == 1.0);
  REQUIRE(score_block(*blocks[1], s, DimInventory::after_reserving(inst, {2, 1}, *blocks[1]), p) == 1.0);
  const auto picks = select_blocks(inst, blocks, s, {2, 1}, 2, p);
  REQUIRE(picks.size() == 2);
  CHECK(picks[0] == 1);
  CHECK(picks[1] == 0);
}

TEST_CASE("single-type ranking follows dose when fill is equal") {
  Instance inst;
  inst.pool = {50, 50, 50, 0.01};
  inst.box_types.push_back({0, {10, 10, 10}, 1e9, 1e-13, 100});
  BlockList blocks;
  for (int n = 1; n <= 5; ++n) blocks.push_back(simple(inst, 0, n, 1, 1));
  const ScoreParams p = ScoreParams::from_blocks(blocks, 0.8);
  // A 50-wide row space: every candidate row can be completed exactly by the
  // remaining boxes, so only the dose term differs.
  const Space s{{0, 0, 0}, {50, 10, 10}};
  const auto picks = select_blocks(inst, blocks, s, {100}, 5, p);
  REQUIRE(picks.size() == 5);
  for (std::size_t i = 1; i < picks.size(); ++i)
    CHECK(blocks[picks[i - 1]]->dose_1m >= blocks[picks[i]]->dose_1m);
}

TEST_CASE("selector agrees with exhaustive scoring") {
  for (int family : {3, 5, 12}) {
    FamilySpec spec = table_family(fmt::format("set{}", family), 99, 2);
    for (int idx = 0; idx < 2; ++idx) {
      const Instance inst = generate_instance(spec, idx);
      const BlockList blocks = generate_blocks(inst, {800, 0.95});
      const ScoreParams params = ScoreParams::from_blocks(blocks, 0.6);
      std::mt19937_64 rng(static_cast<std::uint64_t>(family * 10 + idx));
      std::vector<int> remaining = full_inventory(inst);

      for (int round = 0; round < 12; ++round) {
        // Random space inside the pool and a randomly depleted inventory.
        const Pool& pool = inst.pool;
        const Length l = 30 + static_cast<Length>(rng() % static_cast<std::uint64_t>(pool.length - 29));
        const Length w = 30 + static_cast<Length>(rng() % static_cast<std::uint64_t>(pool.width - 29));
        const Length h = 30 + static_cast<Length>(rng() % static_cast<std::uint64_t>(pool.height - 29));
        const Space space{{0, 0, 0}, {l, w, h}};
        for (int& r : remaining)
          if (r > 0 && rng() % 4 == 0) --r;

        struct Scored {
          double score;
          Volume vol;
          double dose;
          std::uint32_t idx;
        };
        std::vector<Scored> all;
        for (std::uint32_t i = 0; i < blocks.size(); ++i) {
          const Block& b = *blocks[i];
          if (!fits(b.dims, space) || !counts_feasible(b.counts, remaining)) continue;
          const DimInventory inv = DimInventory::after_reserving(inst, remaining, b);
          all.push_back({score_block(b, space, inv, params), b.box_volume, b.dose_1m, i});
        }
        std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
          if (a.score != b.score) return a.score > b.score;
          if (a.vol != b.vol) return a.vol > b.vol;
          if (a.dose != b.dose) return a.dose > b.dose;
          return a.idx < b.idx;
        });
        for (std::size_t width : {1u, 3u, 10u, 1000u}) {
          const auto got = select_blocks(inst, blocks, space, remaining, width, params);
          REQUIRE(got.size() == std::min(width, all.size()));
          for (std::size_t k = 0; k < got.size(); ++k) REQUIRE(got[k] == all[k].idx);
        }
      }
    }
  }
}
