#include <doctest.h>

#include <filesystem>
#include <set>

#include "nwpack/generator.hpp"
#include "nwpack/instance_io.hpp"

using namespace nwpack;

namespace {

Instance sample() {
  Instance inst;
  inst.name = "sample_7";
  inst.pool = {587, 233, 220, 0.01};
  inst.box_types.push_back({0, {100, 90, 80}, 3.3e10, 3.7e-13, 4});
  inst.box_types.push_back({1, {45, 45, 60}, 0.1 + 0.2, 9.27e-14, 12});
  inst.provenance = Provenance{"set3", 12345678901234567ULL, 2, 16};
  return inst;
}

SolutionRecord one_box_record(const Instance& inst) {
  SolutionRecord r;
  r.instance_name = inst.name;
  r.placements = {{0, {0, 0, 0}}};
  const LayoutMetrics m = layout_metrics(r.placements, inst);
  r.placed_volume = m.placed_volume;
  r.utilization = m.utilization;
  r.total_dose = m.total_dose;
  return r;
}

int parse_error_line(std::string_view text) {
  try {
    read_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  for (double v : {0.0, 0.1 + 0.2, 1e-300, 3.7e-13, 123456789.125, 1.0 / 3.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e10) == "1e+10");
}

TEST_CASE("instance text round trip") {
  const Instance inst = sample();
  const std::string text = write_instance(inst);
  CHECK(read_instance(text) == inst);
  CHECK(write_instance(read_instance(text)) == text);

  SUBCASE("name falls back to the default") {
    Instance unnamed = inst;
    unnamed.name.clear();
    CHECK(read_instance(write_instance(unnamed), "from_file").name == "from_file");
  }

  SUBCASE("types may come in any order, with comments and blank lines") {
    const Instance r = read_instance(
        "# header\n"
        "POOL 10 10 10\n"
        "\n"
        "TYPE 1 2 2 2 3 1e6 1e-13   # second\n"
        "TYPE 0 1 1 1 5 2e6 2e-13\n");
    REQUIRE(r.type_count() == 2);
    CHECK(r.type(0).dims == Dims{1, 1, 1});
    CHECK(r.type(1).count == 3);
    CHECK(r.pool.unit_scale == 0.01);
  }
}

TEST_CASE("malformed instances") {
  CHECK(parse_error_line("POOL 10 10 10\nTYPE 0 10 10\n") == 2);
  CHECK(parse_error_line("POOL 10 10 ten\n") == 1);
  CHECK(parse_error_line("POOL 10 10 10\nPOOL 10 10 10\n") == 2);
  CHECK(parse_error_line("POOL 10 10 10\n\nBOGUS 1\n") == 3);
  CHECK(parse_error_line("TYPE 0 1 1 1 1 1 1\n") == 0);
  CHECK(parse_error_line("POOL 10 10 10\nTYPE 0 1 1 1 1 1e6x 1\n") == 2);
  CHECK(parse_error_line("POOL 10 10 10\nSOURCE family=set1 seed=3\n") == 2);

  CHECK_THROWS_AS(read_instance("POOL 10 10 10\nTYPE 0 1 1 1 1 1 1\nTYPE 0 2 2 2 1 1 1\n"), SemanticError);
  CHECK_THROWS_AS(read_instance("POOL 10 10 10\nTYPE 1 1 1 1 1 1 1\n"), InstanceError);
  CHECK_THROWS_AS(read_instance("POOL 10 10 10\nTYPE 0 11 1 1 1 1 1\n"), InstanceError);
  CHECK_THROWS_AS(read_instance("POOL 0 10 10\n"), InstanceError);
}

TEST_CASE("solution text round trip") {
  const Instance inst = sample();
  SolutionRecord r = one_box_record(inst);
  r.config = {0.7, 5.0, 99, 1234, 0.95, 17};
  r.placements.push_back({1, {100, 0, 0}});
  r.placements.push_back({1, {100, 45, 0}});
  const LayoutMetrics m = layout_metrics(r.placements, inst);
  r.placed_volume = m.placed_volume;
  r.utilization = m.utilization;
  r.total_dose = m.total_dose;

  const std::string text = write_solution(r);
  CHECK(read_solution(text) == r);
  CHECK(read_solution(text, inst) == r);
  CHECK(write_solution(read_solution(text)) == text);

  SUBCASE("empty layout") {
    SolutionRecord empty;
    empty.instance_name = "x";
    const SolutionRecord back = read_solution(write_solution(empty));
    CHECK(back == empty);
    CHECK(back.placements.empty());
  }

  SUBCASE("box count must match the metrics line") {
    std::string bad = text;
    bad.replace(bad.find("boxes=3"), 7, "boxes=4");
    CHECK_THROWS_AS(read_solution(bad), ParseError);
  }

  SUBCASE("unknown type ids are rejected against the instance") {
    SolutionRecord stray = r;
    stray.placements.push_back({5, {0, 0, 100}});
    CHECK_NOTHROW(read_solution(write_solution(stray)));
    CHECK_THROWS_AS(read_solution(write_solution(stray), inst), SemanticError);
  }

  SUBCASE("missing records") {
    CHECK_THROWS_AS(read_solution("SOLUTION a\n"), ParseError);
    CHECK_THROWS_AS(read_solution("METRICS boxes=0 placed_volume=0 utilization=0 total_dose=0\n"), ParseError);
    CHECK_THROWS_AS(read_solution("SOLUTION a\nMETRICS boxes=0 placed_volume=0 utilization=0\n"), ParseError);
  }
}

TEST_CASE("solution audit") {
  const Instance inst = sample();
  const SolutionRecord good = one_box_record(inst);
  CHECK(audit_solution(good, inst).ok());

  SUBCASE("tampered dose") {
    SolutionRecord r = good;
    r.total_dose *= 1.0 + 1e-7;
    const AuditResult a = audit_solution(r, inst);
    CHECK_FALSE(a.ok());
    CHECK(a.mismatches.size() == 1);
  }
  SUBCASE("rounding below the tolerance passes") {
    SolutionRecord r = good;
    r.utilization *= 1.0 + 1e-12;
    CHECK(audit_solution(r, inst).ok());
  }
  SUBCASE("tampered volume") {
    SolutionRecord r = good;
    r.placed_volume += 1;
    CHECK_FALSE(audit_solution(r, inst).ok());
  }
  SUBCASE("overlap") {
    SolutionRecord r = good;
    r.placements.push_back({0, {50, 0, 0}});
    const AuditResult a = audit_solution(r, inst);
    CHECK_FALSE(a.ok());
    CHECK(a.report.count(Violation::Kind::Overlap) == 1);
  }
  SUBCASE("wrong instance name") {
    SolutionRecord r = good;
    r.instance_name = "other";
    CHECK_FALSE(audit_solution(r, inst).ok());
  }
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "nwpack_io_test";
  std::filesystem::create_directories(dir);
  const Instance inst = sample();
  write_text_file(dir / "abc.inst", write_instance(inst));
  CHECK(load_instance(dir / "abc.inst") == inst);

  Instance unnamed = inst;
  unnamed.name.clear();
  write_text_file(dir / "stem_only.inst", write_instance(unnamed));
  CHECK(load_instance(dir / "stem_only.inst").name == "stem_only");

  CHECK_THROWS_AS(read_text_file(dir / "missing.inst"), IoError);
  CHECK_THROWS_AS(write_text_file(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("family table") {
  const auto& table = family_table();
  REQUIRE(table.size() == 16);
  CHECK(table.front() == std::pair{1, 205});
  CHECK(table.back() == std::pair{100, 129});
  CHECK_THROWS_AS(table_family("set17", 1), GenerationError);
  CHECK_THROWS_AS(table_family("bogus", 1), GenerationError);
  CHECK(all_table_families(3, 2).size() == 16);
}

TEST_CASE("generated instances") {
  SUBCASE("same seed, same instance; different seed or index, different instance") {
    const FamilySpec spec = table_family("set5", 11, 3);
    CHECK(generate_instance(spec, 1) == generate_instance(spec, 1));
    CHECK_FALSE(generate_instance(spec, 1) == generate_instance(spec, 2));
    CHECK_FALSE(generate_instance(spec, 1) == generate_instance(table_family("set5", 12, 3), 1));
    CHECK(instance_seed(11, "set5", 1) != instance_seed(11, "set6", 1));
  }

  SUBCASE("every family honours its box count and volume band") {
    for (const FamilySpec& spec : all_table_families(5, 3)) {
      for (const Instance& inst : generate_family(spec)) {
        CAPTURE(inst.name);
        CHECK(inst.type_count() == spec.type_count);
        CHECK(inst.total_boxes() == spec.target_boxes);
        const double ratio = static_cast<double>(inst.total_box_volume()) / static_cast<double>(inst.pool.volume());
        CHECK(ratio >= spec.volume_low);
        CHECK(ratio <= spec.volume_high);
        CHECK(inst.pool == Pool{587, 233, 220, 0.01});
        REQUIRE(inst.provenance.has_value());
        CHECK(inst.provenance->family == spec.name);
        CHECK(read_instance(write_instance(inst)) == inst);
        for (const BoxType& t : inst.box_types) {
          CHECK(t.count >= 1);
          CHECK(t.activity >= spec.activity_min);
          CHECK(t.activity <= spec.activity_max);
          CHECK(t.dims.l >= spec.dim_min);
          CHECK(t.dims.h <= spec.dim_max);
        }
      }
    }
  }

  SUBCASE("single-type instances land in the grid fill band") {
    for (const Instance& inst : generate_family(table_family("set1", 8, 20))) {
      const BoxType& t = inst.type(0);
      CHECK(t.count == 205);
      const Volume fit = (587 / t.dims.l) * (233 / t.dims.w) * (220 / t.dims.h);
      const double g = static_cast<double>(std::min<Volume>(fit, 205) * t.volume()) / 30089620.0;
      CHECK(g >= 0.83);
      CHECK(g <= 0.88);
    }
  }

  SUBCASE("gammas come from the nuclide table") {
    std::set<double> table;
    for (const Nuclide& n : default_nuclides()) table.insert(n.gamma);
    for (const Instance& inst : generate_family(table_family("set16", 2, 2)))
      for (const BoxType& t : inst.box_types) CHECK(table.count(t.gamma) == 1);
  }

  SUBCASE("impossible specs are refused") {
    FamilySpec spec = table_family("set3", 1, 1);
    spec.target_boxes = 2;
    CHECK_THROWS_AS(generate_instance(spec, 0), GenerationError);
    spec = table_family("set3", 1, 1);
    spec.dim_min = 300;
    CHECK_THROWS_AS(spec.validate(), GenerationError);
    spec = table_family("set1", 1, 1);
    spec.grid_fill_low = 0.99;
    spec.grid_fill_high = 1.0;
    CHECK_THROWS_AS(generate_instance(spec, 0), GenerationError);
  }
}
