#include "nwpack/instance_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace nwpack {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, int line, std::string_view what) {
  T value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError(line, fmt::format("invalid {} '{}'", what, tok));
  return value;
}

/// Splits text into lines, yielding (1-based number, tokens) for non-empty ones.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    auto tokens = tokenize(text.substr(pos, end - pos));
    if (!tokens.empty()) fn(number, tokens);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::map<std::string_view, std::string_view> key_values(const std::vector<std::string_view>& tokens,
                                                         std::size_t first, int line) {
  std::map<std::string_view, std::string_view> out;
  for (std::size_t i = first; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError(line, fmt::format("expected key=value, got '{}'", tokens[i]));
    out[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return out;
}

std::string_view require_key(const std::map<std::string_view, std::string_view>& kv, std::string_view key,
                             int line) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(line, fmt::format("missing field '{}'", key));
  return it->second;
}

}  // namespace

std::string write_instance(const Instance& instance) {
  std::string out;
  const Pool& p = instance.pool;
  out += fmt::format("POOL {} {} {} {}\n", p.length, p.width, p.height, format_double(p.unit_scale));
  if (!instance.name.empty()) out += fmt::format("NAME {}\n", instance.name);
  if (instance.provenance) {
    const Provenance& s = *instance.provenance;
    out += fmt::format("SOURCE family={} seed={} types={} boxes={}\n", s.family, s.seed, s.type_count,
                       s.target_boxes);
  }
  out += "# TYPE id l w h count activity[Bq] gamma[Sv*m^2/(Bq*t)]\n";
  for (const BoxType& t : instance.box_types)
    out += fmt::format("TYPE {} {} {} {} {} {} {}\n", t.id, t.dims.l, t.dims.w, t.dims.h, t.count,
                       format_double(t.activity), format_double(t.gamma));
  return out;
}

Instance read_instance(std::string_view text, std::string default_name) {
  Instance inst;
  inst.name = std::move(default_name);
  bool have_pool = false;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& tok) {
    const std::string_view kw = tok[0];
    if (kw == "POOL") {
      if (have_pool) throw ParseError(line, "duplicate POOL line");
      if (tok.size() != 4 && tok.size() != 5) throw ParseError(line, "POOL expects L W H [UNIT_SCALE]");
      inst.pool.length = parse_number<Length>(tok[1], line, "length");
      inst.pool.width = parse_number<Length>(tok[2], line, "width");
      inst.pool.height = parse_number<Length>(tok[3], line, "height");
      if (tok.size() == 5) inst.pool.unit_scale = parse_number<double>(tok[4], line, "unit scale");
      have_pool = true;
    } else if (kw == "NAME") {
      if (tok.size() != 2) throw ParseError(line, "NAME expects one token");
      inst.name = std::string(tok[1]);
    } else if (kw == "SOURCE") {
      const auto kv = key_values(tok, 1, line);
      Provenance p;
      p.family = std::string(require_key(kv, "family", line));
      p.seed = parse_number<std::uint64_t>(require_key(kv, "seed", line), line, "seed");
      p.type_count = parse_number<int>(require_key(kv, "types", line), line, "type count");
      p.target_boxes = parse_number<int>(require_key(kv, "boxes", line), line, "box count");
      inst.provenance = std::move(p);
    } else if (kw == "TYPE") {
      if (tok.size() != 8)
        throw ParseError(line, fmt::format("TYPE expects 7 fields (id l w h count activity gamma), got {}",
                                           tok.size() - 1));
      BoxType t;
      t.id = parse_number<int>(tok[1], line, "type id");
      t.dims.l = parse_number<Length>(tok[2], line, "length");
      t.dims.w = parse_number<Length>(tok[3], line, "width");
      t.dims.h = parse_number<Length>(tok[4], line, "height");
      t.count = parse_number<int>(tok[5], line, "count");
      t.activity = parse_number<double>(tok[6], line, "activity");
      t.gamma = parse_number<double>(tok[7], line, "gamma");
      inst.box_types.push_back(t);
    } else {
      throw ParseError(line, fmt::format("unknown record '{}'", kw));
    }
  });
  if (!have_pool) throw ParseError(0, "missing POOL line");

  std::stable_sort(inst.box_types.begin(), inst.box_types.end(),
                   [](const BoxType& a, const BoxType& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < inst.box_types.size(); ++i)
    if (inst.box_types[i].id == inst.box_types[i - 1].id)
      throw SemanticError(fmt::format("duplicate box type id {}", inst.box_types[i].id));
  inst.validate();
  return inst;
}

std::string write_solution(const SolutionRecord& r) {
  std::string out;
  out += fmt::format("SOLUTION {}\n", r.instance_name);
  const SolverEcho& c = r.config;
  out += fmt::format("CONFIG alpha={} time_limit={} seed={} max_blocks={} min_fill_rate={} max_evaluations={}\n",
                     format_double(c.alpha), format_double(c.time_limit), c.seed, c.max_blocks,
                     format_double(c.min_fill_rate), c.max_evaluations);
  for (const Placement& p : r.placements)
    out += fmt::format("BOX {} {} {} {}\n", p.box_type_id, p.anchor.x, p.anchor.y, p.anchor.z);
  out += fmt::format("METRICS boxes={} placed_volume={} utilization={} total_dose={}\n", r.placements.size(),
                     r.placed_volume, format_double(r.utilization), format_double(r.total_dose));
  return out;
}

SolutionRecord read_solution(std::string_view text) {
  SolutionRecord r;
  bool have_header = false, have_metrics = false;
  std::size_t declared_boxes = 0;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& tok) {
    const std::string_view kw = tok[0];
    if (kw == "SOLUTION") {
      if (tok.size() != 2) throw ParseError(line, "SOLUTION expects the instance name");
      r.instance_name = std::string(tok[1]);
      have_header = true;
    } else if (kw == "CONFIG") {
      const auto kv = key_values(tok, 1, line);
      r.config.alpha = parse_number<double>(require_key(kv, "alpha", line), line, "alpha");
      r.config.time_limit = parse_number<double>(require_key(kv, "time_limit", line), line, "time limit");
      r.config.seed = parse_number<std::uint64_t>(require_key(kv, "seed", line), line, "seed");
      r.config.max_blocks = parse_number<std::size_t>(require_key(kv, "max_blocks", line), line, "max blocks");
      r.config.min_fill_rate =
          parse_number<double>(require_key(kv, "min_fill_rate", line), line, "min fill rate");
      r.config.max_evaluations =
          parse_number<std::uint64_t>(require_key(kv, "max_evaluations", line), line, "max evaluations");
    } else if (kw == "BOX") {
      if (have_metrics) throw ParseError(line, "BOX after METRICS");
      if (tok.size() != 5) throw ParseError(line, "BOX expects type_id x y z");
      r.placements.push_back({parse_number<int>(tok[1], line, "type id"),
                              {parse_number<Length>(tok[2], line, "x"), parse_number<Length>(tok[3], line, "y"),
                               parse_number<Length>(tok[4], line, "z")}});
    } else if (kw == "METRICS") {
      const auto kv = key_values(tok, 1, line);
      declared_boxes = parse_number<std::size_t>(require_key(kv, "boxes", line), line, "box count");
      r.placed_volume = parse_number<Volume>(require_key(kv, "placed_volume", line), line, "placed volume");
      r.utilization = parse_number<double>(require_key(kv, "utilization", line), line, "utilization");
      r.total_dose = parse_number<double>(require_key(kv, "total_dose", line), line, "total dose");
      have_metrics = true;
    } else {
      throw ParseError(line, fmt::format("unknown record '{}'", kw));
    }
  });
  if (!have_header) throw ParseError(0, "missing SOLUTION line");
  if (!have_metrics) throw ParseError(0, "missing METRICS line");
  if (declared_boxes != r.placements.size())
    throw ParseError(0, fmt::format("METRICS declares {} boxes but {} BOX lines were read", declared_boxes,
                                    r.placements.size()));
  return r;
}

SolutionRecord read_solution(std::string_view text, const Instance& instance) {
  SolutionRecord r = read_solution(text);
  for (std::size_t i = 0; i < r.placements.size(); ++i) {
    const int id = r.placements[i].box_type_id;
    if (id < 0 || id >= instance.type_count())
      throw SemanticError(fmt::format("placement {} references unknown box type {}", i, id));
  }
  return r;
}

std::string AuditResult::to_string() const {
  std::string out = report.to_string();
  for (const auto& m : mismatches) out += m + '\n';
  return out;
}

AuditResult audit_solution(const SolutionRecord& record, const Instance& instance) {
  AuditResult out;
  out.report = validate_layout(record.placements, instance);
  if (!instance.name.empty() && record.instance_name != instance.name)
    out.mismatches.push_back(
        fmt::format("solution is for instance '{}' but '{}' was supplied", record.instance_name, instance.name));
  if (!out.report.ok()) return out;
  const LayoutMetrics m = layout_metrics(record.placements, instance);
  if (m.placed_volume != record.placed_volume)
    out.mismatches.push_back(
        fmt::format("placed volume: stored {} but placements give {}", record.placed_volume, m.placed_volume));
  if (!relative_close(m.utilization, record.utilization, 1e-9))
    out.mismatches.push_back(fmt::format("utilization: stored {} but placements give {}",
                                         format_double(record.utilization), format_double(m.utilization)));
  if (!relative_close(m.total_dose, record.total_dose, 1e-9))
    out.mismatches.push_back(fmt::format("total dose: stored {} but placements give {}",
                                         format_double(record.total_dose), format_double(m.total_dose)));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

Instance load_instance(const std::filesystem::path& path) {
  return read_instance(read_text_file(path), path.stem().string());
}

}  // namespace nwpack
