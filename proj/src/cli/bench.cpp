#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "nwpack/cli.hpp"
#include "nwpack/solver.hpp"

namespace nwpack::cli {

namespace fs = std::filesystem;

std::string family_of(const Instance& instance) {
  if (instance.provenance && !instance.provenance->family.empty()) return instance.provenance->family;
  const auto cut = instance.name.rfind('_');
  return cut == std::string::npos ? instance.name : instance.name.substr(0, cut);
}

BenchCell BenchReport::cell(const std::string& family, double alpha, double time_limit) const {
  BenchCell c;
  for (const BenchRow& r : rows) {
    if (!r.ok || r.family != family || r.alpha != alpha || r.time_limit != time_limit) continue;
    ++c.samples;
    c.fill_pct += 100.0 * r.utilization;
    c.dose += r.total_dose;
  }
  if (c.samples > 0) {
    c.fill_pct /= c.samples;
    c.dose /= c.samples;
  }
  return c;
}

bool BenchReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.ok; });
}

BenchReport run_bench(const std::vector<Instance>& instances, const std::vector<double>& alphas,
                      const std::vector<double>& times, const SearchConfig& base, unsigned jobs, std::ostream* log) {
  BenchReport report;
  report.alphas = alphas;
  report.times = times;

  // Families ordered by box-type count, then name; instances by name within a family.
  std::vector<const Instance*> order;
  for (const Instance& inst : instances) order.push_back(&inst);
  const auto rank = [](const Instance* i) { return std::make_tuple(i->type_count(), family_of(*i), i->name); };
  std::sort(order.begin(), order.end(), [&](const Instance* a, const Instance* b) { return rank(a) < rank(b); });
  for (const Instance* inst : order) {
    const std::string f = family_of(*inst);
    if (std::find(report.families.begin(), report.families.end(), f) == report.families.end())
      report.families.push_back(f);
  }

  const std::size_t per_instance = alphas.size() * times.size();
  report.rows.resize(order.size() * per_instance);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  const auto worker = [&] {
    for (std::size_t i = next++; i < order.size(); i = next++) {
      const Instance& inst = *order[i];
      std::size_t slot = i * per_instance;
      for (double t : times) {
        for (double a : alphas) {
          BenchRow& row = report.rows[slot++];
          row.family = family_of(inst);
          row.instance = inst.name;
          row.alpha = a;
          row.time_limit = t;
          SearchConfig cfg = base;
          cfg.alpha = a;
          cfg.time_limit = t;
          try {
            const SolveResult r = solve(inst, cfg);
            row.utilization = r.metrics.utilization;
            row.total_dose = r.metrics.total_dose;
            row.wall_seconds = r.wall_seconds;
          } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
          }
          if (log != nullptr) {
            const std::lock_guard lock(log_mutex);
            *log << fmt::format("{} alpha={} t={} util={:.4f}% dose={:.6e} wall={:.2f}s{}\n", row.instance, a, t,
                                100.0 * row.utilization, row.total_dose, row.wall_seconds,
                                row.ok ? "" : " FAILED: " + row.error);
          }
        }
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(order.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

double reference_time(const BenchReport& report) { return report.times.empty() ? 0.0 : report.times.front(); }

double reference_alpha(const BenchReport& report) {
  for (double a : report.alphas)
    if (a == 0.6) return a;
  return report.alphas.empty() ? 0.0 : report.alphas.front();
}

namespace {

template <typename CellValue>
std::string alpha_table(const BenchReport& report, CellValue value) {
  const double t = reference_time(report);
  std::string out = "family";
  for (double a : report.alphas) out += "," + format_double(a);
  out += '\n';
  for (const auto& f : report.families) {
    out += f;
    for (double a : report.alphas) out += "," + format_double(value(report.cell(f, a, t)));
    out += '\n';
  }
  return out;
}

}  // namespace

std::string fillrate_csv(const BenchReport& report) {
  return alpha_table(report, [](const BenchCell& c) { return c.fill_pct; });
}

std::string doserate_csv(const BenchReport& report) {
  return alpha_table(report, [](const BenchCell& c) { return c.dose; });
}

std::string dose_per_fill_csv(const BenchReport& report) {
  return alpha_table(report, [](const BenchCell& c) { return c.dose_per_fill(); });
}

std::string time_sweep_csv(const BenchReport& report) {
  const double a = reference_alpha(report);
  std::string out = "family";
  for (double t : report.times) out += fmt::format(",fill_pct_{0},dose_{0}", format_double(t));
  out += '\n';
  for (const auto& f : report.families) {
    out += f;
    for (double t : report.times) {
      const BenchCell c = report.cell(f, a, t);
      out += "," + format_double(c.fill_pct) + "," + format_double(c.dose);
    }
    out += '\n';
  }
  return out;
}

std::string instances_csv(const BenchReport& report) {
  std::string out = "family,instance,alpha,time_limit,fill_pct,total_dose,dose_per_fill,status\n";
  for (const BenchRow& r : report.rows) {
    const double fill = 100.0 * r.utilization;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.family, r.instance, format_double(r.alpha),
                       format_double(r.time_limit), format_double(fill), format_double(r.total_dose),
                       format_double(r.utilization > 0.0 ? r.total_dose / r.utilization : 0.0),
                       r.ok ? "ok" : "failed");
  }
  return out;
}

std::string summary_table(const BenchReport& report) {
  const double t = reference_time(report);
  std::string out = fmt::format("fill rate (%) at t = {} s\n{:<10}", format_double(t), "family");
  for (double a : report.alphas) out += fmt::format("{:>10}", fmt::format("a={}", a));
  out += '\n';
  for (const auto& f : report.families) {
    out += fmt::format("{:<10}", f);
    for (double a : report.alphas) out += fmt::format("{:>10.2f}", report.cell(f, a, t).fill_pct);
    out += '\n';
  }
  return out;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.alphas.empty() || opts.times.empty()) {
    err << "bench: alpha and time grids must be nonempty\n";
    return kUsage;
  }
  std::vector<Instance> instances;
  try {
    SearchConfig probe = opts.config;
    for (double a : opts.alphas) {
      probe.alpha = a;
      for (double t : opts.times) {
        probe.time_limit = t;
        probe.validate();
      }
    }
    if (!fs::is_directory(opts.corpus)) throw IoError(fmt::format("'{}' is not a directory", opts.corpus.string()));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opts.corpus))
      if (entry.is_regular_file() && entry.path().extension() == ".inst") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(fmt::format("no .inst files in '{}'", opts.corpus.string()));
    for (const auto& f : files) instances.push_back(load_instance(f));
  } catch (const std::invalid_argument& e) {
    err << "bench: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "bench: " << e.what() << '\n';
    return kUsage;
  }

  const BenchReport report =
      run_bench(instances, opts.alphas, opts.times, opts.config, opts.jobs, opts.verbose ? &err : nullptr);

  const fs::path dir = opts.output.empty() ? opts.corpus : opts.output;
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_text_file(dir / "fillrate.csv", fillrate_csv(report));
    write_text_file(dir / "doserate.csv", doserate_csv(report));
    write_text_file(dir / "dose_per_fill.csv", dose_per_fill_csv(report));
    write_text_file(dir / "time_sweep.csv", time_sweep_csv(report));
    write_text_file(dir / "instances.csv", instances_csv(report));
  } catch (const IoError& e) {
    err << "bench: " << e.what() << '\n';
    return kUsage;
  }
  out << summary_table(report);
  if (!report.all_ok()) {
    for (const BenchRow& r : report.rows)
      if (!r.ok) err << fmt::format("bench: {} alpha={} t={} failed: {}\n", r.instance, r.alpha, r.time_limit, r.error);
    return kFailure;
  }
  return kOk;
}

}  // namespace nwpack::cli
