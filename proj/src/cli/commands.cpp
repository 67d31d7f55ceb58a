#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <ostream>

#include "nwpack/block_generation.hpp"
#include "nwpack/cli.hpp"
#include "nwpack/generator.hpp"
#include "nwpack/solver.hpp"

namespace nwpack::cli {

namespace fs = std::filesystem;

SolutionRecord make_record(const Instance& instance, const Layout& layout, const LayoutMetrics& metrics,
                           const SearchConfig& config, std::uint64_t seed) {
  SolutionRecord r;
  r.instance_name = instance.name;
  r.config = {config.alpha,          config.time_limit,          seed, config.block_gen.max_blocks,
              config.block_gen.min_fill_rate, config.max_evaluations};
  r.placements = layout;
  r.placed_volume = metrics.placed_volume;
  r.utilization = metrics.utilization;
  r.total_dose = metrics.total_dose;
  return r;
}

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<FamilySpec> specs;
  try {
    if (opts.families.empty()) {
      specs = all_table_families(opts.seed, opts.instances);
    } else {
      for (const auto& f : opts.families) specs.push_back(table_family(f, opts.seed, opts.instances));
    }
  } catch (const GenerationError& e) {
    err << "gen: " << e.what() << '\n';
    return kUsage;
  }

  std::error_code ec;
  fs::create_directories(opts.output, ec);
  if (ec || !fs::is_directory(opts.output)) {
    err << fmt::format("gen: cannot create output directory '{}': {}\n", opts.output.string(), ec.message());
    return kUsage;
  }

  std::string manifest = "# instance family seed types boxes box_volume pool_volume\n";
  std::size_t written = 0;
  try {
    for (const FamilySpec& spec : specs) {
      for (const Instance& inst : generate_family(spec)) {
        write_text_file(opts.output / (inst.name + ".inst"), write_instance(inst));
        manifest += fmt::format("{} {} {} {} {} {} {}\n", inst.name, spec.name, inst.provenance->seed,
                                inst.type_count(), inst.total_boxes(), inst.total_box_volume(),
                                inst.pool.volume());
        ++written;
      }
    }
    write_text_file(opts.output / "manifest.txt", manifest);
  } catch (const IoError& e) {
    err << "gen: " << e.what() << '\n';
    return kUsage;
  } catch (const GenerationError& e) {
    err << "gen: " << e.what() << '\n';
    return kUsage;
  }
  out << fmt::format("wrote {} instances to {}\n", written, opts.output.string());
  return kOk;
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    opts.config.validate();
    inst = load_instance(opts.instance);
  } catch (const std::invalid_argument& e) {
    err << "solve: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "solve: " << e.what() << '\n';
    return kUsage;
  }

  fs::path target = opts.output;
  if (target.empty()) target = fs::path(opts.instance).replace_extension(".sol");

  try {
    if (!opts.dump_blocks.empty())
      write_text_file(opts.dump_blocks, dump_blocks(generate_blocks(inst, opts.config.block_gen)));

    ProgressCallback progress;
    if (opts.verbose) {
      progress = [&err](const ProgressEvent& e) {
        err << fmt::format("restart {:3d} width {:3d} evals {:7d} t={:7.2f}s util={:.4f}% dose={:.6e}\n",
                           e.restart, e.width, e.evaluations, e.elapsed_seconds, 100.0 * e.best_utilization,
                           e.best_dose);
      };
    }
    const SolveResult result = solve(inst, opts.config, progress);
    const SolutionRecord record = make_record(inst, result.layout, result.metrics, opts.config, opts.seed);
    const std::string text = write_solution(record);

    // Audit what will actually be on disk, not the in-memory record.
    const AuditResult audit = audit_solution(read_solution(text), inst);
    if (!audit.ok()) {
      err << "solve: internal error, solution failed its own audit:\n" << audit.to_string();
      return kInternal;
    }
    write_text_file(target, text);
    out << fmt::format("{:.4f} {} {:.3f}\n", 100.0 * result.metrics.utilization,
                       format_double(result.metrics.total_dose), result.wall_seconds);
  } catch (const IoError& e) {
    err << "solve: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantError& e) {
    err << "solve: internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const ValidationError& e) {
    err << "solve: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

int cmd_audit(const fs::path& solution, const fs::path& instance, std::ostream& out, std::ostream& err) {
  Instance inst;
  SolutionRecord record;
  try {
    inst = load_instance(instance);
    record = read_solution(read_text_file(solution));
  } catch (const std::runtime_error& e) {
    err << "audit: " << e.what() << '\n';
    return kUsage;
  }
  const AuditResult audit = audit_solution(record, inst);
  if (!audit.ok()) {
    out << fmt::format("FAIL {}: {} violation(s), {} metric mismatch(es)\n", solution.string(),
                       audit.report.violations.size(), audit.mismatches.size());
    out << audit.to_string();
    return kFailure;
  }
  out << fmt::format("OK {}: {} boxes, utilization {:.4f}%, total dose {}\n", solution.string(),
                     record.placements.size(), 100.0 * record.utilization, format_double(record.total_dose));
  return kOk;
}

namespace {

fs::path corpus_from_env() {
  const char* v = std::getenv(kCorpusEnv);
  return v == nullptr ? fs::path{} : fs::path{v};
}

void add_search_flags(CLI::App& cmd, SearchConfig& config) {
  cmd.add_option("--max-blocks", config.block_gen.max_blocks, "Cap on the generated block list")
      ->capture_default_str();
  cmd.add_option("--min-fill-rate", config.block_gen.min_fill_rate, "Minimum box fill of a generated block")
      ->capture_default_str();
  cmd.add_option("--max-evals", config.max_evaluations,
                 "Stop after this many greedy evaluations (0 = time limit only)")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nuclear waste container packing: block-based beam search solver and benchmark tools"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark instance families");
  gen_cmd->add_option("--family", gen.families, "Family name (set1 … set16); repeatable, default all");
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--instances", gen.instances, "Instances per family")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, fmt::format("Output directory (default ${})", kCorpusEnv));

  SolveOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and write a .sol file");
  solve_cmd->add_option("instance", solve_opts.instance, "Instance file")->required();
  solve_cmd->add_option("--alpha", solve_opts.config.alpha, "Dose weight in the block score")
      ->capture_default_str();
  solve_cmd->add_option("--time-limit", solve_opts.config.time_limit, "Wall-clock budget in seconds")
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve_opts.seed, "Seed recorded with the solution")->capture_default_str();
  solve_cmd->add_option("-o,--output", solve_opts.output, "Solution file (default <instance>.sol)");
  solve_cmd->add_option("--dump-blocks", solve_opts.dump_blocks, "Write the generated block list here");
  solve_cmd->add_flag("-v,--verbose", solve_opts.verbose, "Log search progress to stderr");
  add_search_flags(*solve_cmd, solve_opts.config);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Solve a corpus over alpha/time grids and write CSV tables");
  bench_cmd->add_option("corpus", bench.corpus, fmt::format("Corpus directory (default ${})", kCorpusEnv));
  bench_cmd->add_option("--alpha-grid", bench.alphas, "Comma-separated alpha values")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--time-grid", bench.times, "Comma-separated time limits (s)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Instances solved concurrently")->capture_default_str();
  bench_cmd->add_option("-o,--output", bench.output, "Directory for the CSV files (default: corpus)");
  bench_cmd->add_flag("-v,--verbose", bench.verbose, "Log each solve to stderr");
  add_search_flags(*bench_cmd, bench.config);

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render", "Render a solution as SVG cross-sections");
  render_cmd->add_option("solution", render.solution, "Solution file")->required();
  render_cmd->add_option("--instance", render.instance, "Instance file")->required();
  render_cmd->add_option("-o,--output", render.output, "SVG file")->required();
  render_cmd->add_option("--bands", render.bands, "Number of height bands")->capture_default_str();

  fs::path audit_solution_path, audit_instance_path;
  auto* audit_cmd = app.add_subcommand("audit", "Check a solution against its instance");
  audit_cmd->add_option("solution", audit_solution_path, "Solution file")->required();
  audit_cmd->add_option("instance", audit_instance_path, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*gen_cmd) {
    if (gen.output.empty()) gen.output = corpus_from_env();
    if (gen.output.empty()) {
      err << fmt::format("gen: no output directory (use -o or set {})\n", kCorpusEnv);
      return kUsage;
    }
    return cmd_gen(gen, out, err);
  }
  if (*solve_cmd) return cmd_solve(solve_opts, out, err);
  if (*bench_cmd) {
    if (bench.corpus.empty()) bench.corpus = corpus_from_env();
    if (bench.corpus.empty()) {
      err << fmt::format("bench: no corpus directory (pass one or set {})\n", kCorpusEnv);
      return kUsage;
    }
    return cmd_bench(bench, out, err);
  }
  if (*render_cmd) return cmd_render(render, out, err);
  if (*audit_cmd) return cmd_audit(audit_solution_path, audit_instance_path, out, err);
  return kUsage;
}

}  // namespace nwpack::cli
