#include "nwpack/solver.hpp"

#include <fmt/format.h>

#include "nwpack/block_generation.hpp"

namespace nwpack {

SolveResult solve(const Instance& instance, const SearchConfig& config, const ProgressCallback& progress) {
  const auto start = Clock::now();
  config.validate();
  instance.validate();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.time_limit));

  SolveResult out;
  const BlockList blocks = generate_blocks(instance, config.block_gen);
  out.block_count = blocks.size();
  out.generation_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  const BeamSearch search(instance, blocks, config);
  SearchResult found = search.run(deadline, progress);
  out.stats = found.stats;
  out.layout = expand_layout(found.incumbent.placements, blocks);

  const ValidationReport report = validate_layout(out.layout, instance);
  if (!report.ok()) throw InvariantError("solver produced an invalid layout:\n" + report.to_string());
  out.metrics = layout_metrics(out.layout, instance);
  if (out.metrics.placed_volume != found.incumbent.placed_volume ||
      !relative_close(out.metrics.total_dose, found.incumbent.total_dose, 1e-9))
    throw InvariantError(fmt::format("incumbent bookkeeping mismatch: volume {} vs {}, dose {} vs {}",
                                     found.incumbent.placed_volume, out.metrics.placed_volume,
                                     found.incumbent.total_dose, out.metrics.total_dose));
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace nwpack
