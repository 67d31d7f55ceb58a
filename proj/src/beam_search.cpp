#include "nwpack/beam_search.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nwpack {

bool incumbent_compare(Volume candidate_volume, double candidate_dose, const Incumbent& incumbent) {
  if (!incumbent.found) return true;
  if (candidate_volume != incumbent.placed_volume) return candidate_volume > incumbent.placed_volume;
  return candidate_dose < incumbent.total_dose;
}

void SearchConfig::validate() const {
  if (!(time_limit > 0.0) || !std::isfinite(time_limit))
    throw std::invalid_argument(fmt::format("time limit must be positive, got {}", time_limit));
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  if (!(initial_width >= 1.0)) throw std::invalid_argument("initial width must be at least 1");
  if (!(width_growth > 1.0)) throw std::invalid_argument("width growth must exceed 1");
  block_gen.validate();
}

std::size_t effective_width(double w) {
  const double rounded = std::floor(w + 0.5);
  return rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
}

BeamSearch::BeamSearch(const Instance& instance, const BlockList& blocks, SearchConfig config)
    : instance_(&instance),
      blocks_(&blocks),
      config_(config),
      selector_(instance, blocks, ScoreParams::from_blocks(blocks, config.alpha)) {
  dose_layers_.reserve(blocks.size());
  for (const auto& b : blocks) {
    std::map<Length, double> layers;
    for (const BoxOffset& box : enumerate_boxes(*b)) {
      const BoxType& t = instance.type(box.type);
      layers[2 * box.offset.z + t.dims.h] += t.dose_1m();
    }
    std::vector<DoseLayer> out;
    out.reserve(layers.size());
    for (const auto& [c, ga] : layers) out.push_back({c, ga});
    dose_layers_.push_back(std::move(out));
  }
}

double BeamSearch::block_dose(std::uint32_t block, Length z) const {
  const Pool& pool = instance_->pool;
  double dose = 0.0;
  for (const DoseLayer& layer : dose_layers_[block]) {
    const double r = 0.5 * static_cast<double>(2 * (pool.height - z) - layer.twice_center) * pool.unit_scale;
    dose += dose_rate_single(1.0, layer.gamma_activity, r);
  }
  return dose;
}

SearchState BeamSearch::initial_state() const {
  SearchState s;
  s.remaining.reserve(instance_->box_types.size());
  for (const BoxType& t : instance_->box_types) s.remaining.push_back(t.count);
  for (std::size_t i = 0; i < blocks_->size(); ++i)
    if (counts_feasible((*blocks_)[i]->counts, s.remaining)) s.live_blocks.push_back(static_cast<std::uint32_t>(i));
  s.spaces.push_back(instance_->pool.region());
  if (config_.drop_unusable_spaces) drop_unusable(s);
  return s;
}

void BeamSearch::drop_unusable(SearchState& state) const {
  Dims smallest{std::numeric_limits<Length>::max(), std::numeric_limits<Length>::max(),
                std::numeric_limits<Length>::max()};
  for (std::uint32_t idx : state.live_blocks) {
    const Dims& d = (*blocks_)[idx]->dims;
    smallest = {std::min(smallest.l, d.l), std::min(smallest.w, d.w), std::min(smallest.h, d.h)};
  }
  std::erase_if(state.spaces, [&](const Space& s) {
    return s.dims.l < smallest.l || s.dims.w < smallest.w || s.dims.h < smallest.h;
  });
}

void BeamSearch::place_in(SearchState& state, std::uint32_t block, std::size_t space) const {
  if (space >= state.spaces.size()) throw std::logic_error("place: space index out of range");
  const Block& b = *(*blocks_)[block];
  const Space target = state.spaces[space];
  if (!fits(b.dims, target)) throw std::logic_error("place: block does not fit the space");
  if (!counts_feasible(b.counts, state.remaining)) throw std::logic_error("place: block exceeds remaining boxes");

  const Cuboid region{target.anchor, b.dims};
  state.spaces = update_spaces(state.spaces, space, region);
  for (const auto& c : b.counts) state.remaining[static_cast<std::size_t>(c.type)] -= c.count;
  std::erase_if(state.live_blocks,
                [&](std::uint32_t idx) { return !counts_feasible((*blocks_)[idx]->counts, state.remaining); });
  state.placements.push_back({block, target.anchor});
  state.placed_volume += b.box_volume;
  state.total_dose += block_dose(block, target.anchor.z);
  if (config_.drop_unusable_spaces) drop_unusable(state);
}

SearchState BeamSearch::place(const SearchState& state, std::uint32_t block, std::size_t space) const {
  SearchState next = state;
  place_in(next, block, space);
  return next;
}

std::vector<std::uint32_t> BeamSearch::select(const SearchState& state, const Space& space, std::size_t w) const {
  return selector_.select(state.live_blocks, space, state.remaining, w);
}

namespace {

struct Expansion {
  std::vector<SearchState> successors;
  bool truncated = false;
};

}  // namespace

static Expansion expand_impl(const BeamSearch& search, const SearchState& state, std::size_t w) {
  Expansion out;
  SearchState base = state;
  while (!base.spaces.empty()) {
    const std::size_t idx = *select_space(base.spaces);
    auto picks = search.selector().select(base.live_blocks, base.spaces[idx], base.remaining, w + 1);
    if (picks.empty()) {
      base.spaces.erase(base.spaces.begin() + static_cast<std::ptrdiff_t>(idx));
      continue;
    }
    if (picks.size() > w) {
      out.truncated = true;
      picks.pop_back();
    }
    out.successors.reserve(picks.size());
    for (std::uint32_t b : picks) out.successors.push_back(search.place(base, b, idx));
    break;
  }
  return out;
}

std::vector<SearchState> BeamSearch::expand(const SearchState& state, std::size_t w) const {
  if (w == 0) throw std::invalid_argument("expand width must be at least 1");
  return expand_impl(*this, state, w).successors;
}

Volume BeamSearch::greedy_rollout(const SearchState& state, Incumbent& incumbent) const {
  SearchState s = state;
  while (!s.spaces.empty()) {
    const std::size_t idx = *select_space(s.spaces);
    const auto pick = select(s, s.spaces[idx], 1);
    if (pick.empty()) {
      s.spaces.erase(s.spaces.begin() + static_cast<std::ptrdiff_t>(idx));
      continue;
    }
    place_in(s, pick.front(), idx);
  }
  if (incumbent_compare(s.placed_volume, s.total_dose, incumbent)) {
    incumbent.found = true;
    incumbent.placements = s.placements;
    incumbent.placed_volume = s.placed_volume;
    incumbent.utilization =
        static_cast<double>(s.placed_volume) / static_cast<double>(instance_->pool.volume());
    incumbent.total_dose = s.total_dose;
  }
  return s.placed_volume;
}

SearchResult BeamSearch::run(Clock::time_point deadline, const ProgressCallback& progress) const {
  SearchResult result;
  Incumbent& best = result.incumbent;
  SearchStats& stats = result.stats;
  const Clock::time_point start = Clock::now();

  // A rollout is not started when the previous one says it would end past the deadline.
  Clock::duration last_rollout{0};
  const auto out_of_budget = [&] {
    if (stats.evaluations == 0) return false;
    if (config_.max_evaluations != 0 && stats.evaluations >= config_.max_evaluations) return true;
    return Clock::now() + last_rollout >= deadline;
  };
  const auto report = [&] {
    if (!progress) return;
    progress({stats.restarts, stats.last_width, stats.evaluations,
              std::chrono::duration<double>(Clock::now() - start).count(), best.placed_volume, best.utilization,
              best.total_dose});
  };

  const SearchState root = initial_state();
  double width = config_.initial_width;
  bool stop = false;
  while (!stop) {
    const std::size_t w = effective_width(width);
    ++stats.restarts;
    stats.last_width = w;
    bool truncated = false;

    std::vector<SearchState> beam{root};
    bool at_root = true;
    while (!beam.empty()) {
      std::vector<SearchState> successors;
      for (const SearchState& s : beam) {
        Expansion e = expand_impl(*this, s, at_root ? w * w : w);
        truncated = truncated || e.truncated;
        for (auto& next : e.successors) successors.push_back(std::move(next));
      }
      at_root = false;

      for (SearchState& s : successors) {
        if (out_of_budget()) {
          stop = true;
          break;
        }
        const Clock::time_point t0 = Clock::now();
        s.score = greedy_rollout(s, best);
        last_rollout = Clock::now() - t0;
        ++stats.evaluations;
      }
      if (stop) break;

      std::vector<std::size_t> order(successors.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return successors[a].score > successors[b].score; });
      if (order.size() > w) {
        truncated = true;
        order.resize(w);
      }
      beam.clear();
      for (std::size_t i : order) beam.push_back(std::move(successors[i]));
    }
    report();
    if (stop) break;
    if (!truncated) {
      // Wider beams would revisit exactly the same tree.
      stats.exhausted = true;
      break;
    }
    width *= config_.width_growth;
    stop = out_of_budget();
  }
  return result;
}

Layout expand_layout(const std::vector<PlacedBlock>& placements, const BlockList& blocks) {
  Layout layout;
  for (const PlacedBlock& p : placements)
    for (const BoxOffset& box : enumerate_boxes(*blocks[p.block])) layout.push_back({box.type, p.anchor + box.offset});
  return layout;
}

SearchResult beam_search(const Instance& instance, const BlockList& blocks, const SearchConfig& config,
                         const ProgressCallback& progress) {
  config.validate();
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(config.time_limit));
  return BeamSearch(instance, blocks, config).run(deadline, progress);
}

}  // namespace nwpack
