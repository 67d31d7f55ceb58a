#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <ostream>

#include "nwpack/cli.hpp"

namespace nwpack::cli {

namespace {

constexpr std::array<const char*, 5> kRamp = {"#fee391", "#fec44f", "#fe9929", "#d95f0e", "#993404"};
constexpr int kMargin = 20;
constexpr int kTitle = 18;
constexpr int kLegend = 70;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Instance& instance, const SolutionRecord& record, int bands) {
  bands = std::max(1, bands);
  const Pool& pool = instance.pool;
  const Length panel_h = pool.width + kTitle;
  const Length width = pool.length + 2 * kMargin;
  const Length height = kMargin + bands * (panel_h + kMargin) + kLegend;

  // Color class by quantile of the boxes' 1 m dose.
  std::vector<double> doses;
  double dose_lo = 0.0, dose_hi = 0.0;
  for (std::size_t i = 0; i < record.placements.size(); ++i) {
    const Placement& p = record.placements[i];
    const BoxType& t = instance.type(p.box_type_id);
    doses.push_back(t.dose_1m());
    const double d = placement_dose(p, t, pool);
    dose_lo = i == 0 ? d : std::min(dose_lo, d);
    dose_hi = i == 0 ? d : std::max(dose_hi, d);
  }
  std::vector<double> sorted = doses;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile_class = [&](double d) {
    const auto rank = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), d) - sorted.begin());
    return std::min<std::size_t>(kRamp.size() - 1, rank * kRamp.size() / std::max<std::size_t>(1, sorted.size()));
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  svg += fmt::format("<title>{} ({} boxes)</title>\n", escape(record.instance_name), record.placements.size());

  // Top band first, so the page reads like looking down into the pool.
  for (int band = bands - 1, row = 0; band >= 0; --band, ++row) {
    const Length z_lo = pool.height * band / bands;
    const Length z_hi = pool.height * (band + 1) / bands;
    const Length top = kMargin + row * (panel_h + kMargin);
    svg += fmt::format("<g class=\"band\" data-band=\"{}\" data-z-lo=\"{}\" data-z-hi=\"{}\">\n", band, z_lo, z_hi);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">z {} - {}</text>\n", kMargin, top + 13, z_lo, z_hi);
    const Length oy = top + kTitle;

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < record.placements.size(); ++i) {
      const Length z = record.placements[i].anchor.z;
      const int b = static_cast<int>(std::min<Length>(bands - 1, z * bands / pool.height));
      if (b == band) members.push_back(i);
    }
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return record.placements[a].anchor.z < record.placements[b].anchor.z;
    });
    for (std::size_t i : members) {
      const Placement& p = record.placements[i];
      const Dims& d = instance.type(p.box_type_id).dims;
      svg += fmt::format(
          "<rect class=\"box\" data-type=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" "
          "stroke=\"#333\" stroke-width=\"0.5\"/>\n",
          p.box_type_id, kMargin + p.anchor.x, oy + p.anchor.y, d.l, d.w, kRamp[quantile_class(doses[i])]);
    }
    svg += fmt::format(
        "<rect class=\"pool\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000\"/>\n",
        kMargin, oy, pool.length, pool.width);
    svg += "</g>\n";
  }

  const Length ly = height - kLegend + 10;
  svg += fmt::format("<g class=\"legend\" data-dose-min=\"{}\" data-dose-max=\"{}\">\n", format_double(dose_lo),
                     format_double(dose_hi));
  for (std::size_t k = 0; k < kRamp.size(); ++k) {
    svg += fmt::format("<rect class=\"swatch\" x=\"{}\" y=\"{}\" width=\"30\" height=\"12\" fill=\"{}\"/>\n",
                       kMargin + 40 * static_cast<Length>(k), ly, kRamp[k]);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\">1 m dose quintiles, low to high</text>\n",
                     kMargin + 40 * static_cast<Length>(kRamp.size()) + 5, ly + 10);
  if (record.placements.empty()) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\">no boxes placed</text>\n", kMargin, ly + 35);
  } else {
    svg += fmt::format("<text x=\"{}\" y=\"{}\">placement dose {:.4e} .. {:.4e} Sv/t</text>\n", kMargin, ly + 35,
                       dose_lo, dose_hi);
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Instance inst = load_instance(opts.instance);
    const SolutionRecord record = read_solution(read_text_file(opts.solution), inst);
    if (!inst.name.empty() && record.instance_name != inst.name) {
      err << fmt::format("render: solution is for '{}' but instance is '{}'\n", record.instance_name, inst.name);
      return kUsage;
    }
    const ValidationReport report = validate_layout(record.placements, inst);
    if (!report.ok()) {
      err << "render: solution does not fit the instance:\n" << report.to_string();
      return kUsage;
    }
    write_text_file(opts.output, render_svg(inst, record, opts.bands));
  } catch (const std::runtime_error& e) {
    err << "render: " << e.what() << '\n';
    return kUsage;
  }
  out << fmt::format("wrote {}\n", opts.output.string());
  return kOk;
}

}  // namespace nwpack::cli
