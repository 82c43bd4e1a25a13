#pragma once

#include <filesystem>
#include <string>

#include "maxchaos/io.hpp"

namespace maxchaos {

enum class PlotKind {
  ecdf_overlay,  ///< needs column norm_max; drawn against the Gumbel CDF
  ks_vs_n,       ///< needs columns n and ks; log-scaled n axis
};

PlotKind parse_plot_kind(const std::string& name);

/// Fixed 800x600 canvas with axes, ticks and a legend. Output depends only
/// on the table, so equal inputs give byte-identical files. Throws
/// FormatError naming a missing column, or when the table has no rows.
std::string render_svg(const CsvTable& table, PlotKind kind);
std::string render_svg_file(const std::filesystem::path& csv_path, PlotKind kind);

}  // namespace maxchaos
