#include "maxchaos/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "maxchaos/errors.hpp"
#include "maxchaos/evt.hpp"

namespace maxchaos {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 70.0;

struct Frame {
  double x0, x1, y0, y1;
  bool log_x = false;

  double px(double x) const {
    const double u = log_x ? (std::log10(x) - std::log10(x0)) / (std::log10(x1) - std::log10(x0))
                            : (x - x0) / (x1 - x0);
    return kLeft + u * (kWidth - kLeft - kRight);
  }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string num(double v) { return format_sig(v, 6); }

void polyline(std::ostringstream& out, const Frame& fr, const std::vector<std::pair<double, double>>& pts,
              const char* colour) {
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out << ' ';
    out << num(fr.px(pts[k].first)) << ',' << num(fr.py(pts[k].second));
  }
  out << "\"/>\n";
}

void axes(std::ostringstream& out, const Frame& fr, const std::string& xlabel, const std::string& ylabel) {
  const double bx = kLeft, by = kHeight - kBottom, tx = kWidth - kRight, ty = kTop;
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << tx << "\" y2=\"" << by << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << ty << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double x = fr.log_x ? std::pow(10.0, std::log10(fr.x0) + k * (std::log10(fr.x1) - std::log10(fr.x0)) / 5)
                              : fr.x0 + k * (fr.x1 - fr.x0) / 5;
    const double y = fr.y0 + k * (fr.y1 - fr.y0) / 5;
    out << "<line x1=\"" << num(fr.px(x)) << "\" y1=\"" << by << "\" x2=\"" << num(fr.px(x)) << "\" y2=\""
        << by + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(fr.px(x)) << "\" y=\"" << by + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">" << format_sig(x, 3) << "</text>\n";
    out << "<line x1=\"" << bx - 6 << "\" y1=\"" << num(fr.py(y)) << "\" x2=\"" << bx << "\" y2=\""
        << num(fr.py(y)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << bx - 10 << "\" y=\"" << num(fr.py(y) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << format_sig(y, 3) << "</text>\n";
  }
  out << "<text x=\"" << (bx + tx) / 2 << "\" y=\"" << kHeight - 20
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"20\" y=\"" << (by + ty) / 2 << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (by + ty) / 2 << ")\">" << ylabel << "</text>\n";
}

void legend(std::ostringstream& out, const std::vector<std::pair<std::string, const char*>>& entries) {
  double y = kTop + 15;
  for (const auto& [label, colour] : entries) {
    out << "<line x1=\"560\" y1=\"" << y << "\" x2=\"590\" y2=\"" << y << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"598\" y=\"" << y + 4 << "\" font-size=\"13\">" << label << "</text>\n";
    y += 20;
  }
}

std::string ecdf_overlay(const CsvTable& table) {
  std::vector<double> xs = table.column("norm_max");
  std::sort(xs.begin(), xs.end());
  const double lo = std::min(xs.front(), -2.0), hi = std::max(xs.back(), 6.0);
  Frame fr{lo, hi, 0.0, 1.0};

  std::vector<std::pair<double, double>> ecdf;
  ecdf.reserve(2 * xs.size() + 2);
  ecdf.emplace_back(lo, 0.0);
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    ecdf.emplace_back(xs[k], k / n);
    ecdf.emplace_back(xs[k], (k + 1) / n);
  }
  ecdf.emplace_back(hi, 1.0);

  std::vector<std::pair<double, double>> curve;
  for (int k = 0; k <= 200; ++k) {
    const double x = lo + (hi - lo) * k / 200.0;
    curve.emplace_back(x, gumbel_cdf(x));
  }

  std::ostringstream out;
  axes(out, fr, "normalized maximum", "distribution function");
  polyline(out, fr, ecdf, "#1f77b4");
  polyline(out, fr, curve, "#d62728");
  legend(out, {{"empirical (" + std::to_string(xs.size()) + " maxima)", "#1f77b4"}, {"Gumbel", "#d62728"}});
  return out.str();
}

std::string ks_vs_n(const CsvTable& table) {
  const auto& n = table.column("n");
  const auto& ks = table.column("ks");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!(n[k] > 0.0)) throw FormatError("column n: values must be positive");
    pts.emplace_back(n[k], ks[k]);
  }
  std::sort(pts.begin(), pts.end());
  double x0 = pts.front().first, x1 = pts.back().first;
  if (x1 <= x0) {
    x0 /= 10.0;
    x1 *= 10.0;
  }
  double ymax = 0.0;
  for (const auto& p : pts) ymax = std::max(ymax, p.second);
  Frame fr{x0, x1, 0.0, ymax > 0.0 ? 1.1 * ymax : 1.0, true};

  std::ostringstream out;
  axes(out, fr, "population size n", "KS distance");
  polyline(out, fr, pts, "#1f77b4");
  for (const auto& p : pts) {
    out << "<circle cx=\"" << num(fr.px(p.first)) << "\" cy=\"" << num(fr.py(p.second))
        << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
  }
  legend(out, {{"KS distance to limit", "#1f77b4"}});
  return out.str();
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "ecdf_overlay") return PlotKind::ecdf_overlay;
  if (name == "ks_vs_n") return PlotKind::ks_vs_n;
  throw ParameterError("unknown plot kind '" + name + "' (expected ecdf_overlay or ks_vs_n)");
}

std::string render_svg(const CsvTable& table, PlotKind kind) {
  if (kind == PlotKind::ecdf_overlay) {
    table.column("norm_max");
  } else {
    table.column("n");
    table.column("ks");
  }
  if (table.rows == 0) throw FormatError("csv has no data rows");
  const std::string body = kind == PlotKind::ecdf_overlay ? ecdf_overlay(table) : ks_vs_n(table);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n" + body +
         "</svg>\n";
}

std::string render_svg_file(const std::filesystem::path& csv_path, PlotKind kind) {
  return render_svg(read_csv(csv_path), kind);
}

}  // namespace maxchaos
