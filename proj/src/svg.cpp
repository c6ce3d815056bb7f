#include "mshom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mshom/error.hpp"

namespace mshom {

namespace {

constexpr int kWidth = 640, kHeight = 420;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 20, kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Mapper {
  double lo, hi;
  int pix_lo, pix_hi;
  double map(double v) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  const double span = hi - lo;
  if (span <= 0) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0})
    if (raw <= mult * mag) {
      step = mult * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
    ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string render_svg(const CsvTable& table, const PlotOptions& options) {
  if (table.rows.empty()) throw ConfigError("no data rows to plot");
  std::vector<int> ys = options.y_columns;
  if (ys.empty())
    for (int c = 0; c < static_cast<int>(table.header.size()); ++c)
      if (c != options.x_column) ys.push_back(c);
  if (ys.empty()) throw ConfigError("no y columns to plot");

  const bool logscale = options.kind == PlotKind::loglog;
  auto transform = [&](double v, const std::string& col) {
    if (!logscale) return v;
    if (!(v > 0.0))
      throw ConfigError("loglog plot needs positive values in column '" + col + "'");
    return std::log10(v);
  };

  // gather transformed extents
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& row : table.rows) {
    const double x = transform(row[static_cast<std::size_t>(options.x_column)],
                               table.header[static_cast<std::size_t>(options.x_column)]);
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    for (int c : ys) {
      const double y =
          transform(row[static_cast<std::size_t>(c)], table.header[static_cast<std::size_t>(c)]);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;

  const Mapper mx{xlo, xhi, kMarginL, kWidth - kMarginR};
  const Mapper my{ylo, yhi, kHeight - kMarginB, kMarginT};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes box
  svg << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << (kWidth - kMarginL - kMarginR) << "\" height=\"" << (kHeight - kMarginT - kMarginB)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto tick_label = [&](double t) {
    return logscale ? ("1e" + fmt(t)) : fmt(t);
  };
  for (double t : nice_ticks(xlo, xhi)) {
    const double px = mx.map(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << (kHeight - kMarginB) << "\" x2=\"" << px
        << "\" y2=\"" << (kHeight - kMarginB + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << (kHeight - kMarginB + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(ylo, yhi)) {
    const double py = my.map(t);
    svg << "<line x1=\"" << (kMarginL - 5) << "\" y1=\"" << py << "\" x2=\"" << kMarginL
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (kMarginL - 8) << "\" y=\"" << (py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }

  // axis labels from headers
  svg << "<text x=\"" << (kMarginL + (kWidth - kMarginL - kMarginR) / 2) << "\" y=\""
      << (kHeight - 12) << "\" font-size=\"13\" text-anchor=\"middle\">"
      << table.header[static_cast<std::size_t>(options.x_column)] << "</text>\n";
  std::string ylabel;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (i) ylabel += ", ";
    ylabel += table.header[static_cast<std::size_t>(ys[i])];
  }
  svg << "<text x=\"16\" y=\"" << (kMarginT + (kHeight - kMarginT - kMarginB) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (kMarginT + (kHeight - kMarginT - kMarginB) / 2) << ")\">" << ylabel << "</text>\n";

  // polylines
  for (std::size_t yi = 0; yi < ys.size(); ++yi) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[yi % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : table.rows) {
      const double x = transform(row[static_cast<std::size_t>(options.x_column)],
                                 table.header[static_cast<std::size_t>(options.x_column)]);
      const double y = transform(row[static_cast<std::size_t>(ys[yi])],
                                 table.header[static_cast<std::size_t>(ys[yi])]);
      svg << fmt(mx.map(x)) << "," << fmt(my.map(y)) << " ";
    }
    svg << "\"/>\n";
    // legend swatch
    svg << "<text x=\"" << (kWidth - kMarginR - 8) << "\" y=\"" << (kMarginT + 16 + 14 * yi)
        << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << kPalette[yi % 6] << "\">"
        << table.header[static_cast<std::size_t>(ys[yi])] << "</text>\n";
  }

  if (options.annotate_slope) {
    svg << "<text x=\"" << (kMarginL + 10) << "\" y=\"" << (kMarginT + 16)
        << "\" font-size=\"12\">fitted slope = " << fmt(*options.annotate_slope)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string emit_plot(const std::string& csv_path, PlotKind kind,
                      std::optional<double> annotate_slope) {
  const CsvTable table = read_csv(csv_path);

  // recognized report headers and their plotting recipe
  std::string joined;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) joined += ",";
    joined += table.header[i];
  }
  PlotOptions opt;
  opt.kind = kind;
  opt.annotate_slope = annotate_slope;
  CsvTable view = table;

  if (joined == "t,gap,bound" || joined == "delta,lhs,stderr" ||
      joined == "t,x_index,u" || joined == "t,x_index,u,v") {
    if (joined == "t,x_index,u" || joined == "t,x_index,u,v") {
      // profile at the final snapshot: u (and v) against x_index
      const double tmax = table.rows.back()[0];
      CsvTable prof;
      prof.header = {"x_index", "u"};
      const bool has_v = joined.back() == 'v';
      if (has_v) prof.header.push_back("v");
      for (const auto& row : table.rows)
        if (row[0] == tmax) {
          std::vector<double> r{row[1], row[2]};
          if (has_v) r.push_back(row[3]);
          prof.rows.push_back(r);
        }
      view = std::move(prof);
    }
  } else if (joined ==
             "epsilon,replica,sup_l2_error,final_l2_error,energy_sup,grad_energy_int,"
             "dudt_energy") {
    // aggregate the replica mean of the sup error per epsilon
    std::map<double, std::pair<double, int>> acc;
    for (const auto& row : table.rows) {
      acc[row[0]].first += row[2];
      acc[row[0]].second += 1;
    }
    CsvTable agg;
    agg.header = {"epsilon", "mean_sup_l2_error"};
    for (const auto& [eps, pair] : acc)
      agg.rows.push_back({eps, pair.first / pair.second});
    view = std::move(agg);
  } else {
    throw ConfigError("unknown csv header '" + joined + "' for plotting");
  }

  const std::string out_path =
      csv_path.substr(0, csv_path.rfind('.')) + ".svg";
  const std::string svg = render_svg(view, opt);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw NumericError("cannot write " + out_path);
  out << svg;
  return out_path;
}

}  // namespace mshom
