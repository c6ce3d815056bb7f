#pragma once

// Self-contained SVG line charts rendered from report CSVs: no external
// renderer, axes labeled from the column headers. The loglog variant maps
// both axes through log10 and can annotate a fitted slope.

#include <optional>
#include <string>

#include "mshom/csv.hpp"

namespace mshom {

enum class PlotKind { line, loglog };

struct PlotOptions {
  PlotKind kind = PlotKind::line;
  int x_column = 0;                    // index into the header
  std::vector<int> y_columns;          // empty: every remaining column
  std::optional<double> annotate_slope;// loglog only: draws the fitted slope text
};

// renders table columns as polylines; throws ConfigError on empty data or a
// log-scale column that is not strictly positive
std::string render_svg(const CsvTable& table, const PlotOptions& options);

// convenience: read the csv, pick plot options by its header, write .svg next
// to it; returns the svg path. Unknown headers are rejected.
std::string emit_plot(const std::string& csv_path, PlotKind kind,
                      std::optional<double> annotate_slope = std::nullopt);

}  // namespace mshom
