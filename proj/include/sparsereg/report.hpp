#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "sparsereg/experiments.hpp"
#include "sparsereg/risk.hpp"

namespace sparsereg::report {

using Cell = std::variant<long long, double, std::string>;

/// Column-named table that serialises to CSV or a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { csv, json };

/// Shortest round-trip decimal for finite values; nan / inf / -inf otherwise.
std::string format_number(double v);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Writes `<dir>/<stem>.csv` or `.json`; returns the path written.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  const std::string& stem, Format format);
void write_text(const std::filesystem::path& path, const std::string& text);

Table risk_curve_table(const RiskCurve& curve);
Table envelope_table(const std::vector<EnvelopePoint>& points);
Table trials_table(const std::vector<TrialResult>& trials);
Table path_table(const LassoPath& path);
Table curve_table(const std::vector<CurvePoint>& points);

/// Long-format (series, x, y) view of plottable outputs.
std::vector<CurvePoint> plot_data(const RiskCurve& curve);
std::vector<CurvePoint> plot_data(const std::vector<EnvelopePoint>& points);

/// Minimal SVG line chart: linear axes, one polyline per series, legend.
/// Non-finite samples are skipped; single-sample series are drawn as dots.
std::string render_svg(const std::vector<CurvePoint>& points, const std::string& title);

}  // namespace sparsereg::report
