#include "sparsereg/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sparsereg::report {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row has the wrong width");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return std::get<std::string>(cell);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const Support& support) {
  std::string s;
  for (std::size_t i = 0; i < support.size(); ++i) {
    s += (i ? " " : "") + std::to_string(support[i]);
  }
  return s;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + csv_escape(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              // JSON has no nan/inf; keep them as strings rather than null
              if (std::isfinite(v)) obj[table.columns[i]] = v;
              else obj[table.columns[i]] = format_number(v);
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open for writing", path,
                                                    std::make_error_code(std::errc::io_error));
  out << text;
  if (!out) throw std::filesystem::filesystem_error("write failed", path,
                                                    std::make_error_code(std::errc::io_error));
}

std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  const std::string& stem, Format format) {
  const auto path = dir / (stem + (format == Format::csv ? ".csv" : ".json"));
  write_text(path, format == Format::csv ? to_csv(table) : to_json(table));
  return path;
}

Table risk_curve_table(const RiskCurve& curve) {
  Table t{{"beta", "r_l0", "r_l1", "ratio"}, {}};
  for (Index i = 0; i < curve.betas.size(); ++i) {
    t.add({curve.betas[i], curve.r_l0[i], curve.r_l1[i], curve.ratio_l1_over_l0[i]});
  }
  return t;
}

Table envelope_table(const std::vector<EnvelopePoint>& points) {
  Table t{{"gamma_free", "gamma_opposing", "sup_ratio", "argmax_beta", "calibration"}, {}};
  for (const auto& p : points) {
    t.add({p.gamma_free, p.gamma_opposing, p.sup_ratio, p.argmax_beta, to_string(p.calibration)});
  }
  return t;
}

Table trials_table(const std::vector<TrialResult>& trials) {
  Table t{{"seed", "method", "support_size", "criterion", "oos_rmse", "terminal_sse"}, {}};
  for (const auto& r : trials) {
    t.add({std::to_string(r.seed), to_string(r.method), static_cast<long long>(r.support_size),
           r.in_sample_criterion, r.oos_rmse, r.terminal_sse});
  }
  return t;
}

Table path_table(const LassoPath& path) {
  Table t{{"step", "penalty", "support_size", "residual_norm2", "support"}, {}};
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& s = path.steps[i];
    t.add({static_cast<long long>(i), s.penalty, static_cast<long long>(s.support.size()),
           s.residual_norm2, join(s.support)});
  }
  return t;
}

Table curve_table(const std::vector<CurvePoint>& points) {
  Table t{{"series", "x", "y"}, {}};
  for (const auto& p : points) t.add({p.series, p.x, p.y});
  return t;
}

std::vector<CurvePoint> plot_data(const RiskCurve& curve) {
  std::vector<CurvePoint> out;
  const std::pair<const char*, const Eigen::ArrayXd*> series[] = {
      {"r_l0", &curve.r_l0}, {"r_l1", &curve.r_l1}, {"ratio", &curve.ratio_l1_over_l0}};
  for (const auto& [name, values] : series) {
    for (Index i = 0; i < curve.betas.size(); ++i) {
      out.push_back({name, curve.betas[i], (*values)[i]});
    }
  }
  return out;
}

std::vector<CurvePoint> plot_data(const std::vector<EnvelopePoint>& points) {
  std::vector<CurvePoint> out;
  for (const auto& p : points) out.push_back({to_string(p.calibration), p.gamma_free, p.sup_ratio});
  return out;
}

std::string render_svg(const std::vector<CurvePoint>& points, const std::string& title) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 150, kTop = 30, kBottom = 40;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& p : points) {
    auto& s = series[p.series];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    s.emplace_back(p.x, p.y);
    x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };
  auto num = [](double v) { return format_number(std::round(v * 100.0) / 100.0); };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"18\">" << title << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    svg << "<text x=\"" << num(sx(xv)) << "\" y=\"" << kH - kBottom + 15
        << "\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    svg << "<text x=\"" << kLeft - 5 << "\" y=\"" << num(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
  }
  int k = 0;
  for (const auto& [name, pts] : series) {
    const char* color = kColors[k % 6];
    if (pts.size() == 1) {
      svg << "<circle cx=\"" << num(sx(pts[0].first)) << "\" cy=\"" << num(sy(pts[0].second))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else if (!pts.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        svg << (i ? " " : "") << num(sx(pts[i].first)) << "," << num(sy(pts[i].second));
      }
      svg << "\"/>\n";
    }
    const double ly = kTop + 12 + 16 * k;
    svg << "<line x1=\"" << kW - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kW - kRight + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\"/>\n";
    svg << "<text x=\"" << kW - kRight + 35 << "\" y=\"" << ly << "\">" << name << "</text>\n";
    ++k;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sparsereg::report
