#include "ddlqr/harness/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "ddlqr/errors.hpp"

namespace ddlqr::harness {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Short form for SVG coordinates.
std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

double metric_value(const SweepRow& r, const std::string& metric) {
  if (metric == "deviation") return r.deviation;
  if (metric == "dist_to_kls") return r.dist_to_kls;
  if (metric == "h2_on_truth") return r.h2_on_truth.value_or(std::numeric_limits<double>::quiet_NaN());
  if (metric == "objective") return r.objective;
  if (metric == "wall_time_s") return r.wall_time_s;
  throw std::invalid_argument("unknown sweep metric: " + metric);
}

nlohmann::json row_major(const Matrix& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      arr.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
    }
  }
  return arr;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows, const CsvOptions& opts) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: empty table");
  const Eigen::Index m = rows.front().K.rows(), n = rows.front().K.cols();
  for (const auto& r : rows) {
    if (r.K.rows() != m || r.K.cols() != n || r.A_cl.rows() != n || r.A_cl.cols() != n) {
      throw std::invalid_argument("emit_csv: rows of mixed shape");
    }
  }
  std::ostringstream os;
  os << "case,lambda,status";
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) os << ",k_" << i + 1 << j + 1;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) os << ",acl_" << i + 1 << j + 1;
  }
  os << ",deviation,dist_to_kls,h2_on_truth,objective,wall_time_s\n";
  for (const auto& r : rows) {
    // Labels like {1,2,3} contain commas.
    os << '"' << r.case_label << '"' << ',' << num(r.lambda) << ',' << conic::to_string(r.status);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) os << ',' << num(r.K(i, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) os << ',' << num(r.A_cl(i, j));
    }
    os << ',' << num(r.deviation) << ',' << num(r.dist_to_kls) << ',';
    if (r.h2_on_truth) {
      os << num(*r.h2_on_truth);
    } else if (r.truth_unstable) {
      os << "unstable";
    }
    os << ',' << num(r.objective) << ',' << num(opts.zero_timing ? 0.0 : r.wall_time_s) << '\n';
  }
  return os.str();
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path, const CsvOptions& opts) {
  write_text(path, format_sweep_csv(rows, opts));
}

std::string format_svg_phase_portrait(const Matrix& a_cl, const std::vector<std::vector<Vector>>& trajectories,
                                      const std::string& title) {
  if (a_cl.rows() != 2 || a_cl.cols() != 2) throw DimensionMismatch("phase portrait needs a 2 x 2 A_cl");
  constexpr double kSize = 600.0, kMargin = 40.0, kRange = 10.0;
  const double scale = (kSize - 2 * kMargin) / (2 * kRange);
  auto px = [&](double x) { return kMargin + (x + kRange) * scale; };
  auto py = [&](double y) { return kSize - kMargin - (y + kRange) * scale; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 "
     << kSize << ' ' << kSize << "\">\n"
     << "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">"
     << "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#888888\"/></marker></defs>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize - 2 * kMargin << "\" height=\""
     << kSize - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!title.empty()) {
    os << "<text x=\"" << kSize / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
       << "</text>\n";
  }
  os << "<g stroke=\"#888888\" stroke-width=\"1\">\n";
  constexpr int kGrid = 21;
  const double step = 2 * kRange / (kGrid - 1), arrow = 0.4 * step;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      Vector x(2);
      x << -kRange + i * step, -kRange + j * step;
      const Vector dx = a_cl * x - x;
      const double len = dx.norm();
      if (len < 1e-12) continue;
      const Vector tip = x + arrow * dx / len;
      os << "<line x1=\"" << coord(px(x(0))) << "\" y1=\"" << coord(py(x(1))) << "\" x2=\"" << coord(px(tip(0)))
         << "\" y2=\"" << coord(py(tip(1))) << "\" marker-end=\"url(#head)\"/>\n";
    }
  }
  os << "</g>\n";
  std::size_t t = 0;
  for (const auto& traj : trajectories) {
    os << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << kPalette[t++ % std::size(kPalette)]
       << "\" points=\"";
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj[k].size() != 2) throw DimensionMismatch("phase portrait trajectories must be 2-D");
      os << (k ? " " : "") << coord(px(traj[k](0))) << ',' << coord(py(traj[k](1)));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg_phase_portrait(const Matrix& a_cl, const std::vector<std::vector<Vector>>& trajectories,
                             const std::filesystem::path& path, const std::string& title) {
  write_text(path, format_svg_phase_portrait(a_cl, trajectories, title));
}

std::string format_svg_sweep(const std::vector<SweepRow>& rows, const std::string& metric) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& r : rows) {
    const double v = metric_value(r, metric);
    if (!(r.lambda > 0.0) || !(v > 0.0) || !std::isfinite(v)) continue;
    if (!series.count(r.case_label)) order.push_back(r.case_label);
    const double lx = std::log10(r.lambda), ly = std::log10(v);
    series[r.case_label].emplace_back(lx, ly);
    xmin = std::min(xmin, lx);
    xmax = std::max(xmax, lx);
    ymin = std::min(ymin, ly);
    ymax = std::max(ymax, ly);
  }
  if (order.empty()) throw std::invalid_argument("emit_svg_sweep: no plottable rows for " + metric);
  if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
  xmin = std::floor(xmin);
  xmax = std::ceil(xmax);
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);

  constexpr double kW = 720.0, kH = 480.0, kLeft = 70.0, kRight = 150.0, kTop = 30.0, kBottom = 50.0;
  auto px = [&](double lx) { return kLeft + (lx - xmin) / (xmax - xmin) * (kW - kLeft - kRight); };
  auto py = [&](double ly) { return kH - kBottom - (ly - ymin) / (ymax - ymin) * (kH - kTop - kBottom); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
     << ' ' << kH << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight << "\" height=\""
     << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<g font-size=\"11\" fill=\"black\">\n";
  const int xstride = std::max(1, static_cast<int>(xmax - xmin) / 10);
  for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); e += xstride) {
    os << "<text x=\"" << coord(px(e)) << "\" y=\"" << kH - kBottom + 16 << "\" text-anchor=\"middle\">1e" << e
       << "</text>\n";
  }
  const int ystride = std::max(1, static_cast<int>(ymax - ymin) / 8);
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystride) {
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << coord(py(e) + 4) << "\" text-anchor=\"end\">1e" << e
       << "</text>\n";
  }
  os << "<text x=\"" << (kW - kRight + kLeft) / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">lambda</text>\n"
     << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kH / 2 << ")\">"
     << xml_escape(metric) << "</text>\n"
     << "</g>\n";
  std::size_t c = 0;
  for (const auto& label : order) {
    const char* color = kPalette[c % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color << "\" points=\"";
    const auto& pts = series[label];
    for (std::size_t k = 0; k < pts.size(); ++k) {
      os << (k ? " " : "") << coord(px(pts[k].first)) << ',' << coord(py(pts[k].second));
    }
    os << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(c);
    os << "<text x=\"" << kW - kRight + 12 << "\" y=\"" << coord(ly) << "\" font-size=\"12\" fill=\"" << color
       << "\">" << xml_escape(label) << "</text>\n";
    ++c;
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg_sweep(const std::vector<SweepRow>& rows, const std::string& metric,
                    const std::filesystem::path& path) {
  write_text(path, format_svg_sweep(rows, metric));
}

std::string format_solution_json(const LqrSolution& sol, const SolutionMeta& meta) {
  nlohmann::json j;
  j["program"] = to_string(sol.program);
  j["status"] = conic::to_string(sol.status);
  j["n"] = sol.A_cl.rows();
  j["m"] = sol.K.rows();
  j["K"] = row_major(sol.K);
  j["P"] = row_major(sol.P.mat());
  j["A_cl"] = row_major(sol.A_cl);
  j["objective"] = finite_or_null(sol.objective);
  j["lambda"] = meta.lambda;
  j["lambda1"] = meta.weights.lambda1;
  j["lambda2"] = meta.weights.lambda2;
  j["lambda3"] = meta.weights.lambda3;
  j["iterations"] = sol.solver.iters;
  j["gap"] = finite_or_null(sol.solver.gap);
  j["primal_infeas"] = finite_or_null(sol.solver.primal_infeas);
  j["dual_infeas"] = finite_or_null(sol.solver.dual_infeas);
  j["wall_time_s"] = meta.zero_timing ? 0.0 : sol.solver.wall_time.count();
  return j.dump(2) + "\n";
}

void write_solution_json(const LqrSolution& sol, const SolutionMeta& meta, const std::filesystem::path& path) {
  write_text(path, format_solution_json(sol, meta));
}

}  // namespace ddlqr::harness
