#include "ddlqr/datamodel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ddlqr/errors.hpp"

namespace ddlqr {

Dataset::Dataset(Matrix x0, Matrix u0, Matrix x1) : x0_(std::move(x0)), u0_(std::move(u0)), x1_(std::move(x1)) {
  if (x0_.cols() != u0_.cols() || x0_.cols() != x1_.cols()) {
    throw DimensionMismatch("Dataset: X0, U0, X1 must have the same number of columns");
  }
  if (x1_.rows() != x0_.rows()) throw DimensionMismatch("Dataset: X1 and X0 must have the same number of rows");
  if (x0_.rows() < 1 || u0_.rows() < 1 || x0_.cols() < 1) {
    throw DimensionMismatch("Dataset: n, m and ell must be positive");
  }
  if (!x0_.allFinite() || !u0_.allFinite() || !x1_.allFinite()) {
    throw std::invalid_argument("Dataset: entries must be finite");
  }
}

Matrix Dataset::D0() const {
  Matrix out(n() + m(), ell());
  out << x0_, u0_;
  return out;
}

Matrix Dataset::D() const {
  Matrix out(2 * n() + m(), ell());
  out << x0_, u0_, x1_;
  return out;
}

namespace {

std::vector<double> singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

Eigen::Index rank_of(const std::vector<double>& sv, double rank_tol) {
  if (sv.empty() || sv.front() <= 0.0) return 0;
  Eigen::Index r = 0;
  for (double s : sv) r += s > rank_tol * sv.front() ? 1 : 0;
  return r;
}

SymMatrix covariance(const Matrix& a, Eigen::Index ell) {
  const Matrix c = a * a.transpose() / static_cast<double>(ell);
  return SymMatrix(0.5 * (c + c.transpose()));
}

}  // namespace

RankReport check_excitation(const Dataset& d, double rank_tol) {
  RankReport rep;
  rep.singular_values_D0 = singular_values(d.D0());
  rep.singular_values = singular_values(d.D());
  rep.rank_D0 = rank_of(rep.singular_values_D0, rank_tol);
  rep.rank_D = rank_of(rep.singular_values, rank_tol);
  rep.pe_holds = rep.rank_D0 == d.n() + d.m();
  rep.assumption1_holds = rep.rank_D == 2 * d.n() + d.m();
  return rep;
}

DataStats compute_stats(const Dataset& d, double rank_tol) {
  const Matrix d0 = d.D0();
  const Eigen::Index rank_d0 = numerical_rank(d0, rank_tol);
  if (rank_d0 < d.n() + d.m()) {
    throw ExcitationViolation("rank(D0) = " + std::to_string(rank_d0) + " < n + m = " +
                              std::to_string(d.n() + d.m()));
  }
  if (numerical_rank(d.X0(), rank_tol) < d.n()) throw StateRankViolation("rank(X0) < n");

  DataStats s;
  s.n = d.n();
  s.m = d.m();
  s.ell = d.ell();
  s.D0_pinv = pinv(d0, rank_tol);
  s.M_LS = d.X1() * s.D0_pinv;
  s.A_LS = s.M_LS.leftCols(s.n);
  s.B_LS = s.M_LS.rightCols(s.m);
  s.K_LS = d.U0() * pinv(d.X0(), rank_tol);
  s.delta_X = d.X1() - s.M_LS * d0;
  s.delta_U = d.U0() - s.K_LS * d.X0();
  // Residuals at rounding level relative to the data are exact fits. Left
  // alone, their covariance is noise that looks well conditioned by itself.
  if (s.delta_X.norm() <= rank_tol * std::max(d.X1().norm(), d0.norm())) s.delta_X.setZero();
  if (s.delta_U.norm() <= rank_tol * std::max(d.U0().norm(), d.X0().norm())) s.delta_U.setZero();
  s.sigma_X0 = covariance(d.X0(), s.ell);
  s.sigma_D0 = covariance(d0, s.ell);
  s.sigma_dX = covariance(s.delta_X, s.ell);
  s.sigma_dU = covariance(s.delta_U, s.ell);
  Matrix proj = Matrix::Identity(s.ell, s.ell) - s.D0_pinv * d0;
  s.proj_perp = 0.5 * (proj + proj.transpose());
  return s;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, int line, int column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("invalid number '" + field + "'", line, column);
  }
  return value;
}

long parse_dim(const std::string& field, int line, int column) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
    throw ParseError("invalid dimension '" + field + "'", line, column);
  }
  return value;
}

}  // namespace

Dataset parse_dataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  long n = 0, m = 0, ell = 0;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() != 6 || fields[0] != "n" || fields[1] != "m" || fields[2] != "ell") {
        throw ParseError("expected header 'n,m,ell,<n>,<m>,<ell>'", line_no, 1);
      }
      n = parse_dim(fields[3], line_no, 4);
      m = parse_dim(fields[4], line_no, 5);
      ell = parse_dim(fields[5], line_no, 6);
      have_header = true;
      continue;
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      values.push_back(parse_number(fields[c], line_no, static_cast<int>(c) + 1));
    }
    rows.push_back(std::move(values));
    row_lines.push_back(line_no);
  }

  if (!have_header) throw ParseError("missing header", line_no, 0);
  if (rows.empty()) throw ParseError("empty body", line_no, 0);

  const long width = 2 * n + m;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<long>(rows[r].size()) != width) {
      throw DimensionMismatch("row at line " + std::to_string(row_lines[r]) + " has " +
                              std::to_string(rows[r].size()) + " fields, expected " + std::to_string(width) +
                              " (x0: " + std::to_string(n) + ", u: " + std::to_string(m) +
                              ", x1: " + std::to_string(n) + ")");
    }
  }
  if (static_cast<long>(rows.size()) != ell) {
    throw DimensionMismatch("header declares ell = " + std::to_string(ell) + " but body has " +
                            std::to_string(rows.size()) + " rows");
  }

  Matrix x0(n, ell), u0(m, ell), x1(n, ell);
  for (long c = 0; c < ell; ++c) {
    const auto& r = rows[static_cast<std::size_t>(c)];
    for (long i = 0; i < n; ++i) x0(i, c) = r[static_cast<std::size_t>(i)];
    for (long i = 0; i < m; ++i) u0(i, c) = r[static_cast<std::size_t>(n + i)];
    for (long i = 0; i < n; ++i) x1(i, c) = r[static_cast<std::size_t>(n + m + i)];
  }
  return Dataset(std::move(x0), std::move(u0), std::move(x1));
}

std::string format_dataset(const Dataset& d) {
  std::string out = "n,m,ell," + std::to_string(d.n()) + "," + std::to_string(d.m()) + "," +
                    std::to_string(d.ell()) + "\n";
  char buf[32];
  auto put = [&](double v, bool first) {
    if (!first) out += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  };
  for (Eigen::Index c = 0; c < d.ell(); ++c) {
    bool first = true;
    for (Eigen::Index i = 0; i < d.n(); ++i, first = false) put(d.X0()(i, c), first);
    for (Eigen::Index i = 0; i < d.m(); ++i) put(d.U0()(i, c), false);
    for (Eigen::Index i = 0; i < d.n(); ++i) put(d.X1()(i, c), false);
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file " + path.string());
  out << format_dataset(d);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ddlqr
