#pragma once

// Experiment data matrices and the empirical statistics derived from them.

#include <filesystem>
#include <vector>

#include "ddlqr/matlin.hpp"

namespace ddlqr {

/// Raw data: column i of (X0, U0, X1) is one transition x0 -> x1 under u.
class Dataset {
 public:
  Dataset(Matrix x0, Matrix u0, Matrix x1);

  const Matrix& X0() const { return x0_; }
  const Matrix& U0() const { return u0_; }
  const Matrix& X1() const { return x1_; }

  Eigen::Index n() const { return x0_.rows(); }
  Eigen::Index m() const { return u0_.rows(); }
  Eigen::Index ell() const { return x0_.cols(); }

  /// [X0; U0]
  Matrix D0() const;
  /// [X0; U0; X1]
  Matrix D() const;

 private:
  Matrix x0_;
  Matrix u0_;
  Matrix x1_;
};

struct RankReport {
  Eigen::Index rank_D0 = 0;
  Eigen::Index rank_D = 0;
  bool pe_holds = false;           ///< rank(D0) == n + m
  bool assumption1_holds = false;  ///< rank(D) == 2n + m
  std::vector<double> singular_values;     ///< of D, descending
  std::vector<double> singular_values_D0;  ///< of D0, descending
};

RankReport check_excitation(const Dataset& d, double rank_tol = kRankTol);

/// Least-squares estimates, residuals and covariances. All covariances use
/// the 1/ell normalization.
struct DataStats {
  Eigen::Index n = 0, m = 0, ell = 0;
  SymMatrix sigma_X0;  ///< X0 X0' / ell
  SymMatrix sigma_D0;  ///< D0 D0' / ell
  Matrix A_LS, B_LS;
  Matrix M_LS;  ///< [A_LS B_LS] = X1 D0^+
  Matrix K_LS;  ///< U0 X0^+
  Matrix delta_X;  ///< X1 - M_LS D0
  Matrix delta_U;  ///< U0 - K_LS X0
  SymMatrix sigma_dX;
  SymMatrix sigma_dU;
  Matrix D0_pinv;
  Matrix proj_perp;  ///< I - D0^+ D0
};

/// Raises ExcitationViolation if rank(D0) < n + m and StateRankViolation if
/// rank(X0) < n.
DataStats compute_stats(const Dataset& d, double rank_tol = kRankTol);

/// CSV: header `n,m,ell,<n>,<m>,<ell>`, then ell rows `x0..., u..., x1...`
/// printed with 17 significant digits. Lines starting with '#' are ignored.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

Dataset parse_dataset(std::string_view text);
std::string format_dataset(const Dataset& d);

}  // namespace ddlqr
