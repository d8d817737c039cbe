#pragma once

#include <string_view>

#include <Eigen/Core>

#include "actionraid/errors.hpp"

namespace actionraid {

enum class NormOrder { L1, L2 };

std::string_view to_string(NormOrder p);
/// Accepts "l1"/"L1"/"1" and "l2"/"L2"/"2".
NormOrder parse_norm_order(std::string_view text);

/// Nonnegative, finite ball radius.
class Radius {
 public:
  constexpr Radius() = default;
  explicit Radius(double value);
  constexpr double value() const { return value_; }

 private:
  double value_ = 0.0;
};

/// Delta = [delta_t ... delta_{t+H-1}]: one column per time step, one row per
/// action dimension. Always at least 1x1 with finite entries.
class PerturbationMatrix {
 public:
  PerturbationMatrix(Eigen::Index action_dim, Eigen::Index horizon);
  explicit PerturbationMatrix(Eigen::MatrixXd columns);

  Eigen::Index action_dim() const { return data_.rows(); }
  Eigen::Index horizon() const { return data_.cols(); }

  auto column(Eigen::Index k) const { return data_.col(k); }
  auto column(Eigen::Index k) { return data_.col(k); }
  const Eigen::MatrixXd& matrix() const { return data_; }

  friend bool operator==(const PerturbationMatrix& a, const PerturbationMatrix& b) {
    return a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

double norm_lp(const Eigen::Ref<const Eigen::VectorXd>& v, NormOrder p);

/// Outer norm `p_temporal` over the per-column inner norms `q_spatial`.
double norm_pq(const PerturbationMatrix& delta, NormOrder p_temporal, NormOrder q_spatial);

Eigen::VectorXd project_l2_ball(const Eigen::Ref<const Eigen::VectorXd>& v, Radius r);

/// Euclidean projection onto {x : |x|_1 <= r} by soft-thresholding with the
/// threshold found from a descending sort of |v|.
Eigen::VectorXd project_l1_ball(const Eigen::Ref<const Eigen::VectorXd>& v, Radius r);

Eigen::VectorXd project_ball(const Eigen::Ref<const Eigen::VectorXd>& v, NormOrder p, Radius r);

struct SequenceProjection {
  PerturbationMatrix deltas;
  /// Per-step budgets b_k (the temporal projection of the column norms).
  Eigen::VectorXd budgets;
  /// Column norms before projection.
  Eigen::VectorXd column_norms;
};

/// Two-stage spatial/temporal projection used by the look-ahead attack:
///   1. n_k = |delta_k|_{p_spatial}
///   2. b = projection of n onto the q_temporal ball of radius `budget`
///   3. delta_k is projected onto the p_spatial ball of radius b_k
/// With (L2, L1) this is the exact projection onto the mixed (1,2) ball, with
/// (L2, L2) it is the isotropic l2 projection of the flattened matrix.
SequenceProjection project_sequence_detailed(const PerturbationMatrix& delta, NormOrder p_spatial,
                                             NormOrder q_temporal, Radius budget);

PerturbationMatrix project_sequence(const PerturbationMatrix& delta, NormOrder p_spatial,
                                    NormOrder q_temporal, Radius budget);

}  // namespace actionraid
