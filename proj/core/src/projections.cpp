#include "actionraid/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace actionraid {

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

std::string_view to_string(NormOrder p) { return p == NormOrder::L1 ? "l1" : "l2"; }

NormOrder parse_norm_order(std::string_view text) {
  if (text == "l1" || text == "L1" || text == "1") return NormOrder::L1;
  if (text == "l2" || text == "L2" || text == "2") return NormOrder::L2;
  throw InvalidInputError("unknown norm order '" + std::string(text) + "'");
}

Radius::Radius(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidInputError("radius must be finite and nonnegative, got " + std::to_string(value));
  }
}

PerturbationMatrix::PerturbationMatrix(Eigen::Index action_dim, Eigen::Index horizon)
    : PerturbationMatrix(Eigen::MatrixXd::Zero(action_dim, horizon)) {}

PerturbationMatrix::PerturbationMatrix(Eigen::MatrixXd columns) : data_(std::move(columns)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw InvalidInputError("perturbation matrix needs action_dim >= 1 and horizon >= 1");
  }
  require_finite(data_, "perturbation matrix");
}

double norm_lp(const Eigen::Ref<const Eigen::VectorXd>& v, NormOrder p) {
  require_finite(v, "norm_lp");
  return p == NormOrder::L1 ? v.lpNorm<1>() : v.norm();
}

double norm_pq(const PerturbationMatrix& delta, NormOrder p_temporal, NormOrder q_spatial) {
  Eigen::VectorXd column_norms(delta.horizon());
  for (Eigen::Index k = 0; k < delta.horizon(); ++k) {
    column_norms[k] = norm_lp(delta.column(k), q_spatial);
  }
  return norm_lp(column_norms, p_temporal);
}

Eigen::VectorXd project_l2_ball(const Eigen::Ref<const Eigen::VectorXd>& v, Radius r) {
  require_finite(v, "project_l2_ball");
  const double n = v.stableNorm();
  if (n <= r.value()) return v;
  if (r.value() == 0.0) return Eigen::VectorXd::Zero(v.size());
  return v * (r.value() / n);
}

Eigen::VectorXd project_l1_ball(const Eigen::Ref<const Eigen::VectorXd>& v, Radius r) {
  require_finite(v, "project_l1_ball");
  const double radius = r.value();
  if (v.lpNorm<1>() <= radius) return v;
  if (radius == 0.0) return Eigen::VectorXd::Zero(v.size());

  std::vector<double> mags(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // Soft threshold theta = (sum_{j<rho} u_j - r) / rho, written relative to u_rho
  // so that inputs many orders of magnitude above r do not cancel:
  //   D_k = sum_{j<k} (u_j - u_k),  rho = largest k with D_k < r,
  //   theta = u_rho + (D_rho - r) / rho.
  std::size_t rho = 1;
  double excess = 0.0;  // D_rho
  double d = 0.0;
  for (std::size_t k = 1; k < mags.size(); ++k) {
    d += static_cast<double>(k) * (mags[k - 1] - mags[k]);
    if (d >= radius) break;
    rho = k + 1;
    excess = d;
  }
  const double pivot = mags[rho - 1];
  const double share = (radius - excess) / static_cast<double>(rho);

  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    const double shrunk = a >= pivot ? (a - pivot) + share : std::max(share - (pivot - a), 0.0);
    out[i] = shrunk > 0.0 ? std::copysign(shrunk, v[i]) : 0.0;
  }
  return out;
}

Eigen::VectorXd project_ball(const Eigen::Ref<const Eigen::VectorXd>& v, NormOrder p, Radius r) {
  return p == NormOrder::L1 ? project_l1_ball(v, r) : project_l2_ball(v, r);
}

SequenceProjection project_sequence_detailed(const PerturbationMatrix& delta, NormOrder p_spatial,
                                             NormOrder q_temporal, Radius budget) {
  const Eigen::Index horizon = delta.horizon();
  Eigen::VectorXd norms(horizon);
  for (Eigen::Index k = 0; k < horizon; ++k) norms[k] = norm_lp(delta.column(k), p_spatial);

  SequenceProjection out{PerturbationMatrix(delta.action_dim(), horizon),
                         Eigen::VectorXd::Zero(horizon), norms};
  if (budget.value() == 0.0) return out;

  if (horizon == 1) {
    // A single step has no temporal allocation to make; both temporal norms
    // reduce to min(n, B), so this is exactly the spatial ball projection.
    out.deltas.column(0) = project_ball(delta.column(0), p_spatial, budget);
    out.budgets[0] = std::min(norms[0], budget.value());
    return out;
  }

  out.budgets = project_ball(norms, q_temporal, budget);
  for (Eigen::Index k = 0; k < horizon; ++k) {
    const double b_k = out.budgets[k];
    if (norms[k] == 0.0 || b_k <= 0.0) continue;
    if (norms[k] <= b_k) {
      out.deltas.column(k) = delta.column(k);
    } else {
      out.deltas.column(k) = project_ball(delta.column(k), p_spatial, Radius(b_k));
    }
  }
  return out;
}

PerturbationMatrix project_sequence(const PerturbationMatrix& delta, NormOrder p_spatial,
                                    NormOrder q_temporal, Radius budget) {
  return project_sequence_detailed(delta, p_spatial, q_temporal, budget).deltas;
}

}  // namespace actionraid
