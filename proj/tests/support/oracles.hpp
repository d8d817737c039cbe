#pragma once

// Independent reference implementations used to check the library. None of
// these call into actionraid's projection code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace oracle {

/// Euclidean projection onto the l2 ball by bisection on the KKT multiplier:
/// x = v / (1 + lambda) with |x| = r.
inline Eigen::VectorXd l2_ball(const Eigen::VectorXd& v, double r) {
  if (v.norm() <= r) return v;
  double lo = 0.0;
  double hi = 1.0;
  while (v.norm() / (1.0 + hi) > r) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (v.norm() / (1.0 + mid) > r ? lo : hi) = mid;
  }
  return v / (1.0 + hi);
}

/// Euclidean projection onto the l1 ball by enumerating every support set and
/// keeping the feasible KKT point closest to v.
inline Eigen::VectorXd l1_ball(const Eigen::VectorXd& v, double r) {
  if (v.cwiseAbs().sum() <= r) return v;
  const auto n = v.size();
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum += std::abs(v[i]);
        ++count;
      }
    }
    const double lambda = (sum - r) / count;
    if (lambda < 0.0) continue;
    bool ok = true;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(v[i]);
      if (mask & (1u << i)) {
        if (a < lambda) ok = false;
        x[i] = std::copysign(a - lambda, v[i]);
      } else if (a > lambda + 1e-12) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double dist = (x - v).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

/// Brute force over a square grid of spacing `step` covering the ball; keeps
/// the closest grid point that lies inside.
inline Eigen::Vector2d grid_ball_2d(const Eigen::Vector2d& v, bool l1, double r, double step) {
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_dist = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::ceil(r / step));
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      const Eigen::Vector2d x(i * step, j * step);
      const double norm = l1 ? x.cwiseAbs().sum() : x.norm();
      if (norm > r + 1e-12) continue;
      const double dist = (x - v).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = x;
      }
    }
  }
  return best;
}

/// Exact projection onto {X : sum_k |x_k|_2 <= B} (group lasso ball) by
/// enumerating the set of surviving columns.
inline Eigen::MatrixXd group_l2_l1_ball(const Eigen::MatrixXd& m, double budget) {
  const auto h = m.cols();
  Eigen::VectorXd norms(h);
  for (Eigen::Index k = 0; k < h; ++k) norms[k] = m.col(k).norm();
  if (norms.sum() <= budget) return m;
  Eigen::MatrixXd best = Eigen::MatrixXd::Zero(m.rows(), h);
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << h); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index k = 0; k < h; ++k) {
      if (mask & (1u << k)) {
        sum += norms[k];
        ++count;
      }
    }
    const double lambda = (sum - budget) / count;
    if (lambda < 0.0) continue;
    bool ok = true;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m.rows(), h);
    for (Eigen::Index k = 0; k < h; ++k) {
      if (mask & (1u << k)) {
        if (norms[k] < lambda || norms[k] == 0.0) {
          ok = false;
          continue;
        }
        x.col(k) = m.col(k) * (1.0 - lambda / norms[k]);
      } else if (norms[k] > lambda + 1e-12) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double dist = (x - m).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

inline Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

inline Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

/// The three-step column/budget scheme, written with the oracle projections.
inline Eigen::MatrixXd two_stage(const Eigen::MatrixXd& m, bool spatial_l1, bool temporal_l1,
                                 double budget) {
  const auto h = m.cols();
  auto spatial_norm = [&](const Eigen::VectorXd& c) {
    return spatial_l1 ? c.cwiseAbs().sum() : c.norm();
  };
  auto spatial_proj = [&](const Eigen::VectorXd& c, double r) {
    return spatial_l1 ? l1_ball(c, r) : l2_ball(c, r);
  };
  Eigen::VectorXd norms(h);
  for (Eigen::Index k = 0; k < h; ++k) norms[k] = spatial_norm(m.col(k));
  const Eigen::VectorXd b = temporal_l1 ? l1_ball(norms, budget) : l2_ball(norms, budget);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), h);
  for (Eigen::Index k = 0; k < h; ++k) {
    if (norms[k] > 0.0 && b[k] > 0.0) out.col(k) = spatial_proj(m.col(k), b[k]);
  }
  return out;
}

/// Gini coefficient from the pairwise definition.
inline double gini(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double pair_sum = 0.0;
  double total = 0.0;
  for (double a : xs) {
    total += a;
    for (double b : xs) pair_sum += std::abs(a - b);
  }
  if (total == 0.0) return 0.0;
  const double n = static_cast<double>(xs.size());
  return pair_sum / (2.0 * n * n * (total / n));
}

/// Central finite-difference gradient.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace oracle
