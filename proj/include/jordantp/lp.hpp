#pragma once

/**
 * @file lp.hpp
 * @brief Dense two-phase tableau simplex for small linear programs.
 *
 *   minimize    cost . x
 *   subject to  A_ub x <= b_ub,  A_eq x = b_eq,
 *               x_j >= 0 unless free[j]
 *
 * Bland's rule throughout, so degenerate problems (common here: many vertex
 * constraints are active at once) cannot cycle. Sized for a few hundred rows.
 */

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace jordantp::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration limit";
  }
  return "?";
}

struct Problem {
  Eigen::VectorXd cost;
  Eigen::MatrixXd A_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  std::vector<bool> free;  ///< empty means every variable is nonnegative

  Eigen::Index num_vars() const { return cost.size(); }
};

struct Result {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double infeasibility = 0.0;  ///< phase-one optimum; > 0 when infeasible
};

namespace detail {

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double at(Eigen::Index r, Eigen::Index c) const { return t_(r, c); }
  double& rhs(Eigen::Index r) { return t_(r, cols()); }
  double rhs(Eigen::Index r) const { return t_(r, cols()); }
  auto objective_row() { return t_.row(rows()); }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Minimizes the objective row over columns [0, allowed). Returns the
  /// status and counts pivots into `iterations`.
  Status run(Eigen::Index allowed, double eps, int max_iter, int& iterations) {
    while (true) {
      if (iterations >= max_iter) return Status::iteration_limit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(rows(), j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        if (t_(i, enter) > eps) {
          const double ratio = rhs(i) / t_(i, enter);
          if (ratio < best - eps ||
              (std::abs(ratio - best) <= eps && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

inline Result solve(const Problem& prob, double eps = 1e-11, int max_iter = 50000) {
  const Eigen::Index n = prob.num_vars();
  const Eigen::Index m_ub = prob.A_ub.rows();
  const Eigen::Index m_eq = prob.A_eq.rows();
  const Eigen::Index m = m_ub + m_eq;
  auto is_free = [&](Eigen::Index j) { return !prob.free.empty() && prob.free[static_cast<std::size_t>(j)]; };

  // Column layout: structural (free variables split in +/- parts), slacks, artificials.
  std::vector<Eigen::Index> pos_col(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(n), -1);
  Eigen::Index ncol = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos_col[static_cast<std::size_t>(j)] = ncol++;
    if (is_free(j)) neg_col[static_cast<std::size_t>(j)] = ncol++;
  }
  const Eigen::Index slack0 = ncol;
  ncol += m_ub;
  const Eigen::Index art0 = ncol;
  ncol += m;

  detail::Tableau tab(m, ncol);
  auto fill_row = [&](Eigen::Index r, const Eigen::RowVectorXd& a, double b, Eigen::Index slack) {
    const double sign = b < 0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      tab.at(r, pos_col[static_cast<std::size_t>(j)]) = sign * a[j];
      if (neg_col[static_cast<std::size_t>(j)] >= 0) tab.at(r, neg_col[static_cast<std::size_t>(j)]) = -sign * a[j];
    }
    if (slack >= 0) tab.at(r, slack) = sign;
    tab.at(r, art0 + r) = 1.0;
    tab.rhs(r) = sign * b;
    tab.basis()[static_cast<std::size_t>(r)] = art0 + r;
  };
  for (Eigen::Index i = 0; i < m_ub; ++i) fill_row(i, prob.A_ub.row(i), prob.b_ub[i], slack0 + i);
  for (Eigen::Index i = 0; i < m_eq; ++i) fill_row(m_ub + i, prob.A_eq.row(i), prob.b_eq[i], -1);

  // Phase one: minimize the sum of artificials.
  auto obj = tab.objective_row();
  obj.setZero();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < art0; ++j) obj[j] -= tab.at(i, j);
    obj[ncol] -= tab.rhs(i);
  }

  Result res;
  Status st = tab.run(art0, eps, max_iter, res.iterations);
  if (st == Status::iteration_limit) {
    res.status = st;
    return res;
  }
  double rhs_scale = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(i)));
  res.infeasibility = -obj[ncol];
  if (res.infeasibility > 1e-9 * rhs_scale) {
    res.status = Status::infeasible;
    return res;
  }

  // Drive remaining artificials out of the basis where possible; rows where
  // that fails are redundant and keep a zero-level artificial.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < art0) continue;
    for (Eigen::Index j = 0; j < art0; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase two objective row: reduced costs c_j - c_B B^-1 A_j.
  Eigen::VectorXd col_cost = Eigen::VectorXd::Zero(ncol);
  for (Eigen::Index j = 0; j < n; ++j) {
    col_cost[pos_col[static_cast<std::size_t>(j)]] = prob.cost[j];
    if (neg_col[static_cast<std::size_t>(j)] >= 0) col_cost[neg_col[static_cast<std::size_t>(j)]] = -prob.cost[j];
  }
  obj.setZero();
  obj.head(ncol) = col_cost.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double cb = col_cost[tab.basis()[static_cast<std::size_t>(i)]];
    if (cb == 0.0) continue;
    for (Eigen::Index j = 0; j <= ncol; ++j) obj[j] -= cb * tab.at(i, j);
  }
  st = tab.run(art0, eps, max_iter, res.iterations);
  res.status = st;
  if (st != Status::optimal) return res;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(ncol);
  for (Eigen::Index i = 0; i < m; ++i) z[tab.basis()[static_cast<std::size_t>(i)]] = tab.rhs(i);
  res.x.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    res.x[j] = z[pos_col[static_cast<std::size_t>(j)]];
    if (neg_col[static_cast<std::size_t>(j)] >= 0) res.x[j] -= z[neg_col[static_cast<std::size_t>(j)]];
  }
  res.objective = prob.cost.dot(res.x);
  return res;
}

/// Feasibility of the system alone (zero objective).
inline Result feasible_point(Problem prob) {
  prob.cost = Eigen::VectorXd::Zero(prob.num_vars());
  return solve(prob);
}

}  // namespace jordantp::lp
