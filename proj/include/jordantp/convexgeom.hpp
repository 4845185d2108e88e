#pragma once

/**
 * @file convexgeom.hpp
 * @brief The infimum function e_w on compact convex sets.
 *
 * For an extreme point w of a polytope, e_w(z) is the least value at z of an
 * affine function a with 0 <= a <= 1 on the polytope and a(w) = 1. An affine
 * function attains its extremes at vertices, so the constraint set is finite
 * and each e_w(z) is a small linear program in the d+1 coefficients (c, f).
 * The polytope has the property that every e_w is affine and equals 1 only
 * at w exactly when `check_star_star` passes for all vertices. Smooth l^p
 * balls are handled in closed form through the supporting functional.
 */

#include "jordantp/core.hpp"
#include "jordantp/lp.hpp"
#include "jordantp/models/lp_qubit.hpp"

#include <numbers>

namespace jordantp {

struct AffineFunction {
  double c = 0.0;
  Eigen::VectorXd f;

  double operator()(const Eigen::VectorXd& z) const { return c + f.dot(z); }
};

/// Compact convex set given by its extreme points.
class PolytopeStateSpace {
 public:
  explicit PolytopeStateSpace(std::vector<Eigen::VectorXd> vertices) : vertices_(std::move(vertices)) { validate(); }

  const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
  const Eigen::VectorXd& vertex(std::size_t k) const { return vertices_.at(k); }
  std::size_t size() const { return vertices_.size(); }
  Eigen::Index dim() const { return vertices_.front().size(); }

  /// Rows [1, v^T], one per vertex.
  Eigen::MatrixXd augmented() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(size()), dim() + 1);
    for (std::size_t k = 0; k < size(); ++k) {
      m(static_cast<Eigen::Index>(k), 0) = 1.0;
      m.row(static_cast<Eigen::Index>(k)).tail(dim()) = vertices_[k].transpose();
    }
    return m;
  }

  /// Barycentric weights of z over `points` (nonnegative, summing to 1), or
  /// nullopt if z is outside their convex hull.
  static std::optional<Eigen::VectorXd> convex_weights(const std::vector<Eigen::VectorXd>& points,
                                                       const Eigen::VectorXd& z) {
    const auto k = static_cast<Eigen::Index>(points.size());
    const Eigen::Index d = z.size();
    lp::Problem prob;
    prob.cost = Eigen::VectorXd::Zero(k);
    prob.A_ub.resize(0, k);
    prob.b_ub.resize(0);
    prob.A_eq.resize(d + 1, k);
    prob.b_eq.resize(d + 1);
    for (Eigen::Index j = 0; j < k; ++j) {
      prob.A_eq(0, j) = 1.0;
      prob.A_eq.col(j).tail(d) = points[static_cast<std::size_t>(j)];
    }
    prob.b_eq[0] = 1.0;
    prob.b_eq.tail(d) = z;
    const auto res = lp::solve(prob);
    if (res.status != lp::Status::optimal) return std::nullopt;
    return res.x;
  }

  std::optional<Eigen::VectorXd> barycentric(const Eigen::VectorXd& z) const { return convex_weights(vertices_, z); }

 private:
  void validate() const {
    if (vertices_.size() < 2) throw InvalidArgument("polytope needs at least two vertices");
    const Eigen::Index d = vertices_.front().size();
    if (d < 1) throw InvalidArgument("polytope vertices must have positive dimension");
    for (const auto& v : vertices_) {
      if (v.size() != d) throw InvalidArgument("polytope vertices have mixed dimensions");
      if (!v.allFinite()) throw InvalidArgument("polytope vertex has non-finite coordinates");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
        if ((vertices_[i] - vertices_[j]).norm() <= 1e-12) throw InvalidArgument("polytope vertices are not distinct");
      }
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      std::vector<Eigen::VectorXd> others;
      for (std::size_t j = 0; j < vertices_.size(); ++j) {
        if (j != i) others.push_back(vertices_[j]);
      }
      if (convex_weights(others, vertices_[i])) {
        throw InvalidArgument("vertex " + std::to_string(i) + " is not an extreme point");
      }
    }
  }

  std::vector<Eigen::VectorXd> vertices_;
};

// ---------------------------------------------------------------------------
// Standard shapes
// ---------------------------------------------------------------------------

namespace shapes {

/// Regular k-gon on the unit circle, first vertex at the top.
inline PolytopeStateSpace regular_polygon(int k) {
  std::vector<Eigen::VectorXd> vs;
  for (int i = 0; i < k; ++i) {
    const double t = std::numbers::pi / 2 + 2 * std::numbers::pi * i / k;
    vs.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
  }
  return PolytopeStateSpace(std::move(vs));
}

inline PolytopeStateSpace triangle() { return regular_polygon(3); }

/// Vertices in cyclic order, so w1 and w3 are opposite corners.
inline PolytopeStateSpace square() {
  return PolytopeStateSpace({Eigen::Vector2d(1, 1), Eigen::Vector2d(-1, 1), Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, -1)});
}

/// Convex hull of 0, e_1, ..., e_d in R^d.
inline PolytopeStateSpace standard_simplex(int d) {
  std::vector<Eigen::VectorXd> vs{Eigen::VectorXd::Zero(d)};
  for (int i = 0; i < d; ++i) vs.push_back(Eigen::VectorXd::Unit(d, i));
  return PolytopeStateSpace(std::move(vs));
}

}  // namespace shapes

// ---------------------------------------------------------------------------
// e_w by linear programming
// ---------------------------------------------------------------------------

struct EOmegaSolution {
  double value = 0.0;
  AffineFunction minimizer;
};

/// Solves min a(z) over affine a with 0 <= a(v) <= 1 at every vertex and
/// a(w) = 1, w the vertex `omega_index`.
inline EOmegaSolution e_omega_solve(const PolytopeStateSpace& poly, std::size_t omega_index, const Eigen::VectorXd& zeta,
                                    const Tolerance& = {}) {
  if (omega_index >= poly.size()) throw InvalidArgument("extreme point index out of range");
  if (zeta.size() != poly.dim()) throw DimensionMismatch(static_cast<std::size_t>(poly.dim()), static_cast<std::size_t>(zeta.size()));
  if (!poly.barycentric(zeta)) throw InvalidArgument("point is not in the convex hull of the polytope");

  const Eigen::MatrixXd aug = poly.augmented();
  const Eigen::Index vcount = aug.rows();
  const Eigen::Index nvar = aug.cols();
  lp::Problem prob;
  prob.cost.resize(nvar);
  prob.cost[0] = 1.0;
  prob.cost.tail(nvar - 1) = zeta;
  prob.A_ub.resize(2 * vcount, nvar);
  prob.A_ub.topRows(vcount) = aug;
  prob.A_ub.bottomRows(vcount) = -aug;
  prob.b_ub.resize(2 * vcount);
  prob.b_ub.head(vcount).setOnes();
  prob.b_ub.tail(vcount).setZero();
  prob.A_eq = aug.row(static_cast<Eigen::Index>(omega_index));
  prob.b_eq = Eigen::VectorXd::Ones(1);
  prob.free.assign(static_cast<std::size_t>(nvar), true);

  const auto res = lp::solve(prob);
  if (res.status != lp::Status::optimal) {
    throw Error(std::string("e_omega linear program failed: ") + lp::status_name(res.status) +
                " after " + std::to_string(res.iterations) + " pivots");
  }
  return EOmegaSolution{res.objective, AffineFunction{res.x[0], res.x.tail(nvar - 1)}};
}

inline double e_omega_value(const PolytopeStateSpace& poly, std::size_t omega_index, const Eigen::VectorXd& zeta,
                            const Tolerance& tol = {}) {
  return e_omega_solve(poly, omega_index, zeta, tol).value;
}

struct EOmegaReport {
  std::size_t omega_index = 0;
  std::vector<double> values_at_vertices;
  double affinity_defect = 0.0;
  Eigen::VectorXd worst_point;  ///< sample where the affinity defect is largest
  double max_off_value = 0.0;
  bool passes = false;
};

/// Tests, for every extreme point, that e_w is affine (on all vertex
/// midpoints plus `midpoint_samples` random convex combinations) and stays
/// below 1 at the other vertices.
inline std::vector<EOmegaReport> check_star_star(const PolytopeStateSpace& poly, const Tolerance& tol = {},
                                                 int midpoint_samples = 64, std::uint64_t seed = 0) {
  const std::size_t vcount = poly.size();
  // Sample set shared across extreme points: (weights, point).
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> samples;
  for (std::size_t i = 0; i < vcount; ++i) {
    for (std::size_t j = i + 1; j < vcount; ++j) {
      Eigen::VectorXd lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vcount));
      lam[static_cast<Eigen::Index>(i)] = 0.5;
      lam[static_cast<Eigen::Index>(j)] = 0.5;
      samples.emplace_back(lam, 0.5 * (poly.vertex(i) + poly.vertex(j)));
    }
  }
  for (int s = 0; s < midpoint_samples; ++s) {
    Rng rng = trial_rng(seed, stream_id("star_star.samples"), static_cast<std::uint64_t>(s));
    const Eigen::VectorXd lam = dirichlet_weights(rng, static_cast<Eigen::Index>(vcount));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(poly.dim());
    for (std::size_t k = 0; k < vcount; ++k) z += lam[static_cast<Eigen::Index>(k)] * poly.vertex(k);
    samples.emplace_back(lam, z);
  }

  std::vector<EOmegaReport> reports;
  for (std::size_t w = 0; w < vcount; ++w) {
    EOmegaReport rep;
    rep.omega_index = w;
    for (std::size_t k = 0; k < vcount; ++k) rep.values_at_vertices.push_back(e_omega_value(poly, w, poly.vertex(k), tol));
    for (std::size_t k = 0; k < vcount; ++k) {
      if (k != w) rep.max_off_value = std::max(rep.max_off_value, rep.values_at_vertices[k]);
    }
    const Eigen::Map<const Eigen::VectorXd> at_vertices(rep.values_at_vertices.data(), static_cast<Eigen::Index>(vcount));
    rep.worst_point = poly.vertex(w);
    for (const auto& [lam, z] : samples) {
      const double defect = std::abs(e_omega_value(poly, w, z, tol) - lam.dot(at_vertices));
      if (defect > rep.affinity_defect) {
        rep.affinity_defect = defect;
        rep.worst_point = z;
      }
    }
    rep.passes = rep.affinity_defect <= tol.check_tol && rep.max_off_value <= 1.0 - 1e-6;
    reports.push_back(std::move(rep));
  }
  return reports;
}

inline bool has_star_star(const PolytopeStateSpace& poly, const Tolerance& tol = {}, int midpoint_samples = 64) {
  const auto reports = check_star_star(poly, tol, midpoint_samples);
  return std::all_of(reports.begin(), reports.end(), [](const EOmegaReport& r) { return r.passes; });
}

// ---------------------------------------------------------------------------
// Smooth balls
// ---------------------------------------------------------------------------

/// e_w(z) = (1 + f_w . z) / 2 on the unit l^p ball: 1 at w, 0 at -w.
inline double smooth_ball_e_omega(const LpQubit& model, const Eigen::VectorXd& omega, const Eigen::VectorXd& zeta,
                                  const Tolerance& tol = {}) {
  if (omega.size() != model.n() || zeta.size() != model.n()) {
    throw DimensionMismatch(static_cast<std::size_t>(model.n()), static_cast<std::size_t>(omega.size()));
  }
  if (std::abs(LpQubit::lp_norm(omega, model.p()) - 1.0) > tol.check_tol) {
    throw InvalidArgument("omega is not on the boundary of the unit ball");
  }
  if (LpQubit::lp_norm(zeta, model.p()) > 1.0 + tol.check_tol) throw InvalidArgument("zeta is outside the unit ball");
  // f_w . w is 1 up to rounding; dividing by it makes the values at w and -w exact.
  const Eigen::VectorXd f = model.duality_map(omega);
  return 0.5 * (1.0 + f.dot(zeta) / f.dot(omega));
}

}  // namespace jordantp
