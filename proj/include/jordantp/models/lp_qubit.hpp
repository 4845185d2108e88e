#pragma once

#include "jordantp/core.hpp"

namespace jordantp {

/**
 * Generalized qubit on the unit ball B of l^p(R^n), 1 < p < inf.
 *
 * An element is the affine function zeta -> c + f.zeta on B, stored as
 * (c, f). Its minimum and maximum over B are c -+ |f|_q with q the dual
 * exponent, so the spectrum is {c + |f|_q, c - |f|_q}. The atom at a boundary
 * point w is e_w = (1/2, f_w/2), where f_w is the unique norm-one supporting
 * functional at w; e_w takes the value 1 at w and 0 at -w. The state of e_w
 * is the point evaluation at w, and P_{e1}(e2) = e2(w1) is in general not
 * symmetric unless p = 2.
 */
class LpQubit {
 public:
  LpQubit(int n, double p) : p_(p) {
    if (n < 1) throw InvalidArgument("l^p qubit needs n >= 1");
    if (!std::isfinite(p) || !(p > 1.0)) {
      throw InvalidArgument("l^p qubit needs 1 < p < inf (the ball must be smooth and strictly convex)");
    }
    q_ = p / (p - 1.0);
    desc_.kind = BackendKind::lp_qubit;
    desc_.n = n;
    desc_.p = p;
    desc_.ambient_dim = static_cast<std::size_t>(n) + 1;
    desc_.info_capacity = 2;
    desc_.symmetric_tp = (p == 2.0);
    desc_.has_inner_product = (p == 2.0);
    desc_.validate();
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  Eigen::Index n() const { return desc_.n; }
  double p() const { return p_; }
  double q() const { return q_; }

  static double lp_norm(const Eigen::VectorXd& v, double r) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / scale, r);
    return scale * std::pow(s, 1.0 / r);
  }

  /// Supporting functional at w: sign(w_i)|w_i|^(p-1) / |w|_p^(p-1).
  Eigen::VectorXd duality_map(const Eigen::VectorXd& w) const { return power_map(w, p_); }

  /// Boundary point whose supporting functional is g (inverse duality map).
  Eigen::VectorXd inverse_duality_map(const Eigen::VectorXd& g) const { return power_map(g, q_); }

  Element order_unit() const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n() + 1);
    u[0] = 1.0;
    return Element(std::move(u));
  }

  /// e_w for w on the unit sphere.
  Element atom_at(const Eigen::VectorXd& w) const {
    Eigen::VectorXd e(n() + 1);
    e[0] = 0.5;
    e.tail(n()) = 0.5 * duality_map(w);
    return Element(std::move(e));
  }

  /// Boundary point w with e = e_w.
  Eigen::VectorXd omega_of_atom(const Element& e) const {
    const Eigen::VectorXd f = 2.0 * e.coords.tail(n());
    if (f.cwiseAbs().maxCoeff() == 0.0) throw NotAnAtom("l^p qubit atom has zero linear part");
    return inverse_duality_map(f);
  }

  SpectralForm spectral(const Element& a, const Tolerance&) const {
    const double c = a.coords[0];
    const Eigen::VectorXd f = a.coords.tail(n());
    const double r = lp_norm(f, q_);
    const Eigen::VectorXd w = r > 0.0 ? inverse_duality_map(f) : Eigen::VectorXd(Eigen::VectorXd::Unit(n(), 0));
    return SpectralForm{{{c + r, atom_at(w)}, {c - r, atom_at(-w)}}, true};
  }

  /// Point evaluation at the atom's boundary point.
  double state_value(const Element& e, const Element& b) const {
    const Eigen::VectorXd w = omega_of_atom(e);
    return b.coords[0] + b.coords.tail(n()).dot(w);
  }

  double native_inner(const Element& a, const Element& b) const {
    if (!desc_.has_inner_product) {
      throw Unsupported("l^p qubit with p != 2 has a non-symmetric transition probability and no self-dualizing inner product");
    }
    return 2.0 * (a.coords[0] * b.coords[0] + a.coords.tail(n()).dot(b.coords.tail(n())));
  }

  Element atom_from_param(const AtomParam& param, const Tolerance& tol) const {
    if (param.direction.size() != n() || !param.is_real(tol.check_tol)) {
      throw InvalidArgument("l^p atom needs a real boundary point in R^n");
    }
    const Eigen::VectorXd w = param.real_part();
    if (std::abs(lp_norm(w, p_) - 1.0) > tol.check_tol) throw InvalidArgument("point is not on the unit l^p sphere");
    return atom_at(w);
  }

  Eigen::VectorXd random_boundary_point(Rng& rng) const {
    Eigen::VectorXd w = gaussian_vector(rng, n());
    while (w.cwiseAbs().maxCoeff() < 1e-12) w = gaussian_vector(rng, n());
    return w / lp_norm(w, p_);
  }

  std::vector<Element> random_frame(Rng& rng) const {
    const Eigen::VectorXd w = random_boundary_point(rng);
    return {atom_at(w), atom_at(-w)};
  }

  Element random_coords(Rng& rng) const { return Element(gaussian_vector(rng, n() + 1)); }

  std::optional<Eigen::VectorXd> evaluation_point(const Element& e) const { return omega_of_atom(e); }

 private:
  /// sign(v_i)|v_i|^(r-1) / |v|_r^(r-1); unit r-norm input maps to unit
  /// dual-norm output.
  Eigen::VectorXd power_map(const Eigen::VectorXd& v, double r) const {
    const double nrm = lp_norm(v, r);
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double x = v[i] / nrm;
      out[i] = (x < 0 ? -1.0 : 1.0) * std::pow(std::abs(x), r - 1.0);
    }
    return out;
  }

  double p_;
  double q_;
  ModelDescriptor desc_;
};

}  // namespace jordantp
