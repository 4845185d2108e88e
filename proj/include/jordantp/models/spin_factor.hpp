#pragma once

#include "jordantp/core.hpp"

namespace jordantp {

/// Spin factor R (+) R^n, element (t, x). Spectrum t +- |x| with atoms
/// (1/2)(1, +-x/|x|); the state space is the Euclidean unit ball.
class SpinFactor {
 public:
  explicit SpinFactor(int n) {
    if (n < 1) throw InvalidArgument("spin factor needs n >= 1");
    desc_.kind = BackendKind::spin_factor;
    desc_.n = n;
    desc_.ambient_dim = static_cast<std::size_t>(n) + 1;
    desc_.info_capacity = 2;
    desc_.symmetric_tp = true;
    desc_.has_inner_product = true;
    desc_.validate();
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  Eigen::Index n() const { return desc_.n; }

  Element order_unit() const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n() + 1);
    u[0] = 1.0;
    return Element(std::move(u));
  }

  /// (1/2)(1, u) for a unit vector u.
  Element atom(const Eigen::VectorXd& u) const {
    Eigen::VectorXd e(n() + 1);
    e[0] = 0.5;
    e.tail(n()) = 0.5 * u;
    return Element(std::move(e));
  }

  SpectralForm spectral(const Element& a, const Tolerance&) const {
    const double t = a.coords[0];
    const Eigen::VectorXd x = a.coords.tail(n());
    const double r = x.norm();
    // x == 0: the whole space is one eigenspace; resolve along the first axis.
    const Eigen::VectorXd u = r > 0.0 ? Eigen::VectorXd(x / r) : Eigen::VectorXd(Eigen::VectorXd::Unit(n(), 0));
    return SpectralForm{{{t + r, atom(u)}, {t - r, atom(-u)}}, true};
  }

  /// State of the atom (1/2)(1,u): (t, x) -> t + u.x.
  double state_value(const Element& e, const Element& b) const {
    const Eigen::VectorXd u = 2.0 * e.coords.tail(n());
    return b.coords[0] + u.dot(b.coords.tail(n()));
  }

  /// <a|b> = 2 (t t' + x.x'): the pairing built from the spectral form and
  /// the transition probability, written out for the spin factor.
  double native_inner(const Element& a, const Element& b) const {
    return 2.0 * (a.coords[0] * b.coords[0] + a.coords.tail(n()).dot(b.coords.tail(n())));
  }

  Element atom_from_param(const AtomParam& param, const Tolerance& tol) const {
    if (param.direction.size() != n() || !param.is_real(tol.check_tol)) {
      throw InvalidArgument("spin atom needs a real direction in R^n");
    }
    const Eigen::VectorXd u = param.real_part();
    if (std::abs(u.norm() - 1.0) > tol.check_tol) throw InvalidArgument("spin atom direction is not a unit vector");
    return atom(u);
  }

  std::vector<Element> random_frame(Rng& rng) const {
    Eigen::VectorXd u = gaussian_vector(rng, n());
    while (u.norm() < 1e-12) u = gaussian_vector(rng, n());
    u.normalize();
    return {atom(u), atom(-u)};
  }

  Element random_coords(Rng& rng) const { return Element(gaussian_vector(rng, n() + 1)); }

  std::optional<Eigen::VectorXd> evaluation_point(const Element&) const { return std::nullopt; }

 private:
  ModelDescriptor desc_;
};

}  // namespace jordantp
