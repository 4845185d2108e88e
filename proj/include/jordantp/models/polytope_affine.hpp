#pragma once

#include "jordantp/convexgeom.hpp"
#include "jordantp/core.hpp"

#include <numeric>

namespace jordantp {

/**
 * Affine functions z -> c + f.z on a polytope whose e_w all pass the (∗∗)
 * test, stored as (c, f). Only simplices qualify among polytopes; the atoms
 * are the functions e_w themselves, fitted from their linear-program values
 * at the vertices, and the state of e_w is the point evaluation at w.
 */
class PolytopeAffine {
 public:
  explicit PolytopeAffine(PolytopeStateSpace poly, const Tolerance& tol = {}) : poly_(std::move(poly)) {
    const Eigen::Index d = poly_.dim();
    const auto vcount = static_cast<Eigen::Index>(poly_.size());
    if (vcount != d + 1) throw InvalidArgument("polytope model needs a simplex (d+1 affinely independent vertices)");
    const Eigen::MatrixXd aug = poly_.augmented();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(aug);
    if (lu.rank() != vcount) throw InvalidArgument("polytope vertices are affinely dependent");

    for (const auto& rep : check_star_star(poly_, tol, 16)) {
      if (!rep.passes) throw InvalidArgument("polytope fails the (∗∗) test; its e_w are not affine");
    }
    // Row k of aug * X = values of atom k at the vertices.
    Eigen::MatrixXd values(vcount, vcount);
    for (Eigen::Index k = 0; k < vcount; ++k) {
      for (Eigen::Index j = 0; j < vcount; ++j) {
        values(j, k) = e_omega_value(poly_, static_cast<std::size_t>(k), poly_.vertex(static_cast<std::size_t>(j)), tol);
      }
    }
    const Eigen::MatrixXd coeffs = lu.solve(values);
    for (Eigen::Index k = 0; k < vcount; ++k) atoms_.emplace_back(Eigen::VectorXd(coeffs.col(k)));

    desc_.kind = BackendKind::polytope_affine;
    desc_.n = static_cast<int>(d);
    desc_.ambient_dim = static_cast<std::size_t>(d + 1);
    desc_.info_capacity = static_cast<std::size_t>(vcount);
    desc_.symmetric_tp = true;
    desc_.has_inner_product = true;
    desc_.validate();
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  const PolytopeStateSpace& polytope() const { return poly_; }
  const std::vector<Element>& atoms() const { return atoms_; }

  /// Value of the affine function a at z.
  double evaluate(const Element& a, const Eigen::VectorXd& z) const { return a.coords[0] + a.coords.tail(z.size()).dot(z); }

  Element order_unit() const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(desc_.ambient_dim));
    u[0] = 1.0;
    return Element(std::move(u));
  }

  /// a = sum_k a(w_k) e_{w_k}.
  SpectralForm spectral(const Element& a, const Tolerance&) const {
    std::vector<SpectralPair> pairs;
    for (std::size_t k = 0; k < atoms_.size(); ++k) pairs.push_back({evaluate(a, poly_.vertex(k)), atoms_[k]});
    return detail::sorted_form(std::move(pairs));
  }

  double state_value(const Element& e, const Element& b) const { return evaluate(b, poly_.vertex(atom_index(e))); }

  /// sum_k a(w_k) b(w_k): the pairing the spectral form and the transition
  /// probability produce on a simplex.
  double native_inner(const Element& a, const Element& b) const {
    double s = 0.0;
    for (const auto& v : poly_.vertices()) s += evaluate(a, v) * evaluate(b, v);
    return s;
  }

  /// One-hot selector over the vertices.
  Element atom_from_param(const AtomParam& param, const Tolerance& tol) const {
    const auto vcount = static_cast<Eigen::Index>(atoms_.size());
    const Eigen::VectorXd v = param.real_part();
    if (v.size() != vcount || !param.is_real(tol.check_tol)) throw InvalidArgument("polytope atom needs a one-hot vertex selector");
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if ((v - Eigen::VectorXd::Unit(vcount, k)).cwiseAbs().maxCoeff() > tol.check_tol) {
      throw InvalidArgument("polytope atom parameter is not a vertex selector");
    }
    return atoms_[static_cast<std::size_t>(k)];
  }

  std::vector<Element> random_frame(Rng& rng) const {
    std::vector<std::size_t> order(atoms_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Element> frame;
    for (auto k : order) frame.push_back(atoms_[k]);
    return frame;
  }

  Element random_coords(Rng& rng) const { return Element(gaussian_vector(rng, static_cast<Eigen::Index>(desc_.ambient_dim))); }

  std::optional<Eigen::VectorXd> evaluation_point(const Element& e) const { return poly_.vertex(atom_index(e)); }

 private:
  std::size_t atom_index(const Element& e) const {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if ((atoms_[k].coords - e.coords).cwiseAbs().maxCoeff() <= 1e-9) return k;
    }
    throw NotAnAtom("element is not one of the simplex atoms");
  }

  PolytopeStateSpace poly_;
  std::vector<Element> atoms_;
  ModelDescriptor desc_;
};

}  // namespace jordantp
