#pragma once

#include "jordantp/core.hpp"

#include <numeric>

namespace jordantp {

/// R^n with the componentwise order and unit (1,...,1); atoms are the
/// standard basis vectors.
class Classical {
 public:
  explicit Classical(int n) {
    if (n < 1) throw InvalidArgument("classical model needs n >= 1");
    desc_.kind = BackendKind::classical;
    desc_.n = n;
    desc_.ambient_dim = static_cast<std::size_t>(n);
    desc_.info_capacity = static_cast<std::size_t>(n);
    desc_.symmetric_tp = true;
    desc_.has_inner_product = true;
    desc_.validate();
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  Eigen::Index dim() const { return desc_.n; }

  Element order_unit() const { return Element(Eigen::VectorXd::Ones(dim())); }

  Element basis_atom(Eigen::Index k) const { return Element(Eigen::VectorXd::Unit(dim(), k)); }

  SpectralForm spectral(const Element& a, const Tolerance&) const {
    std::vector<SpectralPair> pairs;
    pairs.reserve(static_cast<std::size_t>(dim()));
    for (Eigen::Index k = 0; k < dim(); ++k) pairs.push_back({a.coords[k], basis_atom(k)});
    return detail::sorted_form(std::move(pairs));
  }

  double state_value(const Element& atom, const Element& b) const { return atom.coords.dot(b.coords); }

  double native_inner(const Element& a, const Element& b) const { return a.coords.dot(b.coords); }

  Element atom_from_param(const AtomParam& param, const Tolerance& tol) const {
    const Eigen::VectorXd v = param.real_part();
    if (v.size() != dim() || !param.is_real(tol.check_tol)) throw InvalidArgument("classical atom needs a real one-hot vector");
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if ((v - Eigen::VectorXd::Unit(dim(), k)).cwiseAbs().maxCoeff() > tol.check_tol) {
      throw InvalidArgument("classical atom parameter is not a standard basis vector");
    }
    return basis_atom(k);
  }

  /// The only maximal frame is the standard basis; it is returned shuffled.
  std::vector<Element> random_frame(Rng& rng) const {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Element> frame;
    for (auto k : order) frame.push_back(basis_atom(k));
    return frame;
  }

  Element random_coords(Rng& rng) const { return Element(gaussian_vector(rng, dim())); }

  std::optional<Eigen::VectorXd> evaluation_point(const Element&) const { return std::nullopt; }

 private:
  ModelDescriptor desc_;
};

}  // namespace jordantp
