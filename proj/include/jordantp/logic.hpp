#pragma once

/**
 * @file logic.hpp
 * @brief The extreme points of [0, I] as an orthomodular lattice.
 *
 * The meet is read off the spectrum of q1 + q2: its eigenvalue-2 part is
 * q1 ^ q2, because e <= q1 and e <= q2 for an atom e exactly when
 * P_e(q1 + q2) = 2. The join follows by De Morgan.
 */

#include "jordantp/model.hpp"

namespace jordantp {

/// The eigenvalue-2 cluster of q1 + q2 cannot be separated cleanly.
class AmbiguousSpectrum : public Error {
 public:
  AmbiguousSpectrum(const std::string& what, double eigenvalue) : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

struct LogicElement {
  Element value;
  bool validated = false;
};

/// Every eigenvalue within eig_cluster of 0 or 1.
template <Backend M>
bool is_logic_element(const M& model, const Element& a, const Tolerance& tol = {}) {
  const auto sf = spectral_decompose(model, a, tol);
  return std::all_of(sf.pairs.begin(), sf.pairs.end(), [&](const SpectralPair& pr) {
    return std::abs(pr.eigenvalue) <= tol.eig_cluster || std::abs(pr.eigenvalue - 1.0) <= tol.eig_cluster;
  });
}

template <Backend M>
LogicElement make_logic(const M& model, Element a, const Tolerance& tol = {}) {
  if (!is_logic_element(model, a, tol)) throw InvalidArgument("element is not an extreme point of the unit interval");
  return LogicElement{std::move(a), true};
}

namespace detail {

template <Backend M>
const Element& checked(const M& model, const LogicElement& p, const Tolerance& tol) {
  if (!p.validated && !is_logic_element(model, p.value, tol)) {
    throw InvalidArgument("element is not an extreme point of the unit interval");
  }
  return p.value;
}

}  // namespace detail

/// p' = I - p.
template <Backend M>
LogicElement orthocomplement(const M& model, const LogicElement& p, const Tolerance& tol = {}) {
  return LogicElement{model.order_unit() - detail::checked(model, p, tol), true};
}

/// sum p_k <= I.
template <Backend M>
bool is_orthogonal_family(const M& model, const std::vector<LogicElement>& ps, const Tolerance& tol = {}) {
  Element sum = Element::zero(model.descriptor().ambient_dim);
  for (const auto& p : ps) sum += detail::checked(model, p, tol);
  return order_leq(model, sum, model.order_unit(), tol);
}

template <Backend M>
bool is_orthogonal_family(const M& model, const std::vector<Element>& ps, const Tolerance& tol = {}) {
  std::vector<LogicElement> wrapped;
  for (const auto& p : ps) wrapped.push_back(LogicElement{p, false});
  return is_orthogonal_family(model, wrapped, tol);
}

/// Sum of the atoms of q1 + q2 with eigenvalue >= 2 - 10 eig_cluster.
/// Throws AmbiguousSpectrum when an eigenvalue cluster (relative gap
/// eig_cluster against the spectral diameter) has members on both sides of
/// that threshold.
template <Backend M>
LogicElement meet(const M& model, const LogicElement& q1, const LogicElement& q2, const Tolerance& tol = {}) {
  const Element sum = detail::checked(model, q1, tol) + detail::checked(model, q2, tol);
  const auto sf = spectral_decompose(model, sum, tol);
  const double threshold = 2.0 - 10.0 * tol.eig_cluster;
  const double diameter = sf.max_eigenvalue() - sf.min_eigenvalue();

  // Pairs are sorted descending; walk clusters from the top.
  Element out = Element::zero(model.descriptor().ambient_dim);
  std::size_t i = 0;
  while (i < sf.size()) {
    std::size_t j = i + 1;
    while (j < sf.size() && sf.pairs[j - 1].eigenvalue - sf.pairs[j].eigenvalue <= tol.eig_cluster * diameter) ++j;
    const bool top_in = sf.pairs[i].eigenvalue >= threshold;
    const bool bottom_in = sf.pairs[j - 1].eigenvalue >= threshold;
    if (top_in != bottom_in) {
      throw AmbiguousSpectrum("meet: eigenvalue cluster of q1 + q2 straddles the threshold " + std::to_string(threshold),
                              sf.pairs[j - 1].eigenvalue);
    }
    if (!top_in) break;
    for (std::size_t k = i; k < j; ++k) out += sf.pairs[k].atom;
    i = j;
  }
  return LogicElement{std::move(out), true};
}

/// (q1' ^ q2')'.
template <Backend M>
LogicElement join(const M& model, const LogicElement& q1, const LogicElement& q2, const Tolerance& tol = {}) {
  return orthocomplement(model, meet(model, orthocomplement(model, q1, tol), orthocomplement(model, q2, tol), tol), tol);
}

/// Pairwise orthogonal atoms summing to p; empty for p = 0.
template <Backend M>
std::vector<Element> atomic_decomposition(const M& model, const LogicElement& p, const Tolerance& tol = {}) {
  const auto sf = spectral_decompose(model, detail::checked(model, p, tol), tol);
  std::vector<Element> atoms;
  for (const auto& [s, e] : sf.pairs) {
    if (s > 0.5) atoms.push_back(e);
  }
  return atoms;
}

/**
 * Largest orthogonal atom family reached by greedy extension. Each trial
 * starts from a random atom; candidates are the atoms of the complement
 * I - sum(family) together with a few freshly drawn random atoms, and a
 * candidate is kept only if the family stays orthogonal.
 */
template <Backend M>
std::size_t information_capacity_empirical(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const std::size_t dim = model.descriptor().ambient_dim;
  std::size_t best = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, stream_id("information_capacity"), static_cast<std::uint64_t>(t));
    std::vector<Element> family{random_atom(model, rng)};
    Element total = family.front();
    while (family.size() < dim) {
      const Element rest = model.order_unit() - total;
      if (order_norm(model, rest, tol) <= tol.check_tol) break;
      std::vector<Element> candidates;
      for (int r = 0; r < 3; ++r) candidates.push_back(random_atom(model, rng));
      for (auto& e : atomic_decomposition(model, LogicElement{rest, false}, tol)) candidates.push_back(std::move(e));
      bool extended = false;
      for (const auto& cand : candidates) {
        if (order_leq(model, total + cand, model.order_unit(), tol)) {
          family.push_back(cand);
          total += cand;
          extended = true;
          break;
        }
      }
      if (!extended) break;
    }
    best = std::max(best, family.size());
  }
  return best;
}

}  // namespace jordantp
