#pragma once

/**
 * @file core.hpp
 * @brief Model-independent element arithmetic, order and norm queries.
 *
 * Every concrete model (classical, spin factor, matrix algebras, l^p qubit,
 * polytope affine functions) exposes the same backend interface, captured by
 * the `Backend` concept below. The order, the order norm and the unit
 * interval are all read off the spectrum the backend computes.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jordantp {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              " coordinates, got " + std::to_string(got)) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation needs an atom and receives something else.
class NotAnAtom : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation's hypotheses do not hold for the model,
/// e.g. the symmetric inner product on a model without symmetric transition
/// probability.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

struct Tolerance {
  double eig_cluster = 1e-8;  ///< relative gap below which eigenvalues are merged
  double cone_slack = 1e-9;   ///< slack allowed in cone membership
  double check_tol = 1e-9;    ///< default pass threshold of verifiers

  void validate() const {
    for (double v : {eig_cluster, cone_slack, check_tol}) {
      if (!(v > 0.0) || !(v < 1e-3)) {
        throw InvalidArgument("tolerances must lie in (0, 1e-3)");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Model descriptor
// ---------------------------------------------------------------------------

enum class BackendKind { classical, spin_factor, sym_matrices, herm_matrices, lp_qubit, polytope_affine };

inline const char* kind_name(BackendKind k) {
  switch (k) {
    case BackendKind::classical: return "classical";
    case BackendKind::spin_factor: return "spin";
    case BackendKind::sym_matrices: return "sym";
    case BackendKind::herm_matrices: return "herm";
    case BackendKind::lp_qubit: return "lpq";
    case BackendKind::polytope_affine: return "polytope";
  }
  return "?";
}

struct ModelDescriptor {
  BackendKind kind = BackendKind::classical;
  int n = 1;
  double p = 0.0;  // only meaningful for lp_qubit
  std::size_t ambient_dim = 1;
  std::size_t info_capacity = 1;
  bool symmetric_tp = true;
  bool has_inner_product = true;

  void validate() const {
    if (ambient_dim == 0 || info_capacity == 0) {
      throw InvalidArgument("model dimensions must be positive");
    }
    if (info_capacity > ambient_dim) {
      throw InvalidArgument("information capacity exceeds ambient dimension");
    }
    if (symmetric_tp && !has_inner_product) {
      throw InvalidArgument("symmetric transition probability requires an inner product");
    }
  }

  /// "kind:n" or "kind:n:p".
  std::string spec_string() const {
    std::string s = std::string(kind_name(kind)) + ":" + std::to_string(n);
    if (kind == BackendKind::lp_qubit) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", p);
      s += ":";
      s += buf;
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Coordinate vector in a model's ambient real space. Its meaning is fixed by
/// the backend that produced it; the backend checks the length on entry.
struct Element {
  Eigen::VectorXd coords;

  Element() = default;
  explicit Element(Eigen::VectorXd c) : coords(std::move(c)) {}
  Element(std::initializer_list<double> values) : coords(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) coords[i++] = v;
  }

  static Element zero(std::size_t dim) { return Element(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))); }

  std::size_t size() const { return static_cast<std::size_t>(coords.size()); }
  double operator[](std::size_t i) const { return coords[static_cast<Eigen::Index>(i)]; }
  bool all_finite() const { return coords.allFinite(); }

  Element& operator+=(const Element& o) { coords += o.coords; return *this; }
  Element& operator-=(const Element& o) { coords -= o.coords; return *this; }
  Element& operator*=(double s) { coords *= s; return *this; }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { a.coords = -a.coords; return a; }
  friend Element operator*(double s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= s; }
};

/// Direction that names an atom: a unit vector spanning a rank-one range for
/// the matrix backends, a unit direction for the spin factor, a boundary point
/// of the unit l^p sphere for the l^p qubit, and a one-hot selector for the
/// classical and polytope backends.
struct AtomParam {
  Eigen::VectorXcd direction;

  static AtomParam real(const Eigen::VectorXd& v) { return AtomParam{v.cast<std::complex<double>>()}; }
  static AtomParam complex(Eigen::VectorXcd v) { return AtomParam{std::move(v)}; }

  bool is_real(double tol = 0.0) const { return direction.imag().cwiseAbs().maxCoeff() <= tol; }
  Eigen::VectorXd real_part() const { return direction.real(); }
};

// ---------------------------------------------------------------------------
// Spectral forms
// ---------------------------------------------------------------------------

struct SpectralPair {
  double eigenvalue = 0.0;
  Element atom;
};

/// a = sum_k s_k e_k over a complete frame of pairwise orthogonal atoms.
struct SpectralForm {
  std::vector<SpectralPair> pairs;
  bool complete = true;

  std::size_t size() const { return pairs.size(); }

  Element reconstruct(std::size_t dim) const {
    Element out = Element::zero(dim);
    for (const auto& [s, e] : pairs) out.coords += s * e.coords;
    return out;
  }
  Element frame_sum(std::size_t dim) const {
    Element out = Element::zero(dim);
    for (const auto& pr : pairs) out += pr.atom;
    return out;
  }
  double max_eigenvalue() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& pr : pairs) v = std::max(v, pr.eigenvalue);
    return v;
  }
  double min_eigenvalue() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& pr : pairs) v = std::min(v, pr.eigenvalue);
    return v;
  }
  double max_abs_eigenvalue() const {
    double v = 0.0;
    for (const auto& pr : pairs) v = std::max(v, std::abs(pr.eigenvalue));
    return v;
  }
};

namespace detail {

/// Stable descending sort of (eigenvalue, atom) pairs; ties keep frame order.
inline SpectralForm sorted_form(std::vector<SpectralPair> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const SpectralPair& a, const SpectralPair& b) { return a.eigenvalue > b.eigenvalue; });
  return SpectralForm{std::move(pairs), true};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Backend concept
// ---------------------------------------------------------------------------

/**
 * What a model has to provide. `state_value(e, b)` is the value of the unique
 * state attaining 1 at the atom `e`, evaluated at `b`, computed in the
 * backend's native form (trace pairing, spin pairing, point evaluation).
 * `native_inner` throws `Unsupported` on models without an inner product.
 * `evaluation_point(e)` is the point w with P_e = delta_w on models whose
 * elements are affine functions, nullopt elsewhere.
 */
template <class B>
concept Backend = requires(const B& b, const Element& a, const Tolerance& tol, const AtomParam& prm, Rng& rng) {
  { b.descriptor() } -> std::convertible_to<const ModelDescriptor&>;
  { b.order_unit() } -> std::same_as<Element>;
  { b.spectral(a, tol) } -> std::same_as<SpectralForm>;
  { b.state_value(a, a) } -> std::same_as<double>;
  { b.atom_from_param(prm, tol) } -> std::same_as<Element>;
  { b.random_frame(rng) } -> std::same_as<std::vector<Element>>;
  { b.random_coords(rng) } -> std::same_as<Element>;
  { b.native_inner(a, a) } -> std::same_as<double>;
  { b.evaluation_point(a) } -> std::same_as<std::optional<Eigen::VectorXd>>;
};

template <Backend M>
void check_element(const M& model, const Element& a) {
  const std::size_t dim = model.descriptor().ambient_dim;
  if (a.size() != dim) throw DimensionMismatch(dim, a.size());
  if (!a.all_finite()) throw InvalidArgument("element has non-finite coordinates");
}

// ---------------------------------------------------------------------------
// Order and norm, all read off the spectrum
// ---------------------------------------------------------------------------

template <Backend M>
Element order_unit(const M& model) {
  return model.order_unit();
}

template <Backend M>
SpectralForm spectral_decompose(const M& model, const Element& a, const Tolerance& tol = {}) {
  check_element(model, a);
  return model.spectral(a, tol);
}

/// Max |s_k|; coincides with inf{s > 0 : -s I <= a <= s I}.
template <Backend M>
double order_norm(const M& model, const Element& a, const Tolerance& tol = {}) {
  return spectral_decompose(model, a, tol).max_abs_eigenvalue();
}

/// 0 <= a iff every eigenvalue is >= -cone_slack.
template <Backend M>
bool cone_contains(const M& model, const Element& a, const Tolerance& tol = {}) {
  return spectral_decompose(model, a, tol).min_eigenvalue() >= -tol.cone_slack;
}

/// a <= b in the model's order.
template <Backend M>
bool order_leq(const M& model, const Element& a, const Element& b, const Tolerance& tol = {}) {
  return cone_contains(model, b - a, tol);
}

template <Backend M>
bool in_unit_interval(const M& model, const Element& a, const Tolerance& tol = {}) {
  const auto sf = spectral_decompose(model, a, tol);
  return sf.min_eigenvalue() >= -tol.cone_slack && sf.max_eigenvalue() <= 1.0 + tol.cone_slack;
}

/// Coefficient vector w of the state attaining 1 at `atom`, so that
/// P_atom(b) = w . coords(b). States are linear, so probing the coordinate
/// basis recovers them exactly.
template <Backend M>
Eigen::VectorXd state_functional(const M& model, const Element& atom) {
  const auto dim = static_cast<Eigen::Index>(model.descriptor().ambient_dim);
  Eigen::VectorXd w(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    w[i] = model.state_value(atom, Element(Eigen::VectorXd::Unit(dim, i)));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Deterministic sampling helpers
// ---------------------------------------------------------------------------

/// Per-trial generator derived from (seed, stream, trial) so that sweeps give
/// the same samples regardless of evaluation order.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

/// FNV-1a; names sampling streams.
inline std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform sample of the probability simplex with k entries.
inline Eigen::VectorXd dirichlet_weights(Rng& rng, Eigen::Index k) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd w(k);
  for (Eigen::Index i = 0; i < k; ++i) w[i] = expo(rng);
  return w / w.sum();
}

}  // namespace jordantp
