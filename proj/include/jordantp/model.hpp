#pragma once

/**
 * @file model.hpp
 * @brief Runtime-selected model and the operations built on spectra alone:
 * random elements, functional calculus, the polarized Jordan product.
 */

#include "jordantp/core.hpp"
#include "jordantp/models/classical.hpp"
#include "jordantp/models/lp_qubit.hpp"
#include "jordantp/models/matrices.hpp"
#include "jordantp/models/polytope_affine.hpp"
#include "jordantp/models/spin_factor.hpp"

#include <charconv>
#include <functional>
#include <variant>

namespace jordantp {

/// Any of the concrete backends, chosen at run time.
class Model {
 public:
  using Variant = std::variant<Classical, SpinFactor, SymMatrices, HermMatrices, LpQubit, PolytopeAffine>;

  template <class B>
    requires std::constructible_from<Variant, B>
  Model(B backend) : v_(std::move(backend)) {}  // NOLINT: implicit by design

  /// "classical:n", "spin:n", "sym:n", "herm:n", "lpq:n:p", or
  /// "polytope:d" for the standard d-simplex.
  static Model parse(std::string_view spec) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = spec.find(':', start);
      parts.push_back(spec.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    auto bad = [&](const std::string& why) {
      return InvalidArgument("bad model spec '" + std::string(spec) + "': " + why);
    };
    auto parse_int = [&](std::string_view s) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) throw bad("dimension must be a positive integer");
      return v;
    };
    auto parse_real = [&](std::string_view s) {
      const std::string str(s);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(str, &used);
      } catch (const std::exception&) {
        throw bad("exponent is not a number");
      }
      if (used != str.size()) throw bad("exponent is not a number");
      return v;
    };

    const std::string_view kind = parts[0];
    if (kind == "lpq") {
      if (parts.size() != 3) throw bad("expected lpq:n:p");
      return Model(LpQubit(parse_int(parts[1]), parse_real(parts[2])));
    }
    if (parts.size() != 2) throw bad("expected kind:n");
    const int n = parse_int(parts[1]);
    if (kind == "classical") return Model(Classical(n));
    if (kind == "spin") return Model(SpinFactor(n));
    if (kind == "sym") return Model(SymMatrices(n));
    if (kind == "herm") return Model(HermMatrices(n));
    if (kind == "polytope") return Model(PolytopeAffine(shapes::standard_simplex(n)));
    throw bad("unknown kind (classical, spin, sym, herm, lpq, polytope)");
  }

  const Variant& variant() const { return v_; }
  template <class B>
  const B* as() const {
    return std::get_if<B>(&v_);
  }

  const ModelDescriptor& descriptor() const {
    return std::visit([](const auto& b) -> const ModelDescriptor& { return b.descriptor(); }, v_);
  }
  Element order_unit() const {
    return std::visit([](const auto& b) { return b.order_unit(); }, v_);
  }
  SpectralForm spectral(const Element& a, const Tolerance& tol) const {
    return std::visit([&](const auto& b) { return b.spectral(a, tol); }, v_);
  }
  double state_value(const Element& e, const Element& a) const {
    return std::visit([&](const auto& b) { return b.state_value(e, a); }, v_);
  }
  Element atom_from_param(const AtomParam& prm, const Tolerance& tol) const {
    return std::visit([&](const auto& b) { return b.atom_from_param(prm, tol); }, v_);
  }
  std::vector<Element> random_frame(Rng& rng) const {
    return std::visit([&](const auto& b) { return b.random_frame(rng); }, v_);
  }
  Element random_coords(Rng& rng) const {
    return std::visit([&](const auto& b) { return b.random_coords(rng); }, v_);
  }
  double native_inner(const Element& a, const Element& c) const {
    return std::visit([&](const auto& b) { return b.native_inner(a, c); }, v_);
  }
  std::optional<Eigen::VectorXd> evaluation_point(const Element& e) const {
    return std::visit([&](const auto& b) { return b.evaluation_point(e); }, v_);
  }

 private:
  Variant v_;
};

static_assert(Backend<Model>);
static_assert(Backend<Classical> && Backend<SpinFactor> && Backend<SymMatrices> && Backend<HermMatrices> &&
              Backend<LpQubit> && Backend<PolytopeAffine>);

// ---------------------------------------------------------------------------
// Random elements
// ---------------------------------------------------------------------------

enum class Shape { any, positive, unit_interval, logic };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::any: return "any";
    case Shape::positive: return "positive";
    case Shape::unit_interval: return "unit_interval";
    case Shape::logic: return "logic";
  }
  return "?";
}

/// any: Gaussian coordinates. The other shapes put eigenvalues drawn from
/// U[0,2], U[0,1] or {0,1} on a random frame.
template <Backend M>
Element random_element(const M& model, Rng& rng, Shape shape = Shape::any) {
  if (shape == Shape::any) return model.random_coords(rng);
  const auto frame = model.random_frame(rng);
  Element out = Element::zero(model.descriptor().ambient_dim);
  std::bernoulli_distribution coin(0.5);
  for (const auto& e : frame) {
    double s = 0.0;
    switch (shape) {
      case Shape::positive: s = uniform(rng, 0.0, 2.0); break;
      case Shape::unit_interval: s = uniform(rng); break;
      case Shape::logic: s = coin(rng) ? 1.0 : 0.0; break;
      case Shape::any: break;
    }
    out.coords += s * e.coords;
  }
  return out;
}

template <Backend M>
Element random_element(const M& model, std::uint64_t seed, Shape shape = Shape::any) {
  Rng rng = trial_rng(seed, stream_id(std::string("random_element.") + shape_name(shape)), 0);
  return random_element(model, rng, shape);
}

/// A random frame member: a uniformly chosen atom of a random frame.
template <Backend M>
Element random_atom(const M& model, Rng& rng) {
  const auto frame = model.random_frame(rng);
  std::uniform_int_distribution<std::size_t> pick(0, frame.size() - 1);
  return frame[pick(rng)];
}

// ---------------------------------------------------------------------------
// Functional calculus and the polarized product
// ---------------------------------------------------------------------------

/// sum_k f(s_k) e_k over the complete spectral frame of a.
template <Backend M>
Element func_calculus(const M& model, const Element& a, const std::function<double(double)>& f, const Tolerance& tol = {}) {
  const auto sf = spectral_decompose(model, a, tol);
  Element out = Element::zero(model.descriptor().ambient_dim);
  for (const auto& [s, e] : sf.pairs) {
    const double fs = f(s);
    if (!std::isfinite(fs)) throw InvalidArgument("function is not finite at eigenvalue " + std::to_string(s));
    out.coords += fs * e.coords;
  }
  return out;
}

template <Backend M>
Element square(const M& model, const Element& a, const Tolerance& tol = {}) {
  return func_calculus(model, a, [](double s) { return s * s; }, tol);
}

/// a o b := ((a+b)^2 - (a-b)^2) / 4. Bilinear exactly on Jordan algebras.
template <Backend M>
Element jordan_product_polarized(const M& model, const Element& a, const Element& b, const Tolerance& tol = {}) {
  return 0.25 * (square(model, a + b, tol) - square(model, a - b, tol));
}

/// max over sampled (a, b, c) of |a o (b + c) - a o b - a o c|.
template <Backend M>
double linearity_defect(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, stream_id("linearity_defect"), static_cast<std::uint64_t>(t));
    const Element a = model.random_coords(rng);
    const Element b = model.random_coords(rng);
    const Element c = model.random_coords(rng);
    const Element d = jordan_product_polarized(model, a, b + c, tol) - jordan_product_polarized(model, a, b, tol) -
                      jordan_product_polarized(model, a, c, tol);
    worst = std::max(worst, order_norm(model, d, tol));
  }
  return worst;
}

}  // namespace jordantp
