#pragma once

/**
 * @file transition.hpp
 * @brief Transition probabilities, the inner product they induce on models
 * with symmetric transition probability, and sampled verifiers for the
 * axioms and order properties.
 *
 * P_e(b) is evaluated natively by each backend. Verifiers return lists of
 * `Check`; each draws its samples from trial_rng(seed, stream(name), t), so
 * results do not depend on which other checks ran.
 */

#include "jordantp/logic.hpp"
#include "jordantp/model.hpp"
#include "jordantp/report.hpp"

#include <cstdio>

namespace jordantp {

// ---------------------------------------------------------------------------
// Atoms and states
// ---------------------------------------------------------------------------

/// A minimal extreme point of [0, I]: spectrum {1, 0, ..., 0}.
template <Backend M>
bool is_atom(const M& model, const Element& e, const Tolerance& tol = {}) {
  if (e.size() != model.descriptor().ambient_dim || !e.all_finite()) return false;
  const auto sf = model.spectral(e, tol);
  if (sf.pairs.empty() || std::abs(sf.pairs.front().eigenvalue - 1.0) > tol.check_tol) return false;
  for (std::size_t k = 1; k < sf.size(); ++k) {
    if (std::abs(sf.pairs[k].eigenvalue) > tol.check_tol) return false;
  }
  return true;
}

template <Backend M>
void require_atom(const M& model, const Element& e, const Tolerance& tol) {
  if (!is_atom(model, e, tol)) throw NotAnAtom("element is not an atom (spectrum is not {1, 0, ..., 0})");
}

struct State {
  enum class Kind { dual_vector, point_evaluation };
  Kind kind = Kind::dual_vector;
  Element payload;                     ///< the atom the state belongs to
  std::optional<Eigen::VectorXd> omega;  ///< evaluation point, for point evaluations
  Eigen::VectorXd functional;          ///< mu(b) = functional . coords(b)

  double operator()(const Element& b) const { return functional.dot(b.coords); }
};

/// The unique state P_e with P_e(e) = 1.
template <Backend M>
State state_of_atom(const M& model, const Element& e, const Tolerance& tol = {}) {
  require_atom(model, e, tol);
  State st;
  st.payload = e;
  st.omega = model.evaluation_point(e);
  st.kind = st.omega ? State::Kind::point_evaluation : State::Kind::dual_vector;
  st.functional = state_functional(model, e);
  return st;
}

/// P_{e1}(e2).
template <Backend M>
double transition_prob(const M& model, const Element& e1, const Element& e2, const Tolerance& tol = {}) {
  require_atom(model, e1, tol);
  require_atom(model, e2, tol);
  return model.state_value(e1, e2);
}

// ---------------------------------------------------------------------------
// Transition-probability matrices
// ---------------------------------------------------------------------------

struct TPMatrix {
  std::vector<std::string> labels;
  std::vector<Element> atoms;
  Eigen::MatrixXd entries;  ///< entries(i, j) = P_{e_i}(e_j)

  double symmetry_defect() const {
    return entries.size() == 0 ? 0.0 : (entries - entries.transpose()).cwiseAbs().maxCoeff();
  }

  std::string to_csv() const {
    std::string out;
    for (std::size_t j = 0; j < labels.size(); ++j) out += (j ? "," : "") + labels[j];
    out += "\n";
    char buf[40];
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
      for (Eigen::Index j = 0; j < entries.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", entries(i, j));
        out += (j ? "," : "") + std::string(buf);
      }
      out += "\n";
    }
    std::snprintf(buf, sizeof buf, "%.17g", symmetry_defect());
    out += "# symmetry_defect=" + std::string(buf) + "\n";
    return out;
  }
};

template <Backend M>
TPMatrix tp_matrix(const M& model, const std::vector<Element>& atoms, const Tolerance& tol = {}) {
  if (atoms.empty()) throw InvalidArgument("transition matrix needs at least one atom");
  TPMatrix t;
  t.atoms = atoms;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    require_atom(model, atoms[i], tol);
    t.labels.push_back("e" + std::to_string(i));
  }
  const auto k = static_cast<Eigen::Index>(atoms.size());
  t.entries.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      t.entries(i, j) = model.state_value(atoms[static_cast<std::size_t>(i)], atoms[static_cast<std::size_t>(j)]);
    }
  }
  return t;
}

/// Two atoms drawn from independent random frames.
template <Backend M>
std::pair<Element, Element> random_atom_pair(const M& model, Rng& rng) {
  Element a = random_atom(model, rng);
  Element b = random_atom(model, rng);
  return {std::move(a), std::move(b)};
}

/// max |P_{e1}(e2) - P_{e2}(e1)| over sampled atom pairs.
template <Backend M>
double symmetry_defect(const M& model, std::uint64_t seed, int trials, const Tolerance& = {}) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, stream_id("symmetry_defect"), static_cast<std::uint64_t>(t));
    const auto [e1, e2] = random_atom_pair(model, rng);
    worst = std::max(worst, std::abs(model.state_value(e1, e2) - model.state_value(e2, e1)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// The inner product sum_k s_k P_{e_k}(b)
// ---------------------------------------------------------------------------

template <Backend M>
double inner_product_t3(const M& model, const Element& a, const Element& b, const Tolerance& tol = {}) {
  if (!model.descriptor().symmetric_tp) {
    throw Unsupported("the spectral inner product needs a symmetric transition probability; model " +
                      model.descriptor().spec_string() + " does not have one");
  }
  check_element(model, b);
  double s = 0.0;
  for (const auto& [sk, ek] : spectral_decompose(model, a, tol).pairs) s += sk * model.state_value(ek, b);
  return s;
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

namespace detail {

inline Rng check_rng(std::uint64_t seed, std::string_view name, int trial) {
  return trial_rng(seed, stream_id(name), static_cast<std::uint64_t>(trial));
}

/// Random mixture of 2..4 pure states, as a coefficient vector.
template <Backend M>
Eigen::VectorXd random_mixed_state(const M& model, Rng& rng) {
  const int parts = std::uniform_int_distribution<int>(2, 4)(rng);
  const Eigen::VectorXd lam = dirichlet_weights(rng, parts);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.descriptor().ambient_dim));
  for (int i = 0; i < parts; ++i) w += lam[i] * state_functional(model, random_atom(model, rng));
  return w;
}

inline Check not_symmetric(const std::string& name, const ModelDescriptor& d) {
  return Check::skipped(name, "model " + d.spec_string() + " has no symmetric transition probability");
}

}  // namespace detail

/// Both directions of self-duality under the spectral inner product.
template <Backend M>
std::vector<Check> check_self_duality(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  const auto& d = model.descriptor();
  if (!d.symmetric_tp) {
    return {detail::not_symmetric("selfdual.dual_frame", d), detail::not_symmetric("selfdual.dual_membership", d),
            detail::not_symmetric("selfdual.primal", d)};
  }
  double primal = 0.0, frame = 0.0;
  int mismatches = 0;
  std::optional<Element> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "selfdual.primal", t);
    const Element a = random_element(model, rng, Shape::positive);
    const Element b = random_element(model, rng, Shape::positive);
    primal = std::max(primal, -inner_product_t3(model, a, b, tol));

    // <a|e_k> on a's own frame reproduces s_k, so nonnegativity there
    // forces a >= 0; the most negative frame atom is the witness otherwise.
    Rng rng2 = detail::check_rng(seed, "selfdual.dual", t);
    const Element c = random_element(model, rng2, Shape::any);
    const auto sf = spectral_decompose(model, c, tol);
    bool all_nonneg = true;
    for (const auto& [s, e] : sf.pairs) {
      const double v = inner_product_t3(model, c, e, tol);
      frame = std::max(frame, std::abs(v - s));
      all_nonneg = all_nonneg && v >= -tol.cone_slack;
    }
    if (all_nonneg != cone_contains(model, c, tol)) {
      ++mismatches;
      if (!witness) witness = c;
    }
  }
  return {Check::measure("selfdual.dual_frame", frame, tol.check_tol, "max |<a|e_k> - s_k| over a's own frame"),
          Check::measure("selfdual.dual_membership", mismatches, 0.0,
                         "count of a where frame nonnegativity and cone membership disagree", witness),
          Check::measure("selfdual.primal", std::max(primal, 0.0), tol.check_tol, "max -<a|b> over sampled a, b >= 0")};
}

/// |a| <= sqrt<a|a> <= sqrt(m) |a|, with the two tight cases a = I and a = atom.
template <Backend M>
std::vector<Check> check_norm_equivalence(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  const auto& d = model.descriptor();
  if (!d.symmetric_tp) {
    return {detail::not_symmetric("norm_equiv.lower", d), detail::not_symmetric("norm_equiv.tight_atom", d),
            detail::not_symmetric("norm_equiv.tight_unit", d), detail::not_symmetric("norm_equiv.upper", d)};
  }
  const double sqrt_m = std::sqrt(static_cast<double>(d.info_capacity));
  double lower = 0.0, upper = 0.0, tight_atom = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "norm_equiv", t);
    const Element a = random_element(model, rng, Shape::any);
    const double nrm = order_norm(model, a, tol);
    const double ip = std::sqrt(std::max(0.0, inner_product_t3(model, a, a, tol)));
    lower = std::max(lower, nrm - ip);
    upper = std::max(upper, ip - sqrt_m * nrm);
    const Element e = random_atom(model, rng);
    tight_atom = std::max(tight_atom, std::abs(std::sqrt(inner_product_t3(model, e, e, tol)) - 1.0));
  }
  const Element u = model.order_unit();
  const double tight_unit = std::abs(std::sqrt(inner_product_t3(model, u, u, tol)) - sqrt_m);
  return {Check::measure("norm_equiv.lower", std::max(lower, 0.0), tol.check_tol, "max |a| - sqrt<a|a>"),
          Check::measure("norm_equiv.tight_atom", tight_atom, tol.check_tol, "| sqrt<e|e> - 1 |"),
          Check::measure("norm_equiv.tight_unit", tight_unit, tol.check_tol, "| sqrt<I|I> - sqrt(m) |"),
          Check::measure("norm_equiv.upper", std::max(upper, 0.0), tol.check_tol, "max sqrt<a|a> - sqrt(m)|a|")};
}

/// Symmetry, bilinearity and positive definiteness of the spectral inner product.
template <Backend M>
std::vector<Check> check_inner_product(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  const auto& d = model.descriptor();
  if (!d.symmetric_tp) {
    return {detail::not_symmetric("inner.bilinear", d), detail::not_symmetric("inner.positive", d),
            detail::not_symmetric("inner.symmetric", d)};
  }
  double sym = 0.0, lin = 0.0, pos = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "inner", t);
    const Element a = model.random_coords(rng);
    const Element b = model.random_coords(rng);
    const Element c = model.random_coords(rng);
    const double al = uniform(rng, -2.0, 2.0);
    const double be = uniform(rng, -2.0, 2.0);
    const double ab = inner_product_t3(model, a, b, tol);
    sym = std::max(sym, std::abs(ab - inner_product_t3(model, b, a, tol)));
    const double cb = inner_product_t3(model, c, b, tol);
    lin = std::max(lin, std::abs(inner_product_t3(model, al * a + be * c, b, tol) - al * ab - be * cb));
    lin = std::max(lin, std::abs(inner_product_t3(model, b, al * a + be * c, tol) -
                                 al * inner_product_t3(model, b, a, tol) - be * inner_product_t3(model, b, c, tol)));
    const double nrm = order_norm(model, a, tol);
    pos = std::max(pos, nrm * nrm - inner_product_t3(model, a, a, tol));
  }
  return {Check::measure("inner.bilinear", lin, tol.check_tol, "max linearity defect in either argument"),
          Check::measure("inner.positive", std::max(pos, 0.0), tol.check_tol, "max |a|^2 - <a|a>"),
          Check::measure("inner.symmetric", sym, tol.check_tol, "max |<a|b> - <b|a>|")};
}

/**
 * Sampled Axiom 1: P_e is a state with P_e(e) = 1, and random mixed states
 * other than P_e stay below 1 at e. Uniqueness itself is analytic in every
 * backend and is only corroborated here.
 */
template <Backend M>
std::vector<Check> verify_axiom1(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  double self = 0.0, norm = 0.0, positivity = 0.0, others = 0.0;
  std::optional<Element> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "axiom1", t);
    const Element e = random_atom(model, rng);
    const Eigen::VectorXd pe = state_functional(model, e);
    self = std::max(self, std::abs(pe.dot(e.coords) - 1.0));
    norm = std::max(norm, std::abs(pe.dot(model.order_unit().coords) - 1.0));
    positivity = std::max(positivity, -pe.dot(random_element(model, rng, Shape::positive).coords));
    const Eigen::VectorXd sigma = detail::random_mixed_state(model, rng);
    if ((sigma - pe).cwiseAbs().maxCoeff() <= 1e-9) continue;
    const double v = sigma.dot(e.coords);
    if (v > others) {
      others = v;
      if (v > 1.0 - 1e-6) witness = e;
    }
  }
  const std::string assumed = "sampled; uniqueness of P_e is analytic in this backend and assumed";
  return {Check::measure("axiom1.other_states", others, 1.0 - 1e-6, "max sigma(e) over mixed sigma != P_e; " + assumed, witness),
          Check::measure("axiom1.self_value", self, tol.check_tol, "max |P_e(e) - 1|"),
          Check::measure("states.normalization", norm, tol.check_tol, "max |P_e(I) - 1|"),
          Check::measure("states.positivity", std::max(positivity, 0.0), tol.check_tol, "max -P_e(a) over sampled a >= 0")};
}

/**
 * Sampled Axiom 2. For generic a the states maximizing mu(a) form an exposed
 * face of the state space; it must contain P_e for the top spectral atom e,
 * with P_e(a) = max spectrum, and no sampled state may do better. Exposed
 * points are dense among the extreme points, so this samples the claim that
 * every pure state is some P_e. Sampled, not proven.
 */
template <Backend M>
std::vector<Check> verify_axiom2(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  double exposed = 0.0, beaten = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "axiom2", t);
    const Element a = model.random_coords(rng);
    const auto sf = spectral_decompose(model, a, tol);
    const double top = sf.max_eigenvalue();
    const double scale = std::max(1.0, sf.max_abs_eigenvalue());
    exposed = std::max(exposed, std::abs(model.state_value(sf.pairs.front().atom, a) - top) / scale);
    for (int k = 0; k < 4; ++k) {
      const Eigen::VectorXd sigma = k < 2 ? state_functional(model, random_atom(model, rng)) : detail::random_mixed_state(model, rng);
      beaten = std::max(beaten, (sigma.dot(a.coords) - top) / scale);
    }
  }
  std::string note = "sampled, not proven";
  if (model.descriptor().info_capacity == 2) note += "; capacity 2, where Axiom 2 is redundant";
  return {Check::measure("axiom2.exposed_value", exposed, tol.check_tol, "max |P_e(a) - max spec(a)| for the top atom e; " + note),
          Check::measure("axiom2.no_better_state", std::max(beaten, 0.0), tol.check_tol,
                         "max sigma(a) - max spec(a) over sampled states; " + note)};
}

/// Property (∗): a in [0, I] with P_e(a) = 1 built as e plus padding on the
/// complement frame of e; e <= a must hold.
template <Backend M>
std::vector<Check> verify_star(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  double level = 0.0, order = 0.0, interval = 0.0;
  int below_one = 0;
  std::optional<Element> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "star", t);
    const auto frame = model.random_frame(rng);
    const Element& e = frame[std::uniform_int_distribution<std::size_t>(0, frame.size() - 1)(rng)];
    const LogicElement rest{model.order_unit() - e, false};
    Element a = e;
    if (t % 4 == 1) {
      a = model.order_unit();
    } else if (t % 4 != 0) {
      for (const auto& g : atomic_decomposition(model, rest, tol)) a += uniform(rng) * g;
    }
    level = std::max(level, std::abs(model.state_value(e, a) - 1.0));
    const auto sf = spectral_decompose(model, a, tol);
    interval = std::max({interval, -sf.min_eigenvalue(), sf.max_eigenvalue() - 1.0});
    const double gap = -spectral_decompose(model, a - e, tol).min_eigenvalue();
    if (gap > order) {
      order = gap;
      witness = a;
    }
    // Elements with P_e(a) < 1 carry no claim; they are only counted.
    const Element b = random_element(model, rng, Shape::unit_interval);
    if (model.state_value(e, b) < 1.0 - 1e-9) ++below_one;
  }
  return {Check::measure("star.in_unit_interval", std::max(interval, 0.0), tol.cone_slack, "constructed a lies in [0, I]"),
          Check::measure("star.level", level, tol.check_tol, "max |P_e(a) - 1| for the constructed a"),
          Check::measure("star.order", std::max(order, 0.0), tol.cone_slack,
                         "max -min spec(a - e); " + std::to_string(below_one) + " samples with P_e(a) < 1 carry no claim",
                         order > tol.cone_slack ? witness : std::nullopt)};
}

/**
 * Strong state space, through the contrapositive: for p not <= q some state
 * P_e with e an atom of p has P_e(p) = 1 and P_e(q) < 1. A sampling
 * surrogate; there is no global certificate.
 */
template <Backend M>
std::vector<Check> verify_strong_state_space(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  double comparable = 0.0;
  int missing = 0, searched = 0;
  std::optional<Element> witness;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "strong", t);
    const Element p = random_element(model, rng, Shape::logic);
    Element q = random_element(model, rng, Shape::logic);
    if (t % 2 == 0) {
      // q := p + part of the complement of p, so p <= q.
      q = p;
      for (const auto& g : atomic_decomposition(model, LogicElement{model.order_unit() - p, false}, tol)) {
        if (std::bernoulli_distribution(0.5)(rng)) q += g;
      }
    }
    const auto atoms = atomic_decomposition(model, LogicElement{p, false}, tol);
    if (order_leq(model, p, q, tol)) {
      for (const auto& e : atoms) comparable = std::max(comparable, std::abs(model.state_value(e, q) - 1.0));
      continue;
    }
    ++searched;
    bool found = false;
    for (const auto& e : atoms) {
      if (model.state_value(e, p) >= 1.0 - 1e-9 && model.state_value(e, q) < 1.0 - 1e-6) {
        found = true;
        break;
      }
    }
    if (!found) {
      ++missing;
      if (!witness) witness = p;
    }
  }
  const std::string note = "sampling surrogate for the strong state space property; " + std::to_string(searched) +
                           " non-comparable pairs searched";
  return {Check::measure("strong.comparable", comparable, tol.check_tol, "p <= q: max |P_e(q) - 1| over atoms e of p"),
          Check::measure("strong.witness", missing, 0.0, note, witness)};
}

/**
 * Orthogonality consistency: for atom pairs, P_{e1}(e2) = 0 iff P_{e2}(e1) = 0
 * iff e1 + e2 <= I; and for a >= 0 the top atom e of a has P_e(a) = |a| and
 * |a| e <= a.
 */
template <Backend M>
std::vector<Check> verify_orthogonality_lemmas(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  int mismatches = 0;
  double top_value = 0.0, top_order = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "orthogonality", t);
    Element e1, e2;
    if (t % 2 == 0) {
      auto frame = model.random_frame(rng);
      e1 = frame[0];
      e2 = frame[1 % frame.size()];
      if (frame.size() == 1) e2 = random_atom(model, rng);
    } else {
      std::tie(e1, e2) = random_atom_pair(model, rng);
    }
    const bool z12 = std::abs(model.state_value(e1, e2)) <= tol.check_tol;
    const bool z21 = std::abs(model.state_value(e2, e1)) <= tol.check_tol;
    const bool sum_le = order_leq(model, e1 + e2, model.order_unit(), tol);
    if (z12 != z21 || z12 != sum_le) ++mismatches;

    const Element a = random_element(model, rng, Shape::positive);
    const auto sf = spectral_decompose(model, a, tol);
    const double nrm = sf.max_abs_eigenvalue();
    const Element& top = sf.pairs.front().atom;
    top_value = std::max(top_value, std::abs(model.state_value(top, a) - nrm));
    top_order = std::max(top_order, -spectral_decompose(model, a - nrm * top, tol).min_eigenvalue());
  }
  return {Check::measure("orthogonality.biconditional", mismatches, 0.0,
                         "P_{e1}(e2) = 0, P_{e2}(e1) = 0 and e1 + e2 <= I agree"),
          Check::measure("orthogonality.top_atom_order", std::max(top_order, 0.0), tol.cone_slack, "|a| e <= a"),
          Check::measure("orthogonality.top_atom_value", top_value, tol.check_tol, "P_e(a) = |a| for the top atom")};
}

/// Transition-probability checks: symmetry and resolution of unity by frames.
template <Backend M>
std::vector<Check> verify_transition(const M& model, std::uint64_t seed, int trials, const Tolerance& tol = {}) {
  double resolution = 0.0, range = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "tp.resolution", t);
    const auto frame = model.random_frame(rng);
    const Element e = random_atom(model, rng);
    double sum = 0.0;
    for (const auto& ek : frame) {
      const double v = model.state_value(ek, e);
      range = std::max({range, -v, v - 1.0});
      sum += v;
    }
    resolution = std::max(resolution, std::abs(sum - 1.0));
  }
  const double sym = symmetry_defect(model, seed, trials, tol);
  std::string note = "max |P_{e1}(e2) - P_{e2}(e1)|";
  if (!model.descriptor().symmetric_tp) note += "; model declares a non-symmetric transition probability";
  return {Check::measure("tp.range", std::max(range, 0.0), tol.check_tol, "entries within [0, 1]"),
          Check::measure("tp.resolution", resolution, tol.check_tol, "max |sum_k P_{e_k}(e) - 1| over a frame"),
          Check::measure("tp.symmetry", sym, tol.check_tol, note)};
}

}  // namespace jordantp
