#pragma once

/**
 * @file suites.hpp
 * @brief Named verification suites: axioms, spectral, logic, tp, selfdual,
 * all. Checks in a report are sorted by name.
 */

#include "jordantp/logic.hpp"
#include "jordantp/model.hpp"
#include "jordantp/report.hpp"
#include "jordantp/selfdual.hpp"
#include "jordantp/transition.hpp"

#include <chrono>

namespace jordantp {

namespace detail {

inline void append(std::vector<Check>& out, std::vector<Check> more) {
  for (auto& c : more) out.push_back(std::move(c));
}

}  // namespace detail

inline std::vector<Check> suite_axioms(const Model& model, std::uint64_t seed, int trials, const Tolerance& tol) {
  std::vector<Check> out;
  detail::append(out, verify_axiom1(model, seed, trials, tol));
  detail::append(out, verify_axiom2(model, seed, trials, tol));
  detail::append(out, verify_star(model, seed, trials, tol));
  detail::append(out, verify_strong_state_space(model, seed, trials, tol));
  detail::append(out, verify_orthogonality_lemmas(model, seed, trials, tol));
  return out;
}

inline std::vector<Check> suite_spectral(const Model& model, std::uint64_t seed, int trials, const Tolerance& tol) {
  const auto& d = model.descriptor();
  const Element unit = model.order_unit();
  double recon = 0.0, frame_sum = 0.0, frame_orth = 0.0, over_capacity = 0.0, atoms_bad = 0.0, unsorted = 0.0;
  double homog = 0.0, triangle = 0.0, cone_mismatch = 0.0, interval_mismatch = 0.0, calc_id = 0.0, unit_neutral = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "spectral", t);
    const Element a = model.random_coords(rng);
    const Element b = model.random_coords(rng);
    const auto sf = spectral_decompose(model, a, tol);
    recon = std::max(recon, order_norm(model, a - sf.reconstruct(d.ambient_dim), tol));
    frame_sum = std::max(frame_sum, order_norm(model, sf.frame_sum(d.ambient_dim) - unit, tol));
    over_capacity = std::max(over_capacity, static_cast<double>(sf.size()) - static_cast<double>(d.info_capacity));
    for (std::size_t i = 0; i < sf.size(); ++i) {
      if (!is_atom(model, sf.pairs[i].atom, tol)) atoms_bad += 1.0;
      if (i > 0 && sf.pairs[i].eigenvalue > sf.pairs[i - 1].eigenvalue) unsorted += 1.0;
      for (std::size_t j = 0; j < sf.size(); ++j) {
        if (i != j) frame_orth = std::max(frame_orth, std::abs(model.state_value(sf.pairs[i].atom, sf.pairs[j].atom)));
      }
    }

    const double na = sf.max_abs_eigenvalue();
    const double s = uniform(rng, -3.0, 3.0);
    homog = std::max(homog, std::abs(order_norm(model, s * a, tol) - std::abs(s) * na));
    triangle = std::max(triangle, order_norm(model, a + b, tol) - na - order_norm(model, b, tol));

    // Membership and norm read off the spectrum agree with the
    // order-interval characterizations.
    const bool in_cone = cone_contains(model, a, tol);
    if (in_cone != (sf.min_eigenvalue() >= -tol.cone_slack)) cone_mismatch += 1.0;
    const bool in_cone_neg = cone_contains(model, -a, tol);
    if (in_cone && in_cone_neg && na > tol.cone_slack) cone_mismatch += 1.0;
    const double slack = 1e-9 * std::max(1.0, na);
    const bool inside = cone_contains(model, (na + slack) * unit - a, tol) && cone_contains(model, (na + slack) * unit + a, tol);
    const double shrink = na * (1.0 - 1e-6) - 10.0 * tol.cone_slack;
    const bool outside = shrink <= 0.0 || !cone_contains(model, shrink * unit - a, tol) ||
                         !cone_contains(model, shrink * unit + a, tol);
    if (!inside || !outside) interval_mismatch += 1.0;

    calc_id = std::max(calc_id, order_norm(model, func_calculus(model, a, [](double x) { return x; }, tol) - a, tol));
    unit_neutral = std::max(unit_neutral, order_norm(model, jordan_product_polarized(model, a, unit, tol) - a, tol) /
                                              std::max(1.0, na));
  }
  const double norm_unit = std::abs(order_norm(model, unit, tol) - 1.0);

  std::vector<Check> out{
      Check::measure("calculus.identity", calc_id, tol.check_tol, "f = id reproduces a"),
      Check::measure("calculus.unit_product", unit_neutral, tol.check_tol, "a o I = a (relative)"),
      Check::measure("norm.cone_consistency", cone_mismatch, 0.0, "cone membership vs spectrum mismatches"),
      Check::measure("norm.homogeneity", homog, tol.check_tol, "| |s a| - |s| |a| |"),
      Check::measure("norm.order_interval", interval_mismatch, 0.0, "|a| is the least s with -sI <= a <= sI"),
      Check::measure("norm.triangle", std::max(triangle, 0.0), tol.check_tol, "|a + b| - |a| - |b|"),
      Check::measure("norm.unit", norm_unit, tol.check_tol, "| |I| - 1 |"),
      Check::measure("spectral.atoms", atoms_bad, 0.0, "frame members that are not atoms"),
      Check::measure("spectral.capacity", std::max(over_capacity, 0.0), 0.0, "frame size beyond m"),
      Check::measure("spectral.frame_orthogonal", frame_orth, tol.check_tol, "max P_{e_i}(e_j), i != j"),
      Check::measure("spectral.frame_sum", frame_sum, tol.check_tol, "| sum e_k - I |"),
      Check::measure("spectral.reconstruct", recon, tol.check_tol, "| a - sum s_k e_k |"),
      Check::measure("spectral.sorted", unsorted, 0.0, "eigenvalues out of descending order"),
  };
  const int lin_trials = std::min(trials, 100);
  const double lin = linearity_defect(model, seed, lin_trials, tol);
  if (d.symmetric_tp) {
    out.push_back(Check::measure("jordan.linearity", lin, 1e-8, "polarized product is bilinear"));
  } else {
    out.push_back(Check::measure("jordan.linearity", lin, std::numeric_limits<double>::max(),
                                 "informational: not a Jordan algebra, the polarized product is expected to be non-linear"));
  }
  return out;
}

inline std::vector<Check> suite_logic(const Model& model, std::uint64_t seed, int trials, const Tolerance& tol) {
  const Element unit = model.order_unit();
  auto gap = [&](const Element& lo, const Element& hi) {
    return std::max(0.0, -spectral_decompose(model, hi - lo, tol).min_eigenvalue());
  };
  double involution = 0.0, bounds = 0.0, de_morgan = 0.0, orthomodular = 0.0, difference = 0.0, lemma1 = 0.0,
         lemma3 = 0.0, family = 0.0, glb = 0.0;
  int ambiguous = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = detail::check_rng(seed, "logic", t);
    const LogicElement p{random_element(model, rng, Shape::logic), false};
    const LogicElement q{random_element(model, rng, Shape::logic), false};
    const LogicElement pc = orthocomplement(model, p, tol);
    involution = std::max(involution, order_norm(model, orthocomplement(model, pc, tol).value - p.value, tol));
    if (!is_logic_element(model, pc.value, tol)) lemma1 += 1.0;
    try {
      const auto m = meet(model, p, q, tol);
      const auto j = join(model, p, q, tol);
      bounds = std::max({bounds, gap(m.value, p.value), gap(m.value, q.value), gap(p.value, j.value), gap(q.value, j.value)});
      // (p ^ q)' = p' v q'
      const auto jc = join(model, pc, orthocomplement(model, q, tol), tol);
      de_morgan = std::max(de_morgan, order_norm(model, orthocomplement(model, m, tol).value - jc.value, tol));
      // Atoms below both p and q lie below the meet.
      for (const auto& e : atomic_decomposition(model, p, tol)) {
        if (order_leq(model, e, q.value, tol)) glb = std::max(glb, gap(e, m.value));
      }

      // p <= r := p v q: orthomodular law and the difference identity.
      const LogicElement r = j;
      const auto rp = meet(model, r, pc, tol);
      orthomodular = std::max(orthomodular, order_norm(model, join(model, p, rp, tol).value - r.value, tol));
      difference = std::max(difference, order_norm(model, (r.value - p.value) - rp.value, tol));
    } catch (const AmbiguousSpectrum&) {
      ++ambiguous;
    }

    // q + e and q - e for atoms e orthogonal to / below q.
    const auto frame = model.random_frame(rng);
    Element qq = Element::zero(model.descriptor().ambient_dim);
    for (std::size_t k = 1; k < frame.size(); ++k) {
      if (std::bernoulli_distribution(0.5)(rng)) qq += frame[k];
    }
    if (!is_logic_element(model, qq + frame[0], tol)) lemma3 += 1.0;
    if (!is_logic_element(model, (qq + frame[0]) - frame[0], tol)) lemma3 += 1.0;

    // Family test agrees with the pairwise test on atoms.
    std::vector<Element> fam{frame[0], frame.size() > 1 ? frame[1] : frame[0]};
    if (t % 2 == 1) fam.push_back(random_atom(model, rng));
    bool pairwise = true;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      for (std::size_t k = i + 1; k < fam.size(); ++k) pairwise = pairwise && order_leq(model, fam[i] + fam[k], unit, tol);
    }
    if (pairwise != is_orthogonal_family(model, fam, tol)) family += 1.0;
  }
  const auto m = model.descriptor().info_capacity;
  const auto found = information_capacity_empirical(model, seed, std::min(trials, 20), tol);
  return {
      Check::measure("logic.ambiguous_meets", ambiguous, 0.0, "meets refused because a cluster straddled the threshold"),
      Check::measure("logic.capacity", std::abs(static_cast<double>(found) - static_cast<double>(m)), 0.0,
                     "empirical capacity " + std::to_string(found) + " vs m = " + std::to_string(m)),
      Check::measure("logic.complement_extreme", lemma1, 0.0, "I - p fails to be a logic element"),
      Check::measure("logic.de_morgan", de_morgan, tol.check_tol, "(p ^ q)' = p' v q'"),
      Check::measure("logic.difference", difference, tol.check_tol, "r - p = r ^ p' for p <= r"),
      Check::measure("logic.family_pairwise", family, 0.0, "family test vs pairwise test mismatches"),
      Check::measure("logic.greatest_lower_bound", glb, tol.cone_slack, "atoms below p and q lie below p ^ q"),
      Check::measure("logic.involution", involution, tol.check_tol, "p'' = p"),
      Check::measure("logic.meet_join_bounds", bounds, tol.cone_slack, "p ^ q <= p, q <= p v q"),
      Check::measure("logic.orthomodular", orthomodular, tol.check_tol, "r = p v (r ^ p') for p <= r"),
      Check::measure("logic.sum_extreme", lemma3, 0.0, "q + e or (q + e) - e fails to be a logic element"),
  };
}

inline std::vector<Check> suite_tp(const Model& model, std::uint64_t seed, int trials, const Tolerance& tol) {
  std::vector<Check> out;
  detail::append(out, verify_transition(model, seed, trials, tol));
  detail::append(out, check_inner_product(model, seed, trials, tol));
  detail::append(out, check_self_duality(model, seed, trials, tol));
  detail::append(out, check_norm_equivalence(model, seed, trials, tol));
  return out;
}

inline std::vector<Check> suite_selfdual(const Model& model, std::uint64_t seed, int trials, const Tolerance& tol) {
  const auto& d = model.descriptor();
  const std::vector<std::string> names{"sd.cone.dual_in_cone", "sd.cone.primal",      "sd.moreau.membership",
                                       "sd.moreau.orthogonal", "sd.moreau.reconstruct", "sd.moreau.repeat",
                                       "sd.peel",              "sd.star3.level",      "sd.star3.order",
                                       "sd.tp",                "sd.unit_atoms",       "sd.unit_families",
                                       "sd.unit_matches_model"};
  if (!d.symmetric_tp) {
    std::vector<Check> out;
    for (const auto& n : names) out.push_back(Check::skipped(n, "model " + d.spec_string() + " has no self-dualizing inner product"));
    return out;
  }
  const SelfDualCone cone(model);
  std::vector<Check> out;
  detail::append(out, verify_cone_self_duality(cone, seed, trials, tol));
  detail::append(out, verify_moreau(cone, seed, trials, tol));
  detail::append(out, verify_tp_property(cone, seed, trials, tol));
  detail::append(out, verify_star3(cone, seed, trials, tol));

  // Peeling agrees with the backend spectrum on the nonzero coefficients.
  const auto oracle = default_split_oracle(cone, seed, tol);
  double peel = 0.0;
  for (int t = 0; t < std::min(trials, 200); ++t) {
    Rng rng = detail::check_rng(seed, "sd.peel", t);
    const Element a = model.random_coords(rng);
    const auto peeled = peel_spectral(cone, a, oracle, tol);
    std::vector<double> lhs, rhs;
    for (const auto& pr : peeled.pairs) lhs.push_back(pr.eigenvalue);
    for (const auto& pr : spectral_decompose(model, a, tol).pairs) {
      if (std::abs(pr.eigenvalue) > tol.check_tol * std::max(1.0, std::abs(a.coords.maxCoeff()))) rhs.push_back(pr.eigenvalue);
    }
    if (lhs.size() != rhs.size()) {
      peel = std::max(peel, 1.0);
      continue;
    }
    for (std::size_t k = 0; k < lhs.size(); ++k) peel = std::max(peel, std::abs(lhs[k] - rhs[k]));
    peel = std::max(peel, order_norm(model, peeled.reconstruct(d.ambient_dim) - a, tol));
  }
  out.push_back(Check::measure("sd.peel", peel, 1e-8, "peeled coefficients match the spectrum; reconstruction"));
  const auto rec = order_unit_recovery(cone, seed);
  out.push_back(Check::measure("sd.unit_matches_model", order_norm(model, rec.unit - model.order_unit(), tol), tol.check_tol,
                               "recovered unit equals the model's order unit"));
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms", "spectral", "logic", "tp", "selfdual", "all"};
  return names;
}

inline VerificationReport run_suite(const Model& model, const std::string& suite, std::uint64_t seed, int trials,
                                    const Tolerance& tol = {}) {
  tol.validate();
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.model = model.descriptor();
  r.suite = suite;
  r.seed = seed;
  r.trials = trials;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "axioms") known = true, detail::append(r.checks, suite_axioms(model, seed, trials, tol));
  if (all || suite == "spectral") known = true, detail::append(r.checks, suite_spectral(model, seed, trials, tol));
  if (all || suite == "logic") known = true, detail::append(r.checks, suite_logic(model, seed, trials, tol));
  if (all || suite == "tp") known = true, detail::append(r.checks, suite_tp(model, seed, trials, tol));
  if (all || suite == "selfdual") known = true, detail::append(r.checks, suite_selfdual(model, seed, trials, tol));
  if (!known) throw InvalidArgument("unknown suite '" + suite + "' (axioms, spectral, logic, tp, selfdual, all)");
  std::stable_sort(r.checks.begin(), r.checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace jordantp
