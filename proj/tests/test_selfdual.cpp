#include "jordantp/selfdual.hpp"
#include "jordantp/transition.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace jordantp;
using Catch::Approx;
using testutil::max_abs_diff;

namespace {

bool all_pass(const std::vector<Check>& cs) {
  bool ok = true;
  for (const auto& c : cs) {
    INFO(c.name << " defect=" << c.defect << " tol=" << c.tolerance << " " << c.note);
    CHECK(c.passed);
    ok = ok && c.passed;
  }
  return ok;
}

const Check& find(const std::vector<Check>& cs, const std::string& name) {
  for (const auto& c : cs) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

SelfDualCone pentagon() { return SelfDualCone(GeneratorCone(oracle::pentagonal_cone())); }
SelfDualCone orthant(int n) { return SelfDualCone(GeneratorCone(Eigen::MatrixXd::Identity(n, n))); }

std::vector<double> coefficients(const SpectralForm& sf) {
  std::vector<double> v;
  for (const auto& pr : sf.pairs) v.push_back(pr.eigenvalue);
  return v;
}

}  // namespace

TEST_CASE("nonnegative least squares", "[selfdual]") {
  for (int t = 0; t < 40; ++t) {
    Rng rng = testutil::rng_for("nnls", t);
    const Eigen::Index rows = 3 + t % 3, cols = 2 + t % 5;
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) a.col(j) = gaussian_vector(rng, rows);
    const Eigen::VectorXd b = gaussian_vector(rng, rows);
    const auto res = nnls(a, b);
    CHECK(res.x.minCoeff() >= 0.0);
    CHECK(res.residual == Approx((a * res.x - b).norm()).margin(1e-12));
    CHECK(res.residual == Approx(oracle::nnls_residual_bruteforce(a, b)).margin(1e-9));
  }
  CHECK_THROWS_AS(nnls(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(3)), DimensionMismatch);
}

TEST_CASE("generator cones", "[selfdual]") {
  const GeneratorCone pent(oracle::pentagonal_cone());
  CHECK(pent.atoms().size() == 5);
  for (const auto& a : pent.atoms()) CHECK(a.norm() == Approx(1.0));
  // Orthogonality graph is the pentagram: its maximal cliques are the
  // non-adjacent pairs.
  const auto fams = pent.maximal_orthogonal_families();
  const std::vector<std::vector<std::size_t>> expected{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}};
  CHECK(fams == expected);

  const GeneratorCone o3(Eigen::MatrixXd::Identity(3, 3));
  CHECK(o3.maximal_orthogonal_families() == std::vector<std::vector<std::size_t>>{{0, 1, 2}});

  // A redundant generator and a duplicate ray are not atoms.
  Eigen::MatrixXd g(2, 4);
  g << 1, 0, 1, 2, 0, 1, 1, 0;
  const GeneratorCone q(g);
  CHECK(q.atoms().size() == 2);

  CHECK_THROWS_AS(GeneratorCone(Eigen::MatrixXd::Zero(2, 1)), InvalidArgument);
  CHECK_THROWS_AS(GeneratorCone::from_rows({{1, 0}, {1}}), InvalidArgument);
}

TEST_CASE("Moreau decomposition examples", "[selfdual]") {
  const SelfDualCone c2(Model(Classical(2)));
  auto mp = moreau_decompose(c2, Element{2, -3});
  CHECK(mp.a_plus.coords == Eigen::Vector2d(2, 0));
  CHECK(mp.a_minus.coords == Eigen::Vector2d(0, 3));

  const SymMatrices sym(2);
  const SelfDualCone s2{Model(sym)};
  mp = moreau_decompose(s2, sym.from_matrix(Eigen::Matrix2d(Eigen::Vector2d(1, -1).asDiagonal())));
  CHECK(sym.to_matrix(mp.a_plus).isApprox(Eigen::Matrix2d(Eigen::Vector2d(1, 0).asDiagonal())));
  CHECK(sym.to_matrix(mp.a_minus).isApprox(Eigen::Matrix2d(Eigen::Vector2d(0, 1).asDiagonal())));

  const SelfDualCone spin{Model(SpinFactor(2))};
  mp = moreau_decompose(spin, Element{0, 1, 0});
  CHECK(max_abs_diff(mp.a_plus, Element{0.5, 0.5, 0}) <= 1e-15);
  CHECK(max_abs_diff(mp.a_minus, Element{0.5, -0.5, 0}) <= 1e-15);

  // The orthant as a generator cone and as a spectral cone agree.
  const auto o3 = orthant(3);
  const SelfDualCone c3{Model(Classical(3))};
  for (int t = 0; t < 20; ++t) {
    Rng rng = testutil::rng_for("moreau.orthant", t);
    const Element a = c3.random_vector(rng);
    const auto g = moreau_decompose(o3, a);
    const auto s = moreau_decompose(c3, a);
    CHECK(max_abs_diff(g.a_plus, s.a_plus) <= 1e-10);
    CHECK(max_abs_diff(g.a_minus, s.a_minus) <= 1e-10);
  }
}

TEST_CASE("Moreau invariants", "[selfdual][property]") {
  for (const auto& spec : testutil::symmetric_specs()) {
    INFO(spec);
    all_pass(verify_moreau(SelfDualCone(Model::parse(spec)), 4, 200));
  }
  all_pass(verify_moreau(orthant(4), 4, 200));
  all_pass(verify_moreau(pentagon(), 4, 200));
}

TEST_CASE("atoms of a self-dual cone", "[selfdual]") {
  const SymMatrices sym(3);
  const SelfDualCone s3{Model(sym)};
  Rng rng = testutil::rng_for("sd.atom");
  const auto frame = sym.random_frame(rng);
  CHECK(is_atom_sd(s3, frame[0]));
  // Two orthogonal projections scaled to unit length are decomposable.
  CHECK_FALSE(is_atom_sd(s3, (1.0 / std::sqrt(2.0)) * (frame[0] + frame[1])));
  CHECK_FALSE(is_atom_sd(s3, 2.0 * frame[0]));
  CHECK_FALSE(is_atom_sd(s3, -1.0 * frame[0]));

  const SelfDualCone c3{Model(Classical(3))};
  CHECK(is_atom_sd(c3, Element{1, 0, 0}));
  CHECK_FALSE(is_atom_sd(c3, Element{1, 1, 0}));

  const auto pent = pentagon();
  CHECK(is_atom_sd(pent, Element(pent.generator_cone()->atoms()[3])));
  CHECK_FALSE(is_atom_sd(pent, Element{0, 0, 1}));
}

TEST_CASE("spectral peeling", "[selfdual]") {
  const SelfDualCone c3{Model(Classical(3))};
  auto sf = peel_spectral(c3, Element{2, 1, 0}, default_split_oracle(c3, 1));
  REQUIRE(sf.size() == 2);
  CHECK(sf.pairs[0].eigenvalue == Approx(2.0));
  CHECK(sf.pairs[0].atom.coords == Eigen::Vector3d(1, 0, 0));
  CHECK(sf.pairs[1].eigenvalue == Approx(1.0));
  CHECK(sf.pairs[1].atom.coords == Eigen::Vector3d(0, 1, 0));

  const HermMatrices herm(3);
  const SelfDualCone h3{Model(herm)};
  Rng rng = testutil::rng_for("peel");
  const Element e = random_atom(herm, rng);
  sf = peel_spectral(h3, e, default_split_oracle(h3, 1));
  REQUIRE(sf.size() == 1);
  CHECK(sf.pairs[0].eigenvalue == Approx(1.0));
  CHECK(max_abs_diff(sf.pairs[0].atom, e) <= 1e-9);

  for (int t = 0; t < 30; ++t) {
    Rng r = testutil::rng_for("peel.herm", t);
    const Element a = herm.random_coords(r);
    const auto peeled = peel_spectral(h3, a, default_split_oracle(h3, static_cast<std::uint64_t>(t)));
    const auto ref = oracle::eigenvalues(Eigen::Matrix3cd(herm.to_matrix(a)));
    auto got = coefficients(peeled);
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(got[static_cast<std::size_t>(k)] == Approx(ref[k]).margin(1e-8));
    CHECK(order_norm(herm, peeled.reconstruct(9) - a) <= 1e-8);
  }

  // Elements of [0, I] peel to coefficients in [0, 1].
  const SymMatrices sym(4);
  const SelfDualCone s4{Model(sym)};
  for (int t = 0; t < 30; ++t) {
    Rng r = testutil::rng_for("peel.unit", t);
    const Element a = random_element(sym, r, Shape::unit_interval);
    for (double c : coefficients(peel_spectral(s4, a, default_split_oracle(s4, 3)))) {
      CHECK(c >= -1e-9);
      CHECK(c <= 1.0 + 1e-9);
    }
  }

  // Generator cone: the orthant peels to its coordinates.
  const auto o3 = orthant(3);
  sf = peel_spectral(o3, Element{3, -1, 0.5}, default_split_oracle(o3, 2));
  auto got = coefficients(sf);
  CHECK(got == std::vector<double>{3, 0.5, -1});
}

TEST_CASE("order unit recovery", "[selfdual]") {
  const SelfDualCone c3{Model(Classical(3))};
  CHECK(recover_order_unit(c3, 1).coords == Eigen::Vector3d(1, 1, 1));
  CHECK(max_abs_diff(recover_order_unit(orthant(3), 1), Element{1, 1, 1}) <= 1e-12);

  const HermMatrices herm(2);
  const SelfDualCone h2{Model(herm)};
  CHECK(max_abs_diff(recover_order_unit(h2, 1), herm.order_unit()) <= 1e-9);
  const Element via_basis = herm.projector(Eigen::Vector2cd(1, 0)) + herm.projector(Eigen::Vector2cd(0, 1));
  const Element via_hadamard = herm.projector(Eigen::Vector2cd(1, 1) / std::sqrt(2.0)) +
                               herm.projector(Eigen::Vector2cd(1, -1) / std::sqrt(2.0));
  CHECK(max_abs_diff(via_basis, via_hadamard) <= 1e-15);

  const SymMatrices sym(3);
  const SelfDualCone s3{Model(sym)};
  const auto rec = order_unit_recovery(s3, 9, 8);
  CHECK(rec.families == 8);
  CHECK(rec.family_defect <= 1e-9);
  CHECK(max_abs_diff(rec.unit, sym.order_unit()) <= 1e-9);

  CHECK_THROWS_AS(recover_order_unit(pentagon(), 1), TpViolation);
  try {
    recover_order_unit(pentagon(), 1);
  } catch (const TpViolation& e) {
    CHECK(e.defect() > 0.1);
  }
}

TEST_CASE("property (tp)", "[selfdual]") {
  // Basis family and e from (1, i)/sqrt 2: 0.5 + 0.5.
  const HermMatrices herm(2);
  const SelfDualCone h2{Model(herm)};
  const Eigen::Vector2cd eta = Eigen::Vector2cd(std::complex<double>(1, 0), std::complex<double>(0, 1)) / std::sqrt(2.0);
  const Element e = herm.projector(eta);
  const double t0 = h2.inner(herm.projector(Eigen::Vector2cd(1, 0)), e);
  const double t1 = h2.inner(herm.projector(Eigen::Vector2cd(0, 1)), e);
  CHECK(t0 == Approx(0.5));
  CHECK(t1 == Approx(0.5));
  // A family member alone carries the whole sum.
  const Element d0 = herm.projector(Eigen::Vector2cd(1, 0));
  CHECK(h2.inner(d0, d0) + h2.inner(herm.projector(Eigen::Vector2cd(0, 1)), d0) == Approx(1.0));

  all_pass(verify_tp_property(SelfDualCone(Model(SymMatrices(4))), 5, 200));
  all_pass(verify_tp_property(orthant(4), 5, 200));

  const auto pent = verify_tp_property(pentagon(), 5, 200);
  CHECK_FALSE(find(pent, "sd.tp").passed);
  CHECK_FALSE(find(pent, "sd.unit_families").passed);
  CHECK(find(pent, "sd.tp").witness);
}

TEST_CASE("property (***)", "[selfdual]") {
  const SymMatrices sym(3);
  const SelfDualCone s3{Model(sym)};
  Rng rng = testutil::rng_for("star3");
  const auto frame = sym.random_frame(rng);
  const Element a = frame[0] + 0.5 * frame[1];
  CHECK(s3.inner(frame[0], a) == Approx(1.0));
  CHECK(s3.contains(a - frame[0]));
  CHECK(s3.contains(sym.order_unit() - a));
  all_pass(verify_star3(s3, 5, 200));
  all_pass(verify_star3(orthant(3), 5, 200));

  const auto pent = verify_star3(pentagon(), 5, 50);
  for (const auto& c : pent) {
    CHECK(c.passed);
    CHECK(c.note.rfind("skipped:", 0) == 0);
  }
}

TEST_CASE("self-duality of the cones themselves", "[selfdual]") {
  all_pass(verify_cone_self_duality(pentagon(), 6, 300));
  all_pass(verify_cone_self_duality(orthant(3), 6, 300));
  for (const auto& spec : testutil::symmetric_specs()) {
    INFO(spec);
    all_pass(verify_cone_self_duality(SelfDualCone(Model::parse(spec)), 6, 100));
  }
  // A cone that is not self-dual: the quadrant spanned by (1,0) and (1,1) has
  // dual vectors like (1, -0.5) outside it.
  Eigen::MatrixXd g(2, 2);
  g << 1, 1, 0, 1;
  const SelfDualCone narrow{GeneratorCone(g)};
  CHECK_FALSE(find(verify_cone_self_duality(narrow, 6, 300), "sd.cone.dual_in_cone").passed);

  CHECK_THROWS_AS(SelfDualCone(Model::parse("lpq:2:3")), Unsupported);
}

TEST_CASE("orthogonal parts of a sum are orthogonal to each part", "[selfdual][property]") {
  for (const char* spec : {"sym:3", "herm:2", "spin:3", "classical:4"}) {
    const SelfDualCone cone{Model::parse(spec)};
    INFO(spec);
    for (int t = 0; t < 50; ++t) {
      Rng rng = testutil::rng_for(std::string("orth_parts.") + spec, t);
      // b on part of a frame, a1 and a2 on the rest.
      const auto frame = cone.random_family(rng);
      if (frame.size() < 2) continue;
      Element b = Element::zero(cone.ambient_dim()), a1 = b, a2 = b;
      b += uniform(rng, 0.1, 2.0) * frame[0];
      for (std::size_t k = 1; k < frame.size(); ++k) {
        a1 += uniform(rng) * frame[k];
        a2 += uniform(rng) * frame[k];
      }
      REQUIRE(std::abs(cone.inner(a1 + a2, b)) <= 1e-9);
      CHECK(std::abs(cone.inner(a1, b)) <= 1e-9);
      CHECK(std::abs(cone.inner(a2, b)) <= 1e-9);
    }
  }
}

TEST_CASE("cones with (tp) and (***) induce the axioms", "[selfdual][property]") {
  const Tolerance tol;
  for (const auto& spec : testutil::symmetric_specs()) {
    const Model m = Model::parse(spec);
    const SelfDualCone cone(m);
    INFO(spec);
    const bool tp = all_pass(verify_tp_property(cone, 8, 100));
    const bool s3 = all_pass(verify_star3(cone, 8, 100));
    REQUIRE(tp);
    REQUIRE(s3);
    all_pass(verify_axiom1(m, 8, 100));
    all_pass(verify_star(m, 8, 100));
    CHECK(symmetry_defect(m, 8, 100) <= 1e-9);
    // The recovered unit is the model's unit.
    CHECK(order_norm(m, recover_order_unit(cone, 8, 5, tol) - m.order_unit()) <= 1e-9);
  }
}

TEST_CASE("split oracle limits", "[selfdual]") {
  const auto o3 = orthant(3);
  const auto oracle_fn = default_split_oracle(o3, 1);
  CHECK_THROWS_AS(oracle_fn(Element{-1, 0, 0}), Unsupported);
  CHECK_FALSE(oracle_fn(Element{2, 0, 0}));
  const auto parts = oracle_fn(Element{1, 2, 0});
  REQUIRE(parts);
  CHECK(max_abs_diff(parts->first + parts->second, Element{1, 2, 0}) <= 1e-12);
  CHECK(std::abs(parts->first.coords.dot(parts->second.coords)) <= 1e-12);

  // In the pentagonal cone a sum of adjacent generators is neither split nor
  // a multiple of an atom.
  const auto pent = pentagon();
  const auto& atoms = pent.generator_cone()->atoms();
  const auto pent_oracle = default_split_oracle(pent, 1);
  CHECK_THROWS_AS(pent_oracle(Element(atoms[0] + atoms[1])), Unsupported);
  CHECK(pent_oracle(Element(atoms[0] + atoms[2])));
}
