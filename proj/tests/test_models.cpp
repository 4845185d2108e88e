#include "jordantp/model.hpp"
#include "jordantp/transition.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace jordantp;
using Catch::Approx;
using testutil::max_abs_diff;

namespace {

// Multiset of eigenvalues, descending.
std::vector<double> eigs(const SpectralForm& sf) {
  std::vector<double> v;
  for (const auto& pr : sf.pairs) v.push_back(pr.eigenvalue);
  return v;
}

}  // namespace

TEST_CASE("closed-form spectra", "[models]") {
  const auto c = spectral_decompose(Classical(2), Element{3, -1});
  REQUIRE(c.size() == 2);
  CHECK(c.pairs[0].eigenvalue == 3.0);
  CHECK(c.pairs[0].atom.coords == Eigen::Vector2d(1, 0));
  CHECK(c.pairs[1].eigenvalue == -1.0);
  CHECK(c.pairs[1].atom.coords == Eigen::Vector2d(0, 1));

  const auto s = spectral_decompose(SpinFactor(2), Element{1, 1, 0});
  REQUIRE(s.size() == 2);
  CHECK(s.pairs[0].eigenvalue == 2.0);
  CHECK(s.pairs[0].atom.coords == Eigen::Vector3d(0.5, 0.5, 0));
  CHECK(s.pairs[1].eigenvalue == 0.0);
  CHECK(s.pairs[1].atom.coords == Eigen::Vector3d(0.5, -0.5, 0));

  const SymMatrices sym(2);
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  const auto m = spectral_decompose(sym, sym.from_matrix(x));
  REQUIRE(m.size() == 2);
  Eigen::Matrix2d plus, minus;
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  CHECK(m.pairs[0].eigenvalue == Approx(1.0));
  CHECK(sym.to_matrix(m.pairs[0].atom).isApprox(plus, 1e-12));
  CHECK(m.pairs[1].eigenvalue == Approx(-1.0));
  CHECK(sym.to_matrix(m.pairs[1].atom).isApprox(minus, 1e-12));
}

TEST_CASE("atoms from parameters", "[models]") {
  const HermMatrices herm(2);
  const Element e = herm.atom_from_param(AtomParam::complex(Eigen::Vector2cd(1, 0)), {});
  CHECK(herm.to_matrix(e).isApprox(Eigen::Matrix2cd(Eigen::Vector2cd(1, 0).asDiagonal()), 1e-15));

  const LpQubit disk(2, 2.0);
  CHECK(disk.atom_from_param(AtomParam::real(Eigen::Vector2d(1, 0)), {}).coords == Eigen::Vector3d(0.5, 0.5, 0));

  // p = 3, w = 2^(-1/3) (1, 1): f_w = 2^(-2/3) (1, 1) and f_w . w = 1.
  const LpQubit l3(2, 3.0);
  const Eigen::Vector2d w = std::pow(2.0, -1.0 / 3.0) * Eigen::Vector2d(1, 1);
  const Element ew = l3.atom_from_param(AtomParam::real(w), {});
  const Eigen::Vector2d f = 2.0 * ew.coords.tail(2);
  CHECK(ew.coords[0] == 0.5);
  CHECK((f - std::pow(2.0, -2.0 / 3.0) * Eigen::Vector2d(1, 1)).norm() <= 1e-14);
  CHECK((f - oracle::supporting_functional(w, 3.0)).norm() <= 1e-14);
  CHECK(f.dot(w) == Approx(1.0).margin(1e-14));
  CHECK(oracle::lp_norm(f, 1.5) == Approx(1.0).margin(1e-14));

  CHECK_THROWS_AS(l3.atom_from_param(AtomParam::real(Eigen::Vector2d(1, 1)), {}), InvalidArgument);
  CHECK_THROWS_AS(herm.atom_from_param(AtomParam::complex(Eigen::Vector2cd(1, 1)), {}), InvalidArgument);
  CHECK_THROWS_AS(SymMatrices(2).atom_from_param(AtomParam::complex(Eigen::Vector2cd(std::complex<double>(0, 1), 0.0)), {}),
                  InvalidArgument);
  CHECK_THROWS_AS(Classical(3).atom_from_param(AtomParam::real(Eigen::Vector3d(0.5, 0.5, 0)), {}), InvalidArgument);
  CHECK(Classical(3).atom_from_param(AtomParam::real(Eigen::Vector3d(0, 0, 1)), {}).coords == Eigen::Vector3d(0, 0, 1));
}

TEST_CASE("l^p duality map against a direct formula", "[models]") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const LpQubit m(3, p);
    for (int t = 0; t < 20; ++t) {
      Rng rng = testutil::rng_for("duality", t);
      const Eigen::VectorXd w = m.random_boundary_point(rng);
      INFO("p=" << p);
      CHECK(oracle::lp_norm(w, p) == Approx(1.0).margin(1e-12));
      CHECK((m.duality_map(w) - oracle::supporting_functional(w, p)).norm() <= 1e-12);
      CHECK((m.inverse_duality_map(m.duality_map(w)) - w).norm() <= 1e-12);
      // The atom is 1 at w and 0 at -w.
      const Element e = m.atom_at(w);
      CHECK(e.coords[0] + e.coords.tail(3).dot(w) == Approx(1.0).margin(1e-12));
      CHECK(e.coords[0] - e.coords.tail(3).dot(w) == Approx(0.0).margin(1e-12));
    }
  }
}

TEST_CASE("l^p qubit parameter range", "[models]") {
  CHECK_THROWS_AS(LpQubit(2, 1.0), InvalidArgument);
  CHECK_THROWS_AS(LpQubit(2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(LpQubit(2, std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(LpQubit(0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(LpQubit(2, 3.0).native_inner(Element{1, 0, 0}, Element{1, 0, 0}), Unsupported);
}

TEST_CASE("random elements honour their shape", "[models]") {
  const Classical c3(3);
  const Element pos = random_element(c3, 1, Shape::positive);
  CHECK(pos.coords.minCoeff() >= 0.0);

  const SymMatrices s3(3);
  const Tolerance tol;
  for (int t = 0; t < 20; ++t) {
    Rng rng = testutil::rng_for("logic_shape", t);
    const auto sf = spectral_decompose(s3, random_element(s3, rng, Shape::logic));
    for (const auto& pr : sf.pairs) {
      CHECK(std::min(std::abs(pr.eigenvalue), std::abs(pr.eigenvalue - 1.0)) <= tol.check_tol);
    }
    const auto ui = spectral_decompose(s3, random_element(s3, rng, Shape::unit_interval));
    CHECK(ui.min_eigenvalue() >= -tol.cone_slack);
    CHECK(ui.max_eigenvalue() <= 1.0 + tol.cone_slack);
  }

  for (const auto& spec : testutil::sweep_specs()) {
    const Model m = Model::parse(spec);
    for (Shape sh : {Shape::any, Shape::positive, Shape::unit_interval, Shape::logic}) {
      INFO(spec << " " << shape_name(sh));
      CHECK(random_element(m, 99, sh).coords == random_element(m, 99, sh).coords);
    }
  }
}

TEST_CASE("functional calculus", "[models]") {
  const auto sq = [](double s) { return s * s; };
  CHECK(max_abs_diff(func_calculus(Classical(2), Element{2, -1}, sq), Element{4, 1}) == 0.0);
  CHECK(max_abs_diff(func_calculus(SpinFactor(2), Element{1, 1, 0}, sq), Element{2, 2, 0}) <= 1e-15);

  for (const auto& spec : testutil::sweep_specs()) {
    const Model m = Model::parse(spec);
    INFO(spec);
    Rng rng = testutil::rng_for("fc." + spec);
    const Element a = m.random_coords(rng);
    CHECK(order_norm(m, func_calculus(m, a, [](double s) { return s; }) - a) <= 1e-9 * (1.0 + order_norm(m, a)));
  }
  CHECK_THROWS_AS(func_calculus(Classical(2), Element{0, 1}, [](double s) { return 1.0 / s; }), InvalidArgument);
}

TEST_CASE("polarized product", "[models]") {
  CHECK(max_abs_diff(jordan_product_polarized(Classical(2), Element{1, 2}, Element{3, 4}), Element{3, 8}) <= 1e-12);

  const HermMatrices herm(2);
  for (int t = 0; t < 20; ++t) {
    Rng rng = testutil::rng_for("jordan.herm", t);
    const Element a = herm.random_coords(rng);
    const Element b = herm.random_coords(rng);
    const Eigen::Matrix2cd direct = oracle::jordan_product(herm.to_matrix(a), herm.to_matrix(b));
    CHECK((herm.to_matrix(jordan_product_polarized(herm, a, b)) - direct).cwiseAbs().maxCoeff() <= 1e-9);
  }
  for (const auto& spec : testutil::sweep_specs()) {
    const Model m = Model::parse(spec);
    INFO(spec);
    Rng rng = testutil::rng_for("jordan.unit." + spec);
    const Element a = m.random_coords(rng);
    CHECK(order_norm(m, jordan_product_polarized(m, a, m.order_unit()) - a) <= 1e-9 * (1.0 + order_norm(m, a)));
  }
}

TEST_CASE("linearity defect of the polarized product", "[models]") {
  CHECK(linearity_defect(HermMatrices(3), 42, 100) <= 1e-8);
  CHECK(linearity_defect(Classical(4), 42, 100) <= 1e-8);
  CHECK(linearity_defect(SpinFactor(5), 42, 100) <= 1e-8);
  CHECK(linearity_defect(SymMatrices(4), 42, 100) <= 1e-8);
  CHECK(linearity_defect(LpQubit(3, 2.0), 42, 100) <= 1e-8);

  const double lp4 = linearity_defect(LpQubit(2, 4.0), 42, 100);
  CHECK(lp4 > 1e-3);
  // Regression baseline.
  CHECK(lp4 == Approx(1.267041882053743).epsilon(1e-9));
}

TEST_CASE("spectral forms reconstruct and resolve the unit", "[models][property]") {
  const Tolerance tol;
  for (const auto& spec : testutil::sweep_specs()) {
    const Model m = Model::parse(spec);
    const auto& d = m.descriptor();
    INFO(spec);
    for (int t = 0; t < 200; ++t) {
      Rng rng = testutil::rng_for("recon." + spec, t);
      const Element a = m.random_coords(rng);
      const auto sf = spectral_decompose(m, a);
      CHECK(sf.size() <= d.info_capacity);
      CHECK(order_norm(m, a - sf.reconstruct(d.ambient_dim)) <= 1e-9 * std::max(1.0, sf.max_abs_eigenvalue()));
      CHECK(order_norm(m, sf.frame_sum(d.ambient_dim) - m.order_unit()) <= 1e-9);
      for (std::size_t i = 0; i < sf.size(); ++i) {
        for (std::size_t j = 0; j < sf.size(); ++j) {
          if (i != j) CHECK(std::abs(m.state_value(sf.pairs[i].atom, sf.pairs[j].atom)) <= 1e-9);
        }
      }
      for (std::size_t k = 1; k < sf.size(); ++k) CHECK(sf.pairs[k - 1].eigenvalue >= sf.pairs[k].eigenvalue);
      CHECK(order_norm(m, a) == sf.max_abs_eigenvalue());
      CHECK(cone_contains(m, a) == (sf.min_eigenvalue() >= -tol.cone_slack));
    }
  }
}

TEST_CASE("matrix spectra agree with a reference eigensolver", "[models]") {
  const SymMatrices sym(5);
  const HermMatrices herm(4);
  for (int t = 0; t < 20; ++t) {
    Rng rng = testutil::rng_for("eig", t);
    const Element a = sym.random_coords(rng);
    const Eigen::VectorXd ref = oracle::eigenvalues(Eigen::MatrixXd(sym.to_matrix(a)));
    auto got = eigs(spectral_decompose(sym, a));
    std::reverse(got.begin(), got.end());
    for (Eigen::Index k = 0; k < ref.size(); ++k) CHECK(got[static_cast<std::size_t>(k)] == Approx(ref[k]).margin(1e-10));

    const Element h = herm.random_coords(rng);
    const Eigen::VectorXd href = oracle::eigenvalues(Eigen::MatrixXcd(herm.to_matrix(h)));
    auto hgot = eigs(spectral_decompose(herm, h));
    std::reverse(hgot.begin(), hgot.end());
    for (Eigen::Index k = 0; k < href.size(); ++k) CHECK(hgot[static_cast<std::size_t>(k)] == Approx(href[k]).margin(1e-10));
  }
}

TEST_CASE("degenerate eigenspaces resolve independently of the input basis", "[models]") {
  const SymMatrices sym(3);
  Rng rng = testutil::rng_for("degenerate");
  const Eigen::Matrix3d u = sym.random_unitary(rng);
  const Eigen::Matrix3d a = u * Eigen::Vector3d(2, 2, -1).asDiagonal() * u.transpose();
  // The same matrix built from a rotated basis of the 2-eigenspace.
  const double th = 0.7;
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  rot.topLeftCorner<2, 2>() << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Eigen::Matrix3d u2 = u * rot;
  const Eigen::Matrix3d a2 = u2 * Eigen::Vector3d(2, 2, -1).asDiagonal() * u2.transpose();

  const auto s1 = spectral_decompose(sym, sym.from_matrix(a));
  const auto s1again = spectral_decompose(sym, sym.from_matrix(a));
  const auto s2 = spectral_decompose(sym, sym.from_matrix(a2));
  REQUIRE(s1.size() == 3);
  REQUIRE(s2.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(s1.pairs[k].atom.coords == s1again.pairs[k].atom.coords);
    CHECK(max_abs_diff(s1.pairs[k].atom, s2.pairs[k].atom) <= 1e-9);
  }
  // The two top atoms together are the projector onto the eigenspace.
  const Eigen::Matrix3d eig_proj = oracle::span_projector(Eigen::MatrixXd(u.leftCols(2)));
  CHECK((sym.to_matrix(s1.pairs[0].atom + s1.pairs[1].atom) - eig_proj).cwiseAbs().maxCoeff() <= 1e-9);

  // Identity: every eigenvalue 1, full frame.
  const HermMatrices herm(3);
  const auto id = spectral_decompose(herm, herm.order_unit());
  REQUIRE(id.size() == 3);
  for (const auto& pr : id.pairs) CHECK(pr.eigenvalue == Approx(1.0));
}

TEST_CASE("the Euclidean l^p qubit coincides with the spin factor", "[models][property]") {
  const LpQubit disk(3, 2.0);
  const SpinFactor spin(3);
  for (int t = 0; t < 100; ++t) {
    Rng rng = testutil::rng_for("disk_spin", t);
    const Element a = spin.random_coords(rng);
    const auto sl = spectral_decompose(disk, a);
    const auto ss = spectral_decompose(spin, a);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(sl.pairs[k].eigenvalue == Approx(ss.pairs[k].eigenvalue).margin(1e-12));
      CHECK(max_abs_diff(sl.pairs[k].atom, ss.pairs[k].atom) <= 1e-12);
    }
    const auto [e1, e2] = random_atom_pair(spin, rng);
    CHECK(disk.state_value(e1, e2) == Approx(spin.state_value(e1, e2)).margin(1e-9));
    CHECK(disk.native_inner(a, e1) == Approx(spin.native_inner(a, e1)).margin(1e-12));
  }
}

TEST_CASE("model spec parsing", "[models]") {
  CHECK(Model::parse("classical:4").descriptor().kind == BackendKind::classical);
  CHECK(Model::parse("spin:3").descriptor().ambient_dim == 4);
  CHECK(Model::parse("lpq:2:1.5").as<LpQubit>()->q() == Approx(3.0));
  CHECK(Model::parse("polytope:3").descriptor().info_capacity == 4);
  for (const char* bad : {"", "classical", "classical:0", "classical:-1", "classical:x", "spin:2:3", "lpq:2",
                          "lpq:2:abc", "lpq:2:1", "lpq:2:inf", "quaternion:2", "herm:2.5"}) {
    INFO(bad);
    CHECK_THROWS_AS(Model::parse(bad), InvalidArgument);
  }
}
