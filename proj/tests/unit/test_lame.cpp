#include <doctest.h>

#include <cmath>

#include "lame/error.hpp"
#include "lame/lame.hpp"
#include "reference/reference.hpp"
#include "support.hpp"

using namespace lame;

TEST_SUITE("lame") {

TEST_CASE("ellipticity is enforced") {
  CHECK_NOTHROW(LameParams::make(1.0, 1.0));
  CHECK_NOTHROW(LameParams::make(-1.5, 1.0));
  try {
    LameParams::make(-3.0, 1.0);
    FAIL("accepted lambda + 2 mu < 0");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
    CHECK(std::string(e.what()).find("ellipticity") != std::string::npos);
  }
  CHECK_THROWS_AS(LameParams::make(1.0, 0.0), Error);
}

TEST_CASE("symbol eigenvalues are the two branches") {
  const LameParams p = LameParams::make(0.7, 1.3);
  const std::vector<double> xi{0.3, -1.1, 2.0};
  const double xi2 = 0.09 + 1.21 + 4.0;
  const auto ev = reference::symbol_eigenvalues(xi, p);
  CHECK(ev[0] == doctest::Approx(p.mu * xi2));
  CHECK(ev[1] == doctest::Approx(p.mu * xi2));
  CHECK(ev[2] == doctest::Approx((p.lambda + 2.0 * p.mu) * xi2));
}

TEST_CASE("branch calculus matches the dense eigen-decomposition") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p = LameParams::make(2.0, 0.5);
  SplitMix64 rng(11);
  const Field f = test::random_field(g, rng, 3);
  const double t = 0.83;
  const Field branch = cosine_propagator(f, t, p);
  const Field dense = reference::matrix_function(f, p, [t](double r) -> cplx { return std::cos(t * r); });
  CHECK(test::rel_diff(branch, dense) < 1e-10);
  const Field sq = symbol_sqrt_apply(f, p);
  const Field sq_dense = reference::matrix_function(f, p, [](double r) -> cplx { return r; });
  CHECK(test::rel_diff(sq, sq_dense) < 1e-10);
}

TEST_CASE("Helmholtz decomposition") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Field f = test::random_field(g, rng);
    const HelmholtzPair hp = leray_project(f);
    const double nf = l2_norm(f), ns = l2_norm(hp.solenoidal), np = l2_norm(hp.potential);
    CHECK(std::abs(nf * nf - ns * ns - np * np) < 1e-10 * nf * nf);
    CHECK(std::abs(inner_product(hp.solenoidal, hp.potential)) < 1e-10 * nf * nf);
    CHECK(lebesgue_norm(divergence(hp.solenoidal), kInf) < 1e-10 * f.max_abs());
    CHECK(test::max_diff(hp.solenoidal + hp.potential, f) < 1e-12 * f.max_abs());
    CHECK(test::rel_diff(leray_project(hp.potential).potential, hp.potential) < 1e-12);
  }
}

TEST_CASE("scalar multipliers commute with the projectors, diag(1,2,1) does not") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  SplitMix64 rng(9);
  const Field f = test::random_field(g, rng);
  const auto rep = commutation_check(f, [](std::span<const double>, double r) -> cplx { return std::exp(-0.1 * r); });
  CHECK(rep.scalar_commutator < 1e-10 * rep.field_norm);
  CHECK(rep.counterexample_commutator > 1e-3 * rep.field_norm);
}

TEST_CASE("two routes to the Lame operator and the square root") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const LameParams p = LameParams::make(1.5, 0.8);
  SplitMix64 rng(21);
  const Field f = test::random_field(g, rng);
  const Field a = apply_lame(f, p), b = apply_lame_decoupled(f, p);
  CHECK(test::rel_diff(a, b) < 1e-10);
  CHECK(test::rel_diff(symbol_sqrt_apply(symbol_sqrt_apply(f, p), p), a * cplx(-1.0)) < 1e-10);
  CHECK(test::rel_diff(inv_symbol_sqrt_apply(symbol_sqrt_apply(f, p), p), f) < 1e-10);
  const double h1 = sobolev_norm(f, {1.0, true, 2.0});
  const double s = l2_norm(symbol_sqrt_apply(f, p));
  CHECK(s >= p.min_speed() * h1 * (1.0 - 1e-12));
  CHECK(s <= p.max_speed() * h1 * (1.0 + 1e-12));
}

TEST_CASE("plane-wave dispersion at the two speeds") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const LameParams p = LameParams::make(1.0, 2.0);
  const Field shear = test::complex_mode(g, {1, 0, 0}, {0.0, 1.0, 0.0});
  const Field pressure = test::complex_mode(g, {0, 2, 0}, {0.0, 1.0, 0.0});
  for (double t : {0.3, 1.0, 2.7}) {
    CHECK(test::max_diff(cosine_propagator(shear, t, p), shear * cplx(std::cos(std::sqrt(2.0) * t))) < 1e-10);
    const double wp = std::sqrt(5.0) * 2.0;
    CHECK(test::max_diff(sine_propagator(pressure, t, p), pressure * cplx(std::sin(wp * t) / wp)) < 1e-10);
    CHECK(test::max_diff(exp_propagator(pressure, t, p), pressure * std::polar(1.0, wp * t)) < 1e-10);
  }
}

TEST_CASE("unitary group and decoupled propagators") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const LameParams p = LameParams::make(0.5, 1.0);
  SplitMix64 rng(4);
  const Field f = test::random_field(g, rng);
  const Field e1 = exp_propagator(f, 0.4, p);
  CHECK(std::abs(l2_norm(e1) - l2_norm(f)) < 1e-10 * l2_norm(f));
  CHECK(test::rel_diff(exp_propagator(e1, 0.7, p), exp_propagator(f, 1.1, p)) < 1e-10);
  CHECK(test::rel_diff(exp_propagator(e1, -0.4, p), f) < 1e-10);

  const HelmholtzPair hp = leray_project(f);
  const double t = 0.9;
  const Field cos_dec = scalar_cosine(hp.solenoidal, t, p.shear_speed()) + scalar_cosine(hp.potential, t, p.pressure_speed());
  const Field sin_dec = scalar_sine(hp.solenoidal, t, p.shear_speed()) + scalar_sine(hp.potential, t, p.pressure_speed());
  CHECK(test::rel_diff(cosine_propagator(f, t, p), cos_dec) < 1e-10);
  CHECK(test::rel_diff(sine_propagator(f, t, p), sin_dec) < 1e-10);
}

TEST_CASE("non-finite branch symbols are rejected") {
  const Grid g = Grid::make(2, 8, 2.0 * M_PI);
  const Field f = test::complex_mode(g, {1, 0}, {0.0, 1.0});
  try {
    apply_branch_multiplier(f, [](double r) -> cplx { return 1.0 / (r - 1.0); }, [](double) -> cplx { return 1.0; });
    FAIL("singular symbol accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultiplierSingularity);
  }
}

}
