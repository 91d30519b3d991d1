#include <doctest.h>

#include <cmath>

#include "lame/error.hpp"
#include "lame/weights.hpp"
#include "reference/reference.hpp"
#include "support.hpp"

using namespace lame;

namespace {

RealField random_positive(const Grid& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RealField w(g);
  for (double& v : w.values) v = rng.uniform(0.2, 3.0);
  return w;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("FFT ball sums match direct summation") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const RealField phi = random_positive(g, 1);
  for (double r : {g.h(), 1.5 * g.h(), 2.0 * g.h(), 0.5 * g.L}) {
    const RealField fast = ball_sums(phi, r);
    const RealField slow = reference::ball_sums(phi, r);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(fast.values[i] - slow.values[i]));
    CHECK(err < 1e-11 * slow.max());
  }
  CHECK(ball_count(g, g.h()) == 1u);
  CHECK(ball_count(g, 1.2 * g.h()) == 7u);
  CHECK(ball_count(g, 1.5 * g.h()) == 19u);
}

TEST_CASE("ball minima match the serial scan") {
  const Grid g = Grid::make(2, 16, 1.0);
  const RealField w = random_positive(g, 2);
  const BallSampling s = BallSampling::dyadic(g, 3);
  for (double r : s.radii) CHECK(ball_minima(w, r, s.centers) == reference::ball_minima(w, r, s.centers));
}

TEST_CASE("dyadic sampling") {
  const Grid g = Grid::make(3, 64, 2.0 * M_PI);
  const BallSampling s = BallSampling::dyadic(g, 4);
  REQUIRE(s.radii.size() == 6u);
  CHECK(s.radii.back() == doctest::Approx(0.5 * g.L));
  CHECK(std::find(s.centers.begin(), s.centers.end(), g.origin()) != s.centers.end());
  CHECK(s.centers.size() == 16u * 16u * 16u);
  CHECK(BallSampling::dyadic(g, 4, 2).radii.front() == doctest::Approx(0.25 * g.L));
}

TEST_CASE("inverse-square potential") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const Potential V = inverse_square_potential(g, 0.5, 2.0);
  const RealField m = V.magnitude();
  CHECK(m.values[g.origin()] == doctest::Approx(std::sqrt(3.0) * 2.0 / 0.25));
  CHECK(m.max() == doctest::Approx(m.values[g.origin()]));
  const RealField m2 = V.scaled(2.0).magnitude();
  for (std::size_t i = 0; i < g.size(); i += 97) CHECK(m2.values[i] == doctest::Approx(2.0 * m.values[i]));
  try {
    inverse_square_potential(g, 0.0, 1.0);
    FAIL("epsilon = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRegularization);
  }
}

TEST_CASE("Fefferman-Phong norm of a constant matches the ball volume") {
  const Grid g = Grid::make(3, 32, 2.0 * M_PI);
  const double c = 0.7;
  const std::size_t nn = 9;
  std::vector<double> values(nn * g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int d = 0; d < 3; ++d) values[i * nn + static_cast<std::size_t>(4 * d)] = c;
  const Potential V(g, values, 0.0, "const");
  const BallSampling s = BallSampling::dyadic(g, 8);
  const double r = 0.5 * g.L;
  const double expected = 4.0 * M_PI * std::sqrt(3.0) / 3.0 * c * r * r;
  CHECK(fefferman_phong_norm(V, 1.0, s) == doctest::Approx(expected).epsilon(0.02));
  CHECK(fefferman_phong_norm(V.scaled(3.0), 1.0, s) == doctest::Approx(3.0 * fefferman_phong_norm(V, 1.0, s)));
  const Potential zero(g, std::vector<double>(nn * g.size(), 0.0), 0.0, "zero");
  CHECK(fefferman_phong_norm(zero, 1.25, s) == 0.0);
  try {
    fefferman_phong_norm(V, 1.6, s);
    FAIL("p > n/2 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidExponent);
  }
  CHECK_THROWS_AS(fefferman_phong_norm(V, 0.9, s), Error);
}

TEST_CASE("Fefferman-Phong norm grows under sampling refinement") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const Potential V = inverse_square_potential(g, g.h(), 1.0);
  const double coarse = fefferman_phong_norm(V, 1.25, BallSampling::dyadic(g, 4));
  const double fine = fefferman_phong_norm(V, 1.25, BallSampling::dyadic(g, 1));
  CHECK(fine >= coarse);
  const auto profile = fefferman_phong_profile(V.magnitude(), 1.25, g.origin(), BallSampling::dyadic(g).radii);
  CHECK(*std::max_element(profile.begin(), profile.end()) <= fine * (1.0 + 1e-12));
}

TEST_CASE("maximal function") {
  const Grid g = Grid::make(2, 16, 1.0);
  const BallSampling s = BallSampling::dyadic(g);
  const RealField five(g, 5.0);
  const RealField m5 = maximal_function(five, s.radii);
  for (double v : m5.values) CHECK(v == doctest::Approx(5.0));

  // Point mass: M at distance d is the largest 1/|B_r| over sampled r > d.
  RealField delta(g, 0.0);
  delta.values[g.origin()] = 1.0;
  const RealField md = maximal_function(delta, s.radii);
  std::vector<int> idx(2);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    const double dx = g.axis_distance(idx[0], 8), dy = g.axis_distance(idx[1], 8);
    const double d = std::sqrt(dx * dx + dy * dy);
    double expected = flat == g.origin() ? 1.0 : 0.0;
    for (double r : s.radii)
      if (d < r) expected = std::max(expected, 1.0 / static_cast<double>(ball_count(g, r)));
    CHECK(md.values[flat] == doctest::Approx(expected).epsilon(1e-9));
  }

  const RealField a = random_positive(g, 5);
  RealField b = a;
  for (double& v : b.values) v += 0.1;
  const RealField ma = maximal_function(a, s.radii), mb = maximal_function(b, s.radii);
  const RealField ref = reference::maximal_function(a, s.radii);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(ma.values[i] <= mb.values[i]);
    CHECK(ma.values[i] >= a.values[i]);
    CHECK(ma.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-12));
  }
  RealField neg = a;
  neg.values[0] = -1.0;
  CHECK_THROWS_AS(maximal_function(neg, s.radii), Error);
}

TEST_CASE("weight construction") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const BallSampling s = BallSampling::dyadic(g, 2);
  Potential V = inverse_square_potential(g, g.h(), 1.0);
  const RealField W = build_weight(V, 9.0 / 8.0, s.radii);
  const RealField m = V.magnitude();
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(W.values[i] >= m.values[i]);
  CHECK(std::isfinite(fefferman_phong_norm(W, 1.25, s)));
  CHECK_THROWS_AS(build_weight(V, 1.0, s.radii), Error);
  CHECK_THROWS_AS(build_weight(V, 1.25, s.radii), Error);

  const std::size_t nn = 9;
  std::vector<double> values(nn * g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) values[i * nn] = 2.0;
  const Potential C(g, values, 0.0, "const");
  const RealField Wc = build_weight(C, 1.1, s.radii);
  for (double v : Wc.values) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("Muckenhoupt constants") {
  const Grid g = Grid::make(2, 16, 1.0);
  const BallSampling s = BallSampling::dyadic(g, 1);
  CHECK(a2_constant(RealField(g, 1.0), s) == doctest::Approx(1.0));
  CHECK(a1_constant(RealField(g, 1.0), s) == doctest::Approx(1.0));
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const RealField w = random_positive(g, seed);
    const double a2 = a2_constant(w, s), a1 = a1_constant(w, s);
    CHECK(a2 >= 1.0);
    CHECK(a2 <= a1 * (1.0 + 1e-12));
    CHECK(a2 == doctest::Approx(reference::a2_constant(w, s)).epsilon(1e-10));
    CHECK(a1 == doctest::Approx(reference::a1_constant(w, s)).epsilon(1e-10));
  }
  RealField bad(g, 1.0);
  bad.values[5] = 0.0;
  CHECK_THROWS_AS(a2_constant(bad, s), Error);

  // Two-valued weight on the line: every ball holds 2m+1 alternating cells.
  const Grid line = Grid::make(1, 64, 1.0);
  RealField alt(line);
  for (std::size_t i = 0; i < line.size(); ++i) alt.values[i] = i % 2 == 0 ? 2.0 : 1.0;
  const BallSampling ls = BallSampling::dyadic(line);
  double expected = 1.0;
  for (double r : ls.radii) {
    const int cells = static_cast<int>(ball_count(line, r));
    const int m = cells / 2;
    // m+1 cells of one value, m of the other.
    const double hi = ((m + 1) * 2.0 + m * 1.0) / cells * ((m + 1) * 0.5 + m * 1.0) / cells;
    const double lo = ((m + 1) * 1.0 + m * 2.0) / cells * ((m + 1) * 1.0 + m * 0.5) / cells;
    expected = std::max({expected, hi, lo});
  }
  CHECK(a2_constant(alt, ls) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected < 9.0 / 8.0);
}

TEST_CASE("Poisson solve and the Riesz identity") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  Field phi = Field::scalar(g);
  std::vector<int> idx(3);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    phi.at(0, flat) = std::sin(g.coord(idx[0]));
  }
  const Field F = gradient(phi);
  CHECK(test::max_diff(solve_poisson_div(F), phi * cplx(-1.0)) < 1e-12);

  SplitMix64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Field R = test::random_field(g, rng);
    CHECK(test::max_diff(riesz_gradient(R), gradient(solve_poisson_div(R))) < 1e-10 * R.max_abs());
    const HelmholtzPair a = helmholtz_via_poisson(R), b = leray_project(R);
    CHECK(test::max_diff(a.solenoidal, b.solenoidal) < 1e-10 * R.max_abs());
    CHECK(test::max_diff(a.potential, b.potential) < 1e-10 * R.max_abs());
    CHECK(elliptic_regularity_ratio(R, RealField(g, 1.0), 1) <= 1.0 + 1e-10);
  }
  const Field sol = leray_project(test::random_field(g, rng)).solenoidal;
  CHECK(solve_poisson_div(sol).max_abs() < 1e-12);
  CHECK(elliptic_regularity_ratio(sol, RealField(g, 1.0), 1) < 1e-12);
  CHECK(elliptic_regularity_ratio(F, RealField(g, 1.0), -1) == doctest::Approx(1.0));
  try {
    elliptic_regularity_ratio(Field::vector(g), RealField(g, 1.0), 1);
    FAIL("zero field accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateInput);
  }
}

TEST_CASE("potential file round trip") {
  const Grid g = Grid::make(3, 8, 2.0);
  const Potential V = inverse_square_potential(g, 0.3, 1.5);
  const auto path = std::filesystem::temp_directory_path() / "lame_pot_roundtrip.bin";
  write_potential(path, V);
  const Potential W = read_potential(path);
  CHECK(W.grid() == g);
  CHECK(std::equal(V.values().begin(), V.values().end(), W.values().begin()));
  std::filesystem::remove(path);
}

}
