#include <doctest.h>

#include <cmath>

#include "lame/error.hpp"
#include "lame/grid.hpp"
#include "support.hpp"

using namespace lame;

TEST_SUITE("grid") {

TEST_CASE("grid layout and wavenumbers") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  CHECK(g.size() == 4096u);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(7) == 7);
  CHECK(g.wavenumber(8) == -8);
  CHECK(g.wavenumber(15) == -1);
  CHECK(g.coord(8) == doctest::Approx(0.0));
  std::vector<int> idx(3);
  g.unflatten(g.origin(), idx);
  CHECK(idx == std::vector<int>{8, 8, 8});
  CHECK(g.axis_distance(0, 15) == doctest::Approx(g.h()));
  CHECK_THROWS_AS(Grid::make(3, 12, 1.0), Error);
  CHECK_THROWS_AS(Grid::make(0, 16, 1.0), Error);
  CHECK_THROWS_AS(Grid::make(3, 16, -1.0), Error);
}

TEST_CASE("transform round trip and Parseval") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  SplitMix64 rng(7);
  const Field f = test::random_field(g, rng);
  const Field s = to_spectral(f);
  CHECK(s.representation() == Representation::Spectral);
  CHECK(test::max_diff(to_physical(s), f) < 1e-13);
  double spec = 0.0;
  for (cplx v : s.data()) spec += std::norm(v);
  const double l2 = l2_norm(f);
  CHECK(std::abs(l2 * l2 - spec * g.cell_volume()) < 1e-10 * l2 * l2);
  CHECK_THROWS_AS(forward_transform(s), Error);
  CHECK_THROWS_AS(inverse_transform(f), Error);
}

TEST_CASE("single-mode norms") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const Field e = test::complex_mode(g, {1, 2, 0}, {0.0, 0.0, 1.0});
  const double vol = std::pow(2.0 * M_PI, 3);
  CHECK(l2_norm(e) == doctest::Approx(std::sqrt(vol)).epsilon(1e-12));
  CHECK(lebesgue_norm(e, kInf) == doctest::Approx(1.0));
  CHECK(lebesgue_norm(e, 4.0) == doctest::Approx(std::pow(vol, 0.25)).epsilon(1e-12));
  const double k = std::sqrt(5.0);
  CHECK(sobolev_norm(e, {0.5, true, 2.0}) == doctest::Approx(std::pow(k, 0.5) * std::sqrt(vol)).epsilon(1e-12));
  CHECK(sobolev_norm(e, {-0.5, true, 2.0}) == doctest::Approx(std::pow(k, -0.5) * std::sqrt(vol)).epsilon(1e-12));
  CHECK(sobolev_norm(e, {1.0, false, 2.0}) == doctest::Approx(std::sqrt(6.0) * std::sqrt(vol)).epsilon(1e-12));
  CHECK(test::max_diff(fractional_multiplier(e, 1.5), e * cplx(std::pow(k, 1.5))) < 1e-12);
}

TEST_CASE("derivatives of a known mode") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  Field phi = Field::scalar(g);
  std::vector<int> idx(3);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    phi.at(0, flat) = std::sin(g.coord(idx[0]));
  }
  const Field grad = gradient(phi);
  double err = 0.0;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    err = std::max(err, std::abs(grad.at(0, flat) - std::cos(g.coord(idx[0]))));
    err = std::max(err, std::abs(grad.at(1, flat)) + std::abs(grad.at(2, flat)));
  }
  CHECK(err < 1e-12);
  CHECK(test::max_diff(laplacian(phi), phi * cplx(-1.0)) < 1e-12);
  CHECK(test::max_diff(divergence(grad), phi * cplx(-1.0)) < 1e-12);
}

TEST_CASE("Riesz transforms square to minus identity") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  SplitMix64 rng(3);
  const Field phi = test::random_field(g, rng).component_field(0);
  Field acc = Field::scalar(g);
  for (int j = 0; j < 3; ++j) acc += riesz_transform(riesz_transform(phi, j), j);
  CHECK(test::max_diff(acc, phi * cplx(-1.0)) < 1e-12);
}

TEST_CASE("invalid exponents and weights") {
  const Grid g = Grid::make(2, 8, 1.0);
  const Field f = Field::vector(g);
  CHECK_THROWS_AS(lebesgue_norm(f, 0.5), Error);
  try {
    lebesgue_norm(f, 0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidExponent);
  }
  RealField w(g, 1.0);
  w.values[3] = -1.0;
  try {
    weighted_l2(f, w);
    FAIL("negative weight accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidWeight);
  }
}

TEST_CASE("space-time norm with trapezoid weights") {
  const Grid g = Grid::make(2, 8, 2.0 * M_PI);
  const TimeGrid time = TimeGrid::make(1.0, 4);
  std::vector<Field> samples;
  for (int k = 0; k <= time.M; ++k) {
    Field f = Field::vector(g);
    for (auto& v : f.component(0)) v = time.time(k);
    samples.push_back(f);
  }
  // int_0^1 t^2 dt * |T^2| with the trapezoid rule: (1/4)(0/2 + 1/16 + 4/16 + 9/16 + 16/32) ...
  double trap = 0.0;
  const auto w = time.trapezoid_weights();
  for (int k = 0; k <= 4; ++k) trap += w[static_cast<std::size_t>(k)] * time.time(k) * time.time(k);
  const double expected = std::sqrt(trap * g.volume());
  CHECK(weighted_l2_spacetime(samples, RealField(g, 1.0), time) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(trap == doctest::Approx(0.34375));
}

}
