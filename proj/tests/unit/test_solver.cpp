#include <doctest.h>

#include <cmath>

#include "lame/error.hpp"
#include "lame/solver.hpp"
#include "reference/reference.hpp"
#include "support.hpp"

using namespace lame;

namespace {

/// Real field a cos(x1) with a = e2 (shear for k = e1).
Field shear_cosine(const Grid& g) {
  Field f = Field::vector(g);
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    f.at(1, flat) = std::cos(g.coord(idx[0]));
  }
  return f;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

Potential smooth_potential(const Grid& g) { return bounded_compact_potential(g, 2.0, 1.0); }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("free plane waves") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const TimeGrid time = TimeGrid::make(1.0, 8);
  const Field f = test::complex_mode(g, {1, 0, 0}, {0.0, 0.0, 1.0});
  const Field zero = Field::vector(g);
  const SolutionTrace a = free_solution(f, zero, time, LameParams::make(1.0, 2.0));
  for (int k = 0; k <= time.M; ++k)
    CHECK(test::max_diff(a.u[static_cast<std::size_t>(k)], f * cplx(std::cos(std::sqrt(2.0) * time.time(k)))) < 1e-12);

  const Field gp = test::complex_mode(g, {1, 0, 0}, {1.0, 0.0, 0.0});
  const SolutionTrace b = free_solution(zero, gp, time, LameParams::make(1.0, 1.0));
  const double c = std::sqrt(3.0);
  for (int k = 0; k <= time.M; ++k) {
    const double t = time.time(k);
    CHECK(test::max_diff(b.u[static_cast<std::size_t>(k)], gp * cplx(std::sin(c * t) / c)) < 1e-12);
    CHECK(test::max_diff(b.dtu[static_cast<std::size_t>(k)], gp * cplx(std::cos(c * t))) < 1e-12);
  }
}

TEST_CASE("free evolution conserves the elastic energy") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const LameParams p = LameParams::make(0.6, 1.4);
  SplitMix64 rng(12);
  const Field f = test::random_field(g, rng), gg = test::random_field(g, rng);
  const SolutionTrace tr = free_solution(f, gg, TimeGrid::make(1.0, 16), p);
  CHECK(test::max_diff(tr.u[0], f) < 1e-12);
  CHECK(test::max_diff(tr.dtu[0], gg) < 1e-12);
  const double e0 = elastic_energy(tr.u[0], tr.dtu[0], p);
  for (std::size_t k = 0; k < tr.u.size(); ++k)
    CHECK(std::abs(elastic_energy(tr.u[k], tr.dtu[k], p) / e0 - 1.0) < 1e-10);
}

TEST_CASE("elastic energy of a single shear mode") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const Field u = test::complex_mode(g, {1, 0, 0}, {0.0, 1.0, 0.0});
  CHECK(elastic_energy(u, Field::vector(g), LameParams::make(1.0, 2.0)) ==
        doctest::Approx(2.0 * std::pow(2.0 * M_PI, 3)).epsilon(1e-12));
  CHECK(elastic_energy(Field::vector(g), Field::vector(g), LameParams{}) == 0.0);
}

TEST_CASE("Duhamel integral against the closed form") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p = LameParams::make(1.0, 1.0);
  const Field a = shear_cosine(g);
  std::vector<double> Ms, errs;
  for (int M : {16, 32, 64}) {
    const TimeGrid time = TimeGrid::make(1.0, M);
    std::vector<Field> F(static_cast<std::size_t>(time.samples()), a);
    const auto u = duhamel_all(F, time, p);
    double err = 0.0;
    for (int k = 0; k <= M; ++k)
      err = std::max(err, test::max_diff(u[static_cast<std::size_t>(k)], a * cplx(1.0 - std::cos(time.time(k)))));
    Ms.push_back(M);
    errs.push_back(err);
    CHECK(test::max_diff(duhamel(F, time, p, M / 2), u[static_cast<std::size_t>(M / 2)]) < 1e-13);
    CHECK(duhamel(F, time, p, 0).max_abs() == 0.0);
  }
  CHECK(loglog_slope(Ms, errs) == doctest::Approx(-2.0).epsilon(0.05));
  CHECK_THROWS_AS(duhamel(std::vector<Field>(17, a), TimeGrid::make(1.0, 16), p, 17), Error);
}

TEST_CASE("streaming Duhamel agrees with the direct double sum") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p = LameParams::make(2.0, 0.7);
  const TimeGrid time = TimeGrid::make(0.8, 6);
  SplitMix64 rng(31);
  std::vector<Field> F;
  for (int k = 0; k <= time.M; ++k) F.push_back(test::random_field(g, rng, 2));
  const auto fast = duhamel_all(F, time, p);
  for (int k = 0; k <= time.M; ++k)
    CHECK(test::rel_diff(fast[static_cast<std::size_t>(k)], reference::duhamel(F, time, p, k)) < 1e-11);
}

TEST_CASE("Picard with delta = 0 is the free solution") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p{};
  SplitMix64 rng(2);
  const Field f = test::random_field(g, rng, 2), gg = test::random_field(g, rng, 2);
  const TimeGrid time = TimeGrid::make(1.0, 8);
  const auto res = picard_solve(f, gg, inverse_square_potential(g, g.h(), 1.0), PicardConfig{}, time, p);
  CHECK(res.report.iterations == 1);
  CHECK(res.report.converged);
  const SolutionTrace free = free_solution(f, gg, time, p);
  for (std::size_t k = 0; k < free.u.size(); ++k) {
    CHECK(test::max_diff(res.trace.u[k], free.u[k]) == 0.0);
    CHECK(test::max_diff(res.trace.dtu[k], free.dtu[k]) < 1e-13);
  }
}

TEST_CASE("Picard contraction for a bounded potential") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p{};
  SplitMix64 rng(6);
  const Field f = test::random_field(g, rng, 2), gg = test::random_field(g, rng, 2);
  const TimeGrid time = TimeGrid::make(1.0, 16);
  const Potential V = smooth_potential(g);
  PicardConfig cfg;
  cfg.delta = 0.05;
  cfg.tol = 1e-10;
  const auto res = picard_solve(f, gg, V, cfg, time, p);
  REQUIRE(res.report.ratios.size() >= 3);
  for (double r : res.report.ratios) CHECK(r < 1.0);
  const auto& rs = res.report.ratios;
  CHECK(rs[2] == doctest::Approx(rs[1]).epsilon(0.3));

  const auto fp = fixed_point_residual(res.trace, f, gg, V, cfg.delta, p);
  CHECK(fp.difference <= 2.0 * cfg.tol * fp.norm);

  PicardConfig zero = cfg;
  zero.initial = InitialIterate::Zero;
  const auto other = picard_solve(f, gg, V, zero, time, p);
  const double diff = [&] {
    std::vector<Field> d;
    for (std::size_t k = 0; k < res.trace.u.size(); ++k) d.push_back(res.trace.u[k] - other.trace.u[k]);
    return trace_weighted_norm(d, V.magnitude(), time);
  }();
  CHECK(diff <= 5.0 * cfg.tol * fp.norm);

  PicardConfig half = cfg;
  half.delta = 0.025;
  const auto h = picard_solve(f, gg, V, half, time, p);
  CHECK(h.report.first_correction / res.report.first_correction == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Picard failure modes") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  SplitMix64 rng(6);
  const Field f = test::random_field(g, rng, 2), gg = test::random_field(g, rng, 2);
  PicardConfig cfg;
  cfg.delta = 200.0;
  try {
    picard_solve(f, gg, smooth_potential(g), cfg, TimeGrid::make(1.0, 8), LameParams{});
    FAIL("no error for a huge coupling");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoContraction);
    REQUIRE(e.value().has_value());
    CHECK(*e.value() >= 1.0);
  }
  cfg.delta = 0.05;
  cfg.max_iter = 2;
  cfg.tol = 1e-14;
  try {
    picard_solve(f, gg, smooth_potential(g), cfg, TimeGrid::make(1.0, 8), LameParams{});
    FAIL("no error at max_iter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("time derivative of a perturbed solution") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p{};
  SplitMix64 rng(13);
  const Field f = test::random_field(g, rng, 1), gg = test::random_field(g, rng, 1);
  const Potential V = smooth_potential(g);
  std::vector<double> errs;
  for (int M : {32, 64}) {
    PicardConfig cfg;
    cfg.delta = 0.1;
    cfg.tol = 1e-12;
    const TimeGrid time = TimeGrid::make(1.0, M);
    const auto res = picard_solve(f, gg, V, cfg, time, p);
    CHECK(test::max_diff(res.trace.dtu[0], gg) < 1e-12);
    double err = 0.0;
    for (int k = 1; k < M; ++k) {
      const Field fd = (res.trace.u[static_cast<std::size_t>(k + 1)] - res.trace.u[static_cast<std::size_t>(k - 1)]) *
                       cplx(0.5 / time.dt());
      err = std::max(err, test::max_diff(fd, res.trace.dtu[static_cast<std::size_t>(k)]));
    }
    errs.push_back(err);
  }
  CHECK(errs[1] < 0.3 * errs[0]);
}

TEST_CASE("PDE residual converges at second order") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p{};
  const Field f = shear_cosine(g);
  std::vector<double> Ms, res;
  for (int M : {64, 128, 256}) {
    const SolutionTrace tr = free_solution(f, Field::vector(g), TimeGrid::make(1.0, M), p);
    Ms.push_back(M);
    res.push_back(pde_residual(tr, nullptr, 0.0, p));
  }
  // Centered difference of cos(t): relative error ~ dt^2 / 12.
  CHECK(res[2] == doctest::Approx(1.0 / (12.0 * 256.0 * 256.0)).epsilon(0.05));
  CHECK(loglog_slope(Ms, res) == doctest::Approx(-2.0).epsilon(0.1));
  const SolutionTrace zero = free_solution(Field::vector(g), Field::vector(g), TimeGrid::make(1.0, 4), p);
  CHECK(pde_residual(zero, nullptr, 0.0, p) == 0.0);
}

TEST_CASE("PDE residual of a perturbed solution") {
  const Grid g = Grid::make(3, 8, 2.0 * M_PI);
  const LameParams p{};
  SplitMix64 rng(17);
  const Field f = test::random_field(g, rng, 1), gg = test::random_field(g, rng, 1);
  const Potential V = smooth_potential(g);
  std::vector<double> res;
  for (int M : {32, 64}) {
    PicardConfig cfg;
    cfg.delta = 0.1;
    cfg.tol = 1e-12;
    const auto out = picard_solve(f, gg, V, cfg, TimeGrid::make(1.0, M), p);
    res.push_back(pde_residual(out.trace, &V, cfg.delta, p));
    // Wrong sign of the coupling leaves an O(delta) residual.
    CHECK(pde_residual(out.trace, &V, -cfg.delta, p) > 10.0 * res.back());
  }
  CHECK(res[1] < 0.35 * res[0]);
}

TEST_CASE("trace files round trip") {
  const Grid g = Grid::make(2, 8, 2.0);
  SplitMix64 rng(1);
  const SolutionTrace tr = free_solution(test::random_field(g, rng), test::random_field(g, rng), TimeGrid::make(0.5, 3), LameParams{});
  const auto path = std::filesystem::temp_directory_path() / "lame_trace_roundtrip.bin";
  write_trace(path, tr);
  const SolutionTrace back = read_trace(path);
  CHECK(back.time.M == 3);
  CHECK(back.time.T == 0.5);
  for (std::size_t k = 0; k < tr.u.size(); ++k) {
    CHECK(test::max_diff(back.u[k], tr.u[k]) == 0.0);
    CHECK(test::max_diff(back.dtu[k], tr.dtu[k]) == 0.0);
  }
  std::filesystem::remove(path);
}

}
