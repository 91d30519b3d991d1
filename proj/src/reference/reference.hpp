#pragma once

// Serial, direct implementations kept as test oracles for the OpenMP kernels.
// Nothing here is used by the library or the CLI.

#include <span>
#include <vector>

#include "lame/grid.hpp"
#include "lame/lame.hpp"
#include "lame/timegrid.hpp"
#include "lame/weights.hpp"

namespace lame::reference {

/// S(x) = sum_{d(x,y) < r} phi(y) by explicit double loop over the grid.
RealField ball_sums(const RealField& phi, double r);
std::vector<double> ball_minima(const RealField& phi, double r, std::span<const std::size_t> centers);
RealField maximal_function(const RealField& phi, std::span<const double> radii);
double a2_constant(const RealField& w, const BallSampling& sampling);
double a1_constant(const RealField& w, const BallSampling& sampling);

/// Trapezoid sum of sine_propagator applied sample by sample, O(M^2).
Field duhamel(std::span<const Field> F, const TimeGrid& time, const LameParams& params, int t_index);

/// phi(sqrt L(xi)) applied per mode through a dense symmetric eigensolve of
/// the symbol; phi(0) on the zero mode.
Field matrix_function(const Field& f, const LameParams& params, const BranchSymbol& phi);

/// Sorted eigenvalues of L(xi).
std::vector<double> symbol_eigenvalues(std::span<const double> xi, const LameParams& params);

}  // namespace lame::reference
