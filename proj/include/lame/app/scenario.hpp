#pragma once

// Seeded data families. Every draw goes through SplitMix64 in a fixed order,
// so a (family, seed, grid) triple reproduces the same f64 fields anywhere.
//
//   gaussian   : 3 vector Gaussians, centres uniform in the ball of radius
//                support_radius/2, width support_radius/6, amplitudes in [-1,1]^n.
//   bump       : 3 vector bumps exp(1 - 1/(1 - s^2)), s = |x - c| / (support_radius/2),
//                centres and amplitudes drawn as for gaussian.
//   plane_wave : one shear and one pressure cosine mode with integer wave
//                vectors in [-2,2]^n (nonzero), unit-size amplitudes.
// f and g are drawn in that order from one stream; both are projected to
// mean zero per component.

#include <cstdint>
#include <span>
#include <string>

#include "lame/grid.hpp"
#include "lame/rng.hpp"

namespace lame::app {

struct DataSpec {
  std::string family = "gaussian";
  std::uint64_t seed = 1;
  double support_radius = 1.2;
};

struct InitialData {
  Field f;
  Field g;
};

InitialData make_data(const Grid& grid, const DataSpec& spec);

/// Known family names.
bool is_family(const std::string& name);

/// Real vector field a cos(k . x) for an integer wave vector k.
Field plane_wave(const Grid& grid, std::span<const int> k, std::span<const double> amplitude);

/// Mean-zero smooth random vector field on the whole torus: 6 Gaussians with
/// widths in [2h, L/8] and centres anywhere.
Field random_smooth_field(const Grid& grid, SplitMix64& rng);

}  // namespace lame::app
