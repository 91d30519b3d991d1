#pragma once

// Verification suites. Each one returns report rows in a fixed order; a check
// row stores the measured quantity in lhs, the reference in rhs, and passes
// when ratio stays within ceiling (or above it for floor checks).

#include <optional>
#include <string>
#include <vector>

#include "lame/estimates.hpp"
#include "lame/app/config.hpp"

namespace lame::app {

enum class Suite { All, Helmholtz, Propagators, Weights, Solver, Estimates };

std::optional<Suite> parse_suite(const std::string& name);
const char* suite_name(Suite s);

/// measured <= tol.
EstimateRecord check_at_most(std::string name, const ScenarioInfo& info, double measured, double tol);
/// measured > floor.
EstimateRecord check_above(std::string name, const ScenarioInfo& info, double measured, double floor);

std::vector<EstimateRecord> helmholtz_suite(const RunConfig& cfg);
/// Symbol identities and free propagators.
std::vector<EstimateRecord> propagator_suite(const RunConfig& cfg);
/// Elliptic regularity, the Fefferman-Phong oracle and the weight constants.
std::vector<EstimateRecord> weights_suite(const RunConfig& cfg);
/// Picard iteration and time-discretization order.
std::vector<EstimateRecord> solver_suite(const RunConfig& cfg);

/// Every estimate record for the configured families x deltas on an N-point
/// grid (no refinement or scaling rows). Rejected (q, r) pairs become
/// "rejected_pair" rows that pass.
std::vector<EstimateRecord> estimate_records(const RunConfig& cfg, int N, double data_scale = 1.0);
/// estimate_records at N plus scaling rows (3f, 3g on the N/2 grid),
/// refinement rows (N against N/2) and the endpoint admissibility row.
std::vector<EstimateRecord> estimates_suite(const RunConfig& cfg);

std::vector<EstimateRecord> run_suite(Suite suite, const RunConfig& cfg);

}  // namespace lame::app
