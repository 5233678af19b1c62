#pragma once

#include <cstdint>
#include <string>

#include "leofim/efim.hpp"
#include "leofim/rng.hpp"

namespace leofim {

/// Cross-checks the closed-form machinery against the independent numeric
/// ground truth on randomized scenarios:
///   - analytic transformation matrix vs central finite differences,
///   - location-parameter blocks vs the dense congruence product,
///   - offset losses vs brute-force Schur complements,
///   - effective-information inverse vs the sub-block of the full inverse.
struct ValidationSummary {
  int scenarios = 0;
  int pd_scenarios = 0;
  double max_jacobian_rel = 0.0;
  double max_block_rel = 0.0;
  double max_loss_rel = 0.0;
  double max_identity_rel = 0.0;
  int jacobian_failures = 0;
  int block_failures = 0;
  int loss_failures = 0;
  int identity_failures = 0;
  double elapsed_s = 0.0;

  bool ok() const {
    return jacobian_failures == 0 && block_failures == 0 &&
           loss_failures == 0 && identity_failures == 0;
  }
  std::string to_string() const;
};

struct ValidationTolerances {
  double jacobian_rel = 1e-5;
  double block_rel = 1e-8;
  double loss_rel = 1e-8;
  double identity_rel = 1e-6;
};

/// Draws a randomized validation scenario: receiver on the Earth surface at a
/// random location, satellites in the elevation cone, wide antenna baselines
/// and slot spacings so finite differences are well conditioned.
Scenario draw_validation_scenario(SplitMix64& rng, int max_sats, int max_slots,
                                  int max_antennas);

ValidationSummary validate_oracles(int n_scenarios, uint64_t seed,
                                   const ValidationTolerances& tol = {},
                                   int max_sats = 3, int max_slots = 3,
                                   int max_antennas = 4);

/// Relative difference of two matrices: max-norm of the difference over the
/// larger max-norm (0 when both vanish).
double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace leofim
