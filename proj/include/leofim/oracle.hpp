#pragma once

#include <Eigen/Dense>
#include <vector>

#include "leofim/channel.hpp"
#include "leofim/geometry.hpp"
#include "leofim/transform.hpp"

namespace leofim {
namespace oracle {

/// Central-difference transformation matrix over the nine location
/// parameters, with per-parameter steps h = max(|x|, 1) * eps^(1/3).
/// Nuisance rows are exact identities and are filled as such.
Jacobian numeric_jacobian(const ReceiverState& rx, const ConstellationState& cs);

/// Dense triple product Upsilon * J_eta * Upsilon^T.
Eigen::MatrixXd congruence_fim(const Jacobian& jac, const ChannelFim& fim);

/// Schur complement onto the leading `keep` parameters:
/// J11 - J12 * J22^{-1} * J12^T. Throws std::domain_error when the trailing
/// block is numerically singular.
Eigen::MatrixXd schur(const Eigen::MatrixXd& j, int keep);

/// Schur complement keeping an arbitrary index set (complement reduced).
Eigen::MatrixXd schur_keep(const Eigen::MatrixXd& j,
                           const std::vector<int>& keep);

}  // namespace oracle
}  // namespace leofim
