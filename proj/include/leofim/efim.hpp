#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leofim/channel.hpp"
#include "leofim/geometry.hpp"
#include "leofim/signal.hpp"
#include "leofim/transform.hpp"

namespace leofim {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix9 = Eigen::Matrix<double, 9, 9>;

struct Scenario {
  ReceiverState rx;
  ConstellationState cs;
  SignalSpec spec;
  OffsetConfig offsets;
};

enum class Block { Position, Orientation, Velocity };
const char* block_name(Block b);

/// Raised when a nuisance offset is flagged unknown but carries zero
/// information, which makes the marginalization denominator vanish.
struct SingularNuisanceError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Positive-definiteness verdict on the symmetrized, diagonally equilibrated
/// matrix: lambda_min > 1e-9 * max(lambda_max, 1). Eigenvalues reported are
/// those of the equilibrated matrix.
struct PdResult {
  bool pd = false;
  double min_eig = 0.0;
  double max_eig = 0.0;
};
PdResult pd_check(const Eigen::MatrixXd& j);

/// Inverse through diagonal equilibration, for matrices whose row scales span
/// many orders of magnitude.
Eigen::MatrixXd stable_inverse(const Eigen::MatrixXd& j);

/// One necessary condition evaluated on the way to an EFIM, with the
/// eigenvalue extremes of the equilibrated block it tested.
struct Condition {
  std::string name;
  bool ok = false;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

struct FeasibilityTrace {
  std::vector<Condition> conditions;
  bool feasible = false;

  std::string failing_tag() const;
};

/// Location-parameter information over [p_U, Phi_U, v_U] with the nuisance
/// losses from unknown per-satellite offsets. All blocks are assembled from
/// the analytic channel-parameter derivatives.
class LocationFim {
 public:
  explicit LocationFim(const Scenario& sc);

  // Information blocks with all nuisance parameters known.
  Matrix3 fim_pp() const { return fim_.block<3, 3>(0, 0); }
  Matrix3 fim_pphi() const { return fim_.block<3, 3>(0, 3); }
  Matrix3 fim_pv() const { return fim_.block<3, 3>(0, 6); }
  Matrix3 fim_phiphi() const { return fim_.block<3, 3>(3, 3); }
  Matrix3 fim_phiv() const { return fim_.block<3, 3>(3, 6); }
  Matrix3 fim_vv() const { return fim_.block<3, 3>(6, 6); }
  const Matrix9& fim() const { return fim_; }

  // Information lost to the unknown offsets (zero when both are known).
  Matrix3 loss_pp() const { return loss_.block<3, 3>(0, 0); }
  Matrix3 loss_pphi() const { return loss_.block<3, 3>(0, 3); }
  Matrix3 loss_pv() const { return loss_.block<3, 3>(0, 6); }
  Matrix3 loss_phiphi() const { return loss_.block<3, 3>(3, 3); }
  Matrix3 loss_phiv() const { return loss_.block<3, 3>(3, 6); }
  Matrix3 loss_vv() const { return loss_.block<3, 3>(6, 6); }
  const Matrix9& loss() const { return loss_; }

  Matrix9 efim_kappa1() const { return fim_ - loss_; }

  /// Delay-only contribution of one (satellite, slot) pair to the position
  /// block, and its velocity counterpart. The velocity term is the position
  /// term scaled by ((k-1) dt)^2; the accessors expose exactly the summands
  /// used during assembly.
  Matrix3 delay_term_pp(int b, int k) const;
  Matrix3 delay_term_vv(int b, int k) const;

 private:
  Matrix9 fim_ = Matrix9::Zero();
  Matrix9 loss_ = Matrix9::Zero();
  std::vector<std::vector<Matrix3>> delay_pp_;  // [b][k-1]
  double delta_t_ = 0.0;
};

struct EfimResult {
  bool feasible = false;
  Matrix3 efim = Matrix3::Zero();
  FeasibilityTrace trace;
};

struct Efim6Result {
  bool feasible = false;
  bool first_valid = false;
  bool second_valid = false;
  Matrix3 first = Matrix3::Zero();   // EFIM of the first parameter
  Matrix3 second = Matrix3::Zero();  // EFIM of the second parameter
  Matrix6 joint = Matrix6::Zero();
  FeasibilityTrace trace;
};

/// EFIM of one location parameter when the other two are known: the diagonal
/// block of efim_kappa1.
EfimResult efim_3d(Block which, const Scenario& sc);

/// EFIM for a pair of location parameters when the third is known. Requires
/// the inner block to be positive definite; failures are reported in the
/// trace rather than thrown.
Efim6Result efim_6d(Block first, Block second, const Scenario& sc);

/// EFIM of one location parameter when all nine are unknown, via the
/// expanded two-stage reduction. Cross-validated elsewhere against the
/// direct sub-block inverse of the 9x9.
EfimResult efim_9d(Block which, const Scenario& sc);

/// Scalar bound: sqrt(trace(J^-1)) for a PD 3x3 EFIM.
double crlb_rms(const Matrix3& efim);

}  // namespace leofim
