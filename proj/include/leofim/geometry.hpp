#pragma once

#include <Eigen/Dense>
#include <vector>

#include "leofim/constants.hpp"

namespace leofim {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Receiver unknowns: centroid position, orientation angles (yaw, pitch,
/// roll), velocity, and the antenna offsets expressed in the body frame that
/// aligns with the global axes at zero orientation.
struct ReceiverState {
  Vector3 p_u = Vector3::Zero();            // centroid position [m]
  Vector3 phi_u = Vector3::Zero();          // orientation angles [rad]
  Vector3 v_u = Vector3::Zero();            // velocity [m/s]
  std::vector<Vector3> antenna_offsets;     // body-frame offsets [m], >= 1

  int n_antennas() const { return static_cast<int>(antenna_offsets.size()); }
};

/// Transmitter side: per-satellite reference position and velocity, slot
/// count and slot spacing. Tracks are straight lines by default; the arc
/// mode rotates position and velocity at constant speed about the Earth
/// center (origin), which keeps the per-slot direction vectors distinct the
/// way a real pass does.
enum class Propagation { Linear, Arc };

struct ConstellationState {
  std::vector<Vector3> sat_positions;   // reference positions, slot 1 [m]
  std::vector<Vector3> sat_velocities;  // velocities at slot 1 [m/s]
  int n_slots = 1;
  double delta_t = 1.0;                 // slot spacing [s]
  Propagation propagation = Propagation::Linear;

  int n_sats() const { return static_cast<int>(sat_positions.size()); }
};

/// Ranges, unit directions, delays and normalized radial rates for every
/// (satellite, antenna, slot) triple. Directions point satellite -> receiver.
struct GeometrySnapshot {
  int n_sats = 0;
  int n_antennas = 0;
  int n_slots = 0;

  // Indexed [b][k][u] for antenna-level, [b][k] for centroid-level.
  std::vector<std::vector<std::vector<double>>> range;       // d_buk [m]
  std::vector<std::vector<std::vector<Vector3>>> dir;        // Delta_buk
  std::vector<std::vector<std::vector<double>>> delay;       // tau_buk [s]
  std::vector<std::vector<double>> range_centroid;           // d_bUk [m]
  std::vector<std::vector<Vector3>> dir_centroid;            // Delta_bUk
  std::vector<std::vector<double>> doppler;                  // nu_bk, dimensionless
};

/// Yaw-pitch-roll rotation, Q = Rz(alpha) * Ry(psi) * Rx(phi).
Matrix3 rotation_matrix(const Vector3& phi_u);

/// Partial derivatives of the rotation matrix with respect to each angle.
std::array<Matrix3, 3> rotation_matrix_derivatives(const Vector3& phi_u);

/// Slot-k centroid position: p_U + (k-1) * dt * v_U. Slots are 1-based.
Vector3 centroid_position(const ReceiverState& rx, double delta_t, int slot);

/// Global antenna position at slot k: centroid + Q(phi) * offset.
Vector3 antenna_position(const ReceiverState& rx, double delta_t, int antenna,
                         int slot);

/// Slot-k satellite position along its track.
Vector3 satellite_position(const ConstellationState& cs, int sat, int slot);

/// Slot-k satellite velocity (constant for linear tracks, rotated for arcs).
Vector3 satellite_velocity(const ConstellationState& cs, int sat, int slot);

/// Computes every range, direction, delay and normalized radial rate.
/// The radial rate is nu = Delta^T (v_b - v_U) / c, dimensionless.
/// Throws std::domain_error on coincident satellite/antenna positions.
GeometrySnapshot snapshot(const ReceiverState& rx,
                          const ConstellationState& cs);

}  // namespace leofim
