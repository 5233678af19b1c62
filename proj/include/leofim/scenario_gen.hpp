#pragma once

#include "leofim/efim.hpp"
#include "leofim/rng.hpp"

namespace leofim {

/// Generic-geometry defaults: satellites on an altitude shell inside an
/// elevation cone over the receiver, tangential velocities, a square antenna
/// array in the body plane. The receiver sits at the local origin with z up.
struct GeometryConfig {
  double altitude = 550e3;        // shell altitude [m]
  double max_zenith_deg = 60.0;   // cone half-angle around zenith
  double sat_speed = 7560.0;      // [m/s]
  double rx_speed = 10.0;         // [m/s]
  double array_spacing = 0.0;     // [m]; 0 means half a carrier wavelength
  Propagation propagation = Propagation::Linear;
};

/// Centered square-grid offsets in the body xy-plane.
std::vector<Vector3> square_array(int n_antennas, double spacing);

/// Grid offsets in shell order from a fixed origin: prefixes are nested, so
/// growing the count never moves an existing antenna, and perfect-square
/// counts form full squares.
std::vector<Vector3> nested_array(int n_antennas, double spacing);

/// Draws receiver and constellation states. Antennas default to the centered
/// square array; pass `offsets` to override.
Scenario draw_scenario(const GeometryConfig& geom, const SignalSpec& spec,
                       const OffsetConfig& offsets_cfg, int n_sats,
                       int n_antennas, int n_slots, double delta_t,
                       SplitMix64& rng);

/// Satellite shell position for a given zenith angle and azimuth.
Vector3 shell_position(double altitude, double zenith_rad, double azimuth_rad);

}  // namespace leofim
