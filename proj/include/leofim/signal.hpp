#pragma once

#include <vector>

namespace leofim {

/// Scalar signal descriptors that parameterize every information entry.
/// alpha1 is the RMS width of the baseband spectral density, alpha2 the
/// normalized first spectral moment coupling baseband and carrier.
struct SignalSpec {
  double fc = 1e9;          // carrier frequency [Hz]
  double alpha1 = 1e6;      // effective baseband bandwidth [Hz]
  double alpha2 = 0.0;      // baseband-carrier correlation, in [-1, 1]
  double snr = 1.0;         // linear SNR per (sat, antenna, slot)
  double slot_duration = 1e-3;  // T [s]
  double t2_eff = 0.0;      // energy-weighted temporal second moment [s^2];
                            // 0 means "use slot_duration^2 / 3"
  double gain_mag = 1.0;    // |beta|, constant per satellite
  double n0 = 1.0;          // noise spectral density, documentation only

  double effective_t2() const {
    return t2_eff > 0.0 ? t2_eff : slot_duration * slot_duration / 3.0;
  }
};

/// Spectral moments of a sampled density S(f) >= 0 evaluated by composite
/// trapezoid on the given grid. Returns {alpha1, alpha2}.
/// Throws std::invalid_argument on empty/zero-energy input.
struct BandwidthResult {
  double alpha1;
  double alpha2;
};
BandwidthResult bandwidth_from_psd(const std::vector<double>& freq,
                                   const std::vector<double>& density);

/// Observed carrier at the receiver: fc * (1 - nu) + eps.
double observed_frequency(const SignalSpec& spec, double nu, double eps);

/// omega = alpha1^2 + 2 f_ob alpha1 alpha2 + f_ob^2. Nonnegative for any
/// |alpha2| <= 1 since it equals (alpha1 + alpha2 f_ob)^2 + (1-alpha2^2) f_ob^2.
double omega(const SignalSpec& spec, double f_ob);

}  // namespace leofim
