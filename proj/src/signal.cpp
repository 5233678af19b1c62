#include "leofim/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace leofim {

BandwidthResult bandwidth_from_psd(const std::vector<double>& freq,
                                   const std::vector<double>& density) {
  if (freq.size() != density.size() || freq.size() < 2) {
    throw std::invalid_argument("psd grid needs at least two matching samples");
  }
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (size_t i = 0; i + 1 < freq.size(); ++i) {
    const double df = freq[i + 1] - freq[i];
    if (df <= 0.0) {
      throw std::invalid_argument("psd frequency grid must be strictly increasing");
    }
    const double p0 = density[i] * density[i];
    const double p1 = density[i + 1] * density[i + 1];
    m0 += 0.5 * df * (p0 + p1);
    m1 += 0.5 * df * (freq[i] * p0 + freq[i + 1] * p1);
    m2 += 0.5 * df * (freq[i] * freq[i] * p0 + freq[i + 1] * freq[i + 1] * p1);
  }
  if (m0 <= 0.0) {
    throw std::invalid_argument("psd has zero energy");
  }
  const double alpha1 = std::sqrt(m2 / m0);
  const double alpha2 = (m2 > 0.0) ? m1 / (std::sqrt(m2) * std::sqrt(m0)) : 0.0;
  return {alpha1, alpha2};
}

double observed_frequency(const SignalSpec& spec, double nu, double eps) {
  return spec.fc * (1.0 - nu) + eps;
}

double omega(const SignalSpec& spec, double f_ob) {
  return spec.alpha1 * spec.alpha1 + 2.0 * f_ob * spec.alpha1 * spec.alpha2 +
         f_ob * f_ob;
}

}  // namespace leofim
