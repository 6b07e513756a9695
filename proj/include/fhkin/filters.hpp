#pragma once

#include <string>
#include <vector>

namespace fhkin {

enum class FilterVariant {
  none,
  exponential,      // sigma_i = exp(-alpha*(i/M)^p)
  houli_threshold,  // sigma_i = 1 below the threshold fraction, exponential above
  cutoff,           // sigma_i = 1 below the threshold fraction, 0 above
  timestep_scaled,  // thresholded exponential rescaled by (dt/dt_ref)^(1-(i/M)^p)
};

struct FilterSpec {
  FilterVariant variant = FilterVariant::none;
  double alpha = 36.0;
  double p = 36.0;
  double threshold = 2.0 / 3.0;  // fraction i/M at or below which sigma = 1
  double dt_ref = 0.0;           // required for timestep_scaled
  int protected_band = 0;        // indices i <= protected_band forced to sigma = 1
};

// Per-step damping multipliers sigma_i for i = 0..M. Every variant keeps
// sigma_0 = 1 and sigma non-increasing in i with values in [0, 1].
// Throws if spec parameters are invalid (negative alpha/p, threshold outside
// [0, 1], missing dt_ref for the timestep variant, protected band out of range).
std::vector<double> filter_sigma(const FilterSpec& spec, int M, double dt);

// Sentinel used for h_i = log(sigma_i)/dt when sigma_i = 0 (cutoff variant).
// Exact-propagation code treats such rows as hard zeros instead of
// exponentiating the sentinel.
inline constexpr double cutoff_h_sentinel = -1e30;

FilterVariant parse_filter_variant(const std::string& name);  // CLI spelling
std::string filter_variant_name(FilterVariant v);

}
