#include "fhkin/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace fhkin {

std::vector<double> filter_sigma(const FilterSpec& spec, int M, double dt) {
  if (M < 1) throw std::invalid_argument("filter_sigma: M < 1");
  if (dt <= 0.0) throw std::invalid_argument("filter_sigma: dt <= 0");
  if (spec.alpha < 0.0 || spec.p <= 0.0)
    throw std::invalid_argument("filter_sigma: alpha must be >= 0 and p > 0");
  if (spec.threshold < 0.0 || spec.threshold > 1.0)
    throw std::invalid_argument("filter_sigma: threshold outside [0, 1]");
  if (spec.protected_band < 0 || spec.protected_band > M)
    throw std::invalid_argument("filter_sigma: protected band outside [0, M]");
  if (spec.variant == FilterVariant::timestep_scaled && spec.dt_ref <= 0.0)
    throw std::invalid_argument("filter_sigma: timestep variant needs a positive dt_ref");

  std::vector<double> sigma(static_cast<size_t>(M) + 1, 1.0);
  for (int i = 0; i <= M; ++i) {
    double x = static_cast<double>(i) / M;
    double s = 1.0;
    switch (spec.variant) {
      case FilterVariant::none:
        break;
      case FilterVariant::exponential:
        s = std::exp(-spec.alpha * std::pow(x, spec.p));
        break;
      case FilterVariant::houli_threshold:
        s = (x <= spec.threshold) ? 1.0 : std::exp(-spec.alpha * std::pow(x, spec.p));
        break;
      case FilterVariant::cutoff:
        s = (x <= spec.threshold) ? 1.0 : 0.0;
        break;
      case FilterVariant::timestep_scaled: {
        if (x <= spec.threshold) {
          s = 1.0;
        } else {
          double xp = std::pow(x, spec.p);
          double g = std::pow(dt / spec.dt_ref, 1.0 - xp);
          s = std::exp(-spec.alpha * xp * g);
        }
        break;
      }
    }
    if (i <= spec.protected_band) s = 1.0;
    sigma[static_cast<size_t>(i)] = s;
  }
  return sigma;
}

FilterVariant parse_filter_variant(const std::string& name) {
  if (name == "none") return FilterVariant::none;
  if (name == "hou-li") return FilterVariant::exponential;
  if (name == "threshold") return FilterVariant::houli_threshold;
  if (name == "cutoff") return FilterVariant::cutoff;
  if (name == "timestep") return FilterVariant::timestep_scaled;
  throw std::invalid_argument("unknown filter variant: " + name);
}

std::string filter_variant_name(FilterVariant v) {
  switch (v) {
    case FilterVariant::none: return "none";
    case FilterVariant::exponential: return "hou-li";
    case FilterVariant::houli_threshold: return "threshold";
    case FilterVariant::cutoff: return "cutoff";
    case FilterVariant::timestep_scaled: return "timestep";
  }
  return "none";
}

}
