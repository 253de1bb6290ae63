#pragma once

#include <cstdint>
#include <string>

#include "idyn/intset.hpp"

namespace idyn {

enum class DensityKind {
  upper_asymptotic,
  lower_asymptotic,
  upper_banach,
  lower_banach,
  upper_logarithmic,
};

enum class Side { upper, lower };

/// Finite-horizon density estimate plus the metadata needed to interpret it.
///
/// `direction` records whether the value over- or under-approximates the true
/// limit for monotone families (upper kinds over-approximate, lower kinds
/// under-approximate). window_min/window_max bound the prefix lengths or
/// window lengths the reported value was taken over.
struct DensityEstimate {
  DensityKind kind{};
  double value = 0.0;
  std::uint64_t horizon = 0;
  std::uint64_t window_min = 0;
  std::uint64_t window_max = 0;
  std::string schedule;
  bool over_approximates = true;
};

const char* kind_name(DensityKind k);

/// Upper/lower asymptotic density: extreme of |S∩[0,m)|/m over all prefix
/// lengths m in the top half of the dyadic range, [N2/2, horizon] with
/// N2 = 2^floor(log2 horizon). Early prefixes are evaluated but excluded from
/// the reported extreme; a limsup estimate carried by short prefixes says
/// nothing about the limit. Requires horizon >= 2.
DensityEstimate asymptotic(const IntSet& s, Side side);

/// Upper Banach density: the windowed statistic min over dyadic window
/// lengths w in [window_min, N2/4] of max_k |S∩[k,k+w)|/w (the limit over
/// window lengths is approached from above), floored by the asymptotic upper
/// estimate since any prefix is itself a window. Lower Banach density is
/// 1 - banach(complement, upper), clamped below the upper estimate.
/// Requires horizon >= 2.
DensityEstimate banach(const IntSet& s, Side side);

/// Upper logarithmic density: tail harmonic average
///   (sum of 1/k over S, T0 < k <= horizon-1) / (sum of 1/k, T0 < k <= horizon-1)
/// with anchor T0 = N2/4, capped by the asymptotic upper estimate (the chain
/// ld <= d holds for the limits and is enforced on the estimates).
/// Requires horizon >= 3.
DensityEstimate logarithmic_upper(const IntSet& s);

/// CSV row per the density schema: set_spec,kind,horizon,value,window_min,window_max
std::string density_csv_row(const std::string& set_spec, const DensityEstimate& e);

}  // namespace idyn
