#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace maxinfer {

/// Number of order statistics needed to reach `level`: the smallest k in
/// [1, N] with k / N >= level. The comparison uses the same floating-point
/// expression as the definition inf{t : #{s <= t} / N >= level}, so the rule
/// agrees with a direct scan on every input.
inline std::size_t quantile_rank(std::size_t count, double level) {
  const auto n = static_cast<double>(count);
  auto k = static_cast<std::size_t>(std::ceil(level * n));
  k = std::clamp<std::size_t>(k, 1, count);
  while (k > 1 && static_cast<double>(k - 1) / n >= level) --k;
  while (k < count && static_cast<double>(k) / n < level) ++k;
  return k;
}

/// Left-continuous empirical quantile of an already sorted sample.
inline double sorted_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("empirical_quantile: level must lie in (0, 1)");
  }
  return sorted[quantile_rank(sorted.size(), level) - 1];
}

/// Smallest sample value t with (#{s <= t} / N) >= level. No interpolation.
inline double empirical_quantile(std::span<const double> samples, double level) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, level);
}

/// Monte Carlo standard error of an empirical quantile from the spread of the
/// order statistics one binomial standard deviation either side of the rank.
inline double quantile_standard_error(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw std::invalid_argument("quantile_standard_error: empty sample");
  const std::size_t count = sorted.size();
  const std::size_t k = quantile_rank(count, level) - 1;
  const auto spread = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(count) * level * (1.0 - level))));
  const std::size_t hi = std::min(count - 1, k + spread);
  const std::size_t lo = k >= spread ? k - spread : 0;
  return 0.5 * (sorted[hi] - sorted[lo]);
}

}  // namespace maxinfer
