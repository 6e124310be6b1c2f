#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace semiloc {

/// Absolute deviations, their ranks and the signs of a sample about `theta`.
///
/// `sorted_d` carries the order statistics of the deviations; `ranks` (1-based)
/// and `signs` together form the rank/sign statistic. Deviations within
/// 4 eps * max(|theta|, |x_i|) of each other count as ties; they share one
/// value in `d` and are ranked by original index. An observation equal to
/// `theta` has sign 0.
struct RankSignDecomposition {
  double theta = 0.0;
  std::vector<double> d;
  std::vector<double> sorted_d;
  std::vector<std::size_t> ranks;
  std::vector<int> signs;

  std::size_t size() const noexcept { return d.size(); }
  /// theta + d_(r_i) * u_i.
  double reconstruct(std::size_t i) const { return theta + sorted_d[ranks[i] - 1] * signs[i]; }
};

RankSignDecomposition decompose(std::span<const double> x, double theta);

/// Ranks and signs only, written into caller-owned buffers. Used by the hot
/// paths that do not need the deviations themselves.
void ranks_and_signs(std::span<const double> x, double theta, std::vector<std::size_t>& order,
                     std::vector<double>& deviations, std::span<std::size_t> ranks,
                     std::span<int> signs);

}  // namespace semiloc
