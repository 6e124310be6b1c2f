#include "semiloc/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace semiloc {
namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

void ranks_and_signs(std::span<const double> x, double theta, std::vector<std::size_t>& order,
                     std::vector<double>& deviations, std::span<std::size_t> ranks,
                     std::span<int> signs) {
  const std::size_t n = x.size();
  if (ranks.size() != n || signs.size() != n) {
    throw std::invalid_argument("ranks_and_signs: output spans must match the sample size");
  }
  deviations.resize(n);
  order.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = x[i] - theta;
    deviations[i] = std::abs(diff);
    signs[i] = sign_of(diff);
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return deviations[a] < deviations[b]; });

  // Deviations that differ only by the rounding of x_i and theta are ties:
  // they get a common value and are ranked by index.
  double scale = std::abs(theta);
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double tie_tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && deviations[order[end]] - deviations[order[start]] <= tie_tol) ++end;
    if (end - start > 1) {
      const double common = deviations[order[start]];
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      for (std::size_t k = start; k < end; ++k) deviations[order[k]] = common;
    }
    start = end;
  }
  for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = pos + 1;
}

RankSignDecomposition decompose(std::span<const double> x, double theta) {
  if (x.empty()) throw std::invalid_argument("decompose: sample must be non-empty");
  RankSignDecomposition out;
  out.theta = theta;
  out.ranks.resize(x.size());
  out.signs.resize(x.size());
  std::vector<std::size_t> order;
  ranks_and_signs(x, theta, order, out.d, out.ranks, out.signs);
  out.sorted_d.resize(x.size());
  for (std::size_t pos = 0; pos < x.size(); ++pos) out.sorted_d[pos] = out.d[order[pos]];
  return out;
}

}  // namespace semiloc
