#include <algorithm>
#include <cmath>
#include <tuple>

#include "diraclab/errors.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

Region above_imaginary(double min_im) {
  return [min_im](Complex z) { return z.imag() > min_im; };
}

namespace {

std::vector<Complex> filtered(const SpectrumSample& s, int top_k, const Region& region) {
  std::vector<Complex> out;
  for (const auto& z : s.eigenvalues) {
    if (region(z)) out.push_back(z);
  }
  std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return std::abs(a.imag()) > std::abs(b.imag());
  });
  if (top_k >= 0 && out.size() > static_cast<std::size_t>(top_k)) out.resize(top_k);
  return out;
}

}  // namespace

MatchingResult spectrum_matching_distance(const SpectrumSample& a, const SpectrumSample& b,
                                          int top_k, const Region& region) {
  const auto left = filtered(a, top_k, region);
  const auto right = filtered(b, top_k, region);
  MatchingResult result;
  if (left.empty() && right.empty()) {
    result.empty = true;
    return result;
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      pairs.emplace_back(std::abs(left[i] - right[j]), i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<bool> used_left(left.size(), false);
  std::vector<bool> used_right(right.size(), false);
  for (const auto& [d, i, j] : pairs) {
    if (used_left[i] || used_right[j]) continue;
    used_left[i] = true;
    used_right[j] = true;
    ++result.matched_pairs;
    result.distance = std::max(result.distance, d);
  }
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (!used_left[i]) result.distance = std::max(result.distance, std::abs(left[i].imag()));
  }
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (!used_right[j]) result.distance = std::max(result.distance, std::abs(right[j].imag()));
  }
  return result;
}

}  // namespace diraclab
