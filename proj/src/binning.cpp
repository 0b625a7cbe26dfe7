#include "fitpa/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fitpa {

DegreeBinning::DegreeBinning(const BinningScheme& scheme, std::int64_t k_max) : k_max_(k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
  if (!(scheme.log_base > 1.0)) throw std::invalid_argument("log_base must exceed 1");
  lower_.push_back(0);
  std::int64_t next = 1;
  while (next <= k_max) {
    lower_.push_back(next);
    if (next <= scheme.per_degree_until) {
      ++next;
    } else {
      const auto grown = static_cast<std::int64_t>(std::ceil(static_cast<double>(next) * scheme.log_base));
      next = std::max(next + 1, grown);
    }
  }
  lookup_.resize(static_cast<std::size_t>(k_max + 1));
  for (std::size_t b = 0; b < lower_.size(); ++b) {
    for (auto k = lo(b); k <= hi(b); ++k) lookup_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(b);
  }
}

DegreeBinning::DegreeBinning(std::vector<std::int64_t> lower_edges, std::int64_t k_max)
    : lower_(std::move(lower_edges)), k_max_(k_max) {
  if (lower_.empty() || lower_[0] != 0) throw std::invalid_argument("bins must start at degree 0");
  if (k_max > 0 && (lower_.size() < 2 || lower_[1] != 1)) throw std::invalid_argument("degree 0 must be its own bin");
  for (std::size_t b = 1; b < lower_.size(); ++b) {
    if (lower_[b] <= lower_[b - 1]) throw std::invalid_argument("bin edges must be strictly ascending");
  }
  if (lower_.back() > k_max) throw std::invalid_argument("bin edge beyond k_max");
  lookup_.resize(static_cast<std::size_t>(k_max + 1));
  for (std::size_t b = 0; b < lower_.size(); ++b) {
    for (auto k = lo(b); k <= hi(b); ++k) lookup_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(b);
  }
}

std::size_t DegreeBinning::bin_of(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("negative degree");
  if (k > k_max_) return lower_.size() - 1;
  return lookup_[static_cast<std::size_t>(k)];
}

double DegreeBinning::representative(std::size_t b) const {
  if (lo(b) == 0) return 0.0;
  return std::sqrt(static_cast<double>(lo(b)) * static_cast<double>(hi(b)));
}

}  // namespace fitpa
