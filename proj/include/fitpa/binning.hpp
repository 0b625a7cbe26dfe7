#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace fitpa {

/// How degrees are grouped: one bin per degree up to `per_degree_until`,
/// then bins whose lower edges grow geometrically by `log_base`.
/// Degree 0 always has its own bin.
struct BinningScheme {
  std::int64_t per_degree_until = 50;
  double log_base = 1.25;

  static BinningScheme per_degree() { return {std::numeric_limits<std::int64_t>::max(), 2.0}; }
  static BinningScheme logarithmic(double base) { return {0, base}; }
};

/// Partition of [0, k_max] into contiguous degree bins.
class DegreeBinning {
 public:
  DegreeBinning() = default;
  DegreeBinning(const BinningScheme& scheme, std::int64_t k_max);
  /// Lower edges, ascending, starting at 0; the last bin ends at `k_max`.
  DegreeBinning(std::vector<std::int64_t> lower_edges, std::int64_t k_max);

  std::size_t size() const noexcept { return lower_.size(); }
  std::int64_t lo(std::size_t b) const { return lower_[b]; }
  std::int64_t hi(std::size_t b) const { return b + 1 < lower_.size() ? lower_[b + 1] - 1 : k_max_; }
  std::int64_t k_max() const noexcept { return k_max_; }

  /// Degrees above k_max fall into the last bin.
  std::size_t bin_of(std::int64_t k) const;

  /// Geometric mean of the bin's degree range; 0 for the degree-0 bin.
  double representative(std::size_t b) const;

  const std::vector<std::int64_t>& lower_edges() const noexcept { return lower_; }

 private:
  std::vector<std::int64_t> lower_;
  std::int64_t k_max_ = 0;
  std::vector<std::uint32_t> lookup_;
};

}  // namespace fitpa
