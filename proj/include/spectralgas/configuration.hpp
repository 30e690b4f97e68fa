#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace spectralgas {

// Real interval; endpoints may be infinite. Membership tests are for the
// open interval unless stated otherwise.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  static Interval real_line() { return {}; }
};

// Ordered positions of n unit charges. Construction validates strict
// ordering and membership in the open support interval.
class ChargeConfiguration {
 public:
  ChargeConfiguration() = default;
  ChargeConfiguration(std::vector<double> positions, Interval support = {});

  std::span<const double> positions() const { return positions_; }
  const std::vector<double>& values() const { return positions_; }
  const Interval& support() const { return support_; }
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  double operator[](std::size_t i) const { return positions_[i]; }

  // Smallest neighbour spacing; +inf for fewer than two charges.
  double min_gap() const;

 private:
  std::vector<double> positions_;
  Interval support_;
};

}  // namespace spectralgas
