#include "spectralgas/configuration.hpp"

#include <fmt/format.h>

#include "spectralgas/errors.hpp"

namespace spectralgas {

ChargeConfiguration::ChargeConfiguration(std::vector<double> positions, Interval support)
    : positions_(std::move(positions)), support_(support) {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double x = positions_[i];
    if (!std::isfinite(x)) {
      throw DomainError(fmt::format("charge {} is not finite", i));
    }
    if (!support_.contains(x)) {
      throw DomainError(fmt::format("charge {} at {} lies outside the support ({}, {})", i, x,
                                    support_.lo, support_.hi));
    }
    if (i > 0 && !(positions_[i - 1] < x)) {
      if (positions_[i - 1] == x) {
        throw DegenerateInputError(fmt::format("charges {} and {} coincide at {}", i - 1, i, x));
      }
      throw DegenerateInputError(
          fmt::format("charges must be strictly increasing (index {}: {} after {})", i, x,
                      positions_[i - 1]));
    }
  }
}

double ChargeConfiguration::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    gap = std::min(gap, positions_[i] - positions_[i - 1]);
  }
  return gap;
}

}  // namespace spectralgas
