#include "ogd/joint_action.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ogd/errors.hpp"

namespace ogd {

JointAction::JointAction(std::vector<std::size_t> block_sizes,
                         std::vector<double> values)
    : sizes_(std::move(block_sizes)), values_(std::move(values)) {
  offsets_.reserve(sizes_.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0) {
      throw DimensionMismatch("joint action: block " + std::to_string(i) +
                              " has dimension 0");
    }
    offsets_.push_back(offsets_.back() + sizes_[i]);
  }
  if (offsets_.back() != values_.size()) {
    throw DimensionMismatch(
        "joint action: block sizes sum to " + std::to_string(offsets_.back()) +
        " but " + std::to_string(values_.size()) + " values were given");
  }
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (!vec::all_finite(block(i))) {
      throw NonFiniteValue(
          "joint action: non-finite entry in block " + std::to_string(i), i);
    }
  }
}

JointAction JointAction::zeros(std::vector<std::size_t> block_sizes) {
  const std::size_t n =
      std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
  return JointAction(std::move(block_sizes), std::vector<double>(n, 0.0));
}

std::span<const double> JointAction::block(std::size_t player) const {
  return std::span<const double>(values_).subspan(offsets_.at(player),
                                                  sizes_.at(player));
}

std::span<double> JointAction::block(std::size_t player) {
  return std::span<double>(values_).subspan(offsets_.at(player),
                                            sizes_.at(player));
}

double JointAction::squared_norm() const noexcept {
  return vec::squared_norm(values_);
}

double JointAction::norm() const noexcept { return std::sqrt(squared_norm()); }

namespace vec {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_norm(std::span<const double> a) noexcept { return dot(a, a); }

double squared_distance(std::span<const double> a,
                        std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

bool all_finite(std::span<const double> a) noexcept {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace vec
}  // namespace ogd
