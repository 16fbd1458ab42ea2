#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ogd {

// Stacked action profile x = (x_1, ..., x_N). Storage is one contiguous
// vector; block i is the slice owned by player i.
class JointAction {
 public:
  JointAction() = default;

  // Throws DimensionMismatch if the block sizes do not sum to values.size()
  // or any block is empty, NonFiniteValue if an entry is NaN/Inf.
  JointAction(std::vector<std::size_t> block_sizes, std::vector<double> values);

  static JointAction zeros(std::vector<std::size_t> block_sizes);

  std::size_t players() const noexcept { return sizes_.size(); }
  std::size_t dimension() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& block_sizes() const noexcept {
    return sizes_;
  }

  std::span<const double> block(std::size_t player) const;
  std::span<double> block(std::size_t player);

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

  double squared_norm() const noexcept;
  double norm() const noexcept;

  bool same_shape(const JointAction& other) const noexcept {
    return sizes_ == other.sizes_;
  }

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

namespace vec {

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_norm(std::span<const double> a) noexcept;
double squared_distance(std::span<const double> a,
                        std::span<const double> b) noexcept;
bool all_finite(std::span<const double> a) noexcept;

}  // namespace vec

}  // namespace ogd
