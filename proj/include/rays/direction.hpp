#ifndef RAYS_DIRECTION_HPP
#define RAYS_DIRECTION_HPP

#include "rays/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace rays {

/// A vertex direction in {-1,+1}^dim.
template <typename Scalar>
class SignDirection {
 public:
  static SignDirection ones(Eigen::Index dim) {
    if (dim < 1) throw DimensionMismatch("sign direction needs dim >= 1");
    return SignDirection(Vector<Scalar>::Ones(dim));
  }

  template <typename Derived>
  static SignDirection from_signs(const Eigen::MatrixBase<Derived>& signs) {
    if (signs.size() < 1) throw DimensionMismatch("sign direction needs dim >= 1");
    for (Eigen::Index i = 0; i < signs.size(); ++i) {
      if (signs[i] != Scalar(1) && signs[i] != Scalar(-1)) {
        throw RangeError("sign direction entry " + std::to_string(i) + " is not +1 or -1");
      }
    }
    return SignDirection(signs.template cast<Scalar>());
  }

  Eigen::Index dim() const { return signs_.size(); }
  const Vector<Scalar>& signs() const { return signs_; }
  Scalar operator[](Eigen::Index i) const { return signs_[i]; }

  /// L2 norm; exactly sqrt(dim) since every entry squares to one.
  Scalar norm() const { return std::sqrt(static_cast<Scalar>(dim())); }

  /// Per-coordinate step taken at L2 radius r along the normalized direction.
  /// This is also the L-infinity size of the perturbation.
  Scalar step(Scalar radius) const { return radius / norm(); }

  template <typename Derived>
  Vector<Scalar> point(const Eigen::MatrixBase<Derived>& origin, Scalar radius) const {
    return origin + step(radius) * signs_;
  }

  void negate(Eigen::Index begin, Eigen::Index count) { signs_.segment(begin, count) *= Scalar(-1); }

  bool operator==(const SignDirection& other) const { return signs_ == other.signs_; }

 private:
  explicit SignDirection(Vector<Scalar> signs) : signs_(std::move(signs)) {}

  Vector<Scalar> signs_;
};

/// Contiguous split of [0, dim) into min(2^stage, dim) blocks. Block sizes
/// differ by at most one; the remainder goes one-per-block to the leading
/// blocks.
class BlockPartition {
 public:
  struct Range {
    Eigen::Index begin;
    Eigen::Index size;
  };

  BlockPartition(Eigen::Index dim, int stage) : dim_(dim), stage_(stage) {
    if (dim < 1) throw DimensionMismatch("partition needs dim >= 1");
    if (stage < 0) throw IndexError("stage must be non-negative");
    // 2^stage >= dim once stage reaches the bit width of dim.
    const bool saturated = stage >= 62 || (Eigen::Index{1} << stage) >= dim;
    blocks_ = saturated ? dim : (Eigen::Index{1} << stage);
  }

  Eigen::Index dim() const { return dim_; }
  int stage() const { return stage_; }
  Eigen::Index block_count() const { return blocks_; }
  bool singletons() const { return blocks_ == dim_; }

  Range block(Eigen::Index k) const {
    if (k < 0 || k >= blocks_) {
      throw IndexError("block index " + std::to_string(k) + " out of range [0, " +
                       std::to_string(blocks_) + ")");
    }
    const Eigen::Index base = dim_ / blocks_;
    const Eigen::Index extra = dim_ % blocks_;
    return {k * base + std::min(k, extra), base + (k < extra ? 1 : 0)};
  }

 private:
  Eigen::Index dim_;
  int stage_;
  Eigen::Index blocks_;
};

template <typename Scalar>
SignDirection<Scalar> flip_block(SignDirection<Scalar> d, const BlockPartition& partition,
                                 Eigen::Index k) {
  if (partition.dim() != d.dim()) {
    throw DimensionMismatch("partition dim " + std::to_string(partition.dim()) +
                            " does not match direction dim " + std::to_string(d.dim()));
  }
  const auto r = partition.block(k);
  d.negate(r.begin, r.size);
  return d;
}

}  // namespace rays

#endif  // RAYS_DIRECTION_HPP
