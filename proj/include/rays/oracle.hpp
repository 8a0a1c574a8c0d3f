#ifndef RAYS_ORACLE_HPP
#define RAYS_ORACLE_HPP

#include "rays/model.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>

namespace rays {

/// Anything the attacks can query: top-1 label only, with a query counter
/// and a budget that can be tightened but never loosened.
template <typename O>
concept LabelOracle = requires(O& o, const O& co, const Vector<typename O::Scalar>& p,
                               std::optional<std::int64_t> budget) {
  typename O::Scalar;
  { o.predict(p) } -> std::convertible_to<Label>;
  { co.query_count() } -> std::convertible_to<std::int64_t>;
  { co.dim() } -> std::convertible_to<Eigen::Index>;
  o.restrict_budget(budget);
};

/// Query-counted hard-label view of a classifier. Points are clipped to
/// [0,1] here and nowhere else.
template <typename S>
class HardLabelOracle {
 public:
  using Scalar = S;

  explicit HardLabelOracle(const DenseClassifier<Scalar>& model,
                           std::optional<std::int64_t> budget = std::nullopt)
      : model_(&model), budget_(budget) {
    if (budget_ && *budget_ < 0) throw ConfigError("query budget must be non-negative");
  }

  template <typename Derived>
  Label predict(const Eigen::MatrixBase<Derived>& point) {
    if (point.size() != model_->input_dim()) {
      throw DimensionMismatch("point has length " + std::to_string(point.size()) +
                              ", model expects " + std::to_string(model_->input_dim()));
    }
    if (budget_ && queries_ >= *budget_) {
      throw BudgetExhausted("query budget of " + std::to_string(*budget_) + " exhausted");
    }
    ++queries_;
    return model_->predict(point.cwiseMax(Scalar(0)).cwiseMin(Scalar(1)));
  }

  std::int64_t query_count() const { return queries_; }
  std::optional<std::int64_t> budget() const { return budget_; }
  std::optional<std::int64_t> remaining() const {
    if (!budget_) return std::nullopt;
    return *budget_ - queries_;
  }
  Eigen::Index dim() const { return model_->input_dim(); }
  const DenseClassifier<Scalar>& model() const { return *model_; }

  void restrict_budget(std::optional<std::int64_t> limit) {
    if (!limit) return;
    budget_ = budget_ ? std::min(*budget_, *limit) : *limit;
  }

 private:
  const DenseClassifier<Scalar>* model_;
  std::optional<std::int64_t> budget_;
  std::int64_t queries_ = 0;
};

template <typename Scalar>
HardLabelOracle(const DenseClassifier<Scalar>&) -> HardLabelOracle<Scalar>;

template <typename Derived>
auto clip_unit(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  return p.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

}  // namespace rays

#endif  // RAYS_ORACLE_HPP
