#ifndef RAYS_SEARCH_HPP
#define RAYS_SEARCH_HPP

#include "rays/direction.hpp"
#include "rays/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace rays {

/// When an attack stops. Query budget, the success threshold and the
/// binary-search tolerance passed alongside are the only knobs.
struct StoppingRule {
  std::optional<std::int64_t> budget;
  /// Stop right after an update that brings the L-inf distortion to <= this.
  std::optional<double> early_stop;
  /// Stop after dim consecutive single-coordinate flips without an update.
  bool sweep_convergence = false;
};

template <typename Scalar>
struct Checkpoint {
  std::int64_t queries = 0;
  Scalar r_best = infinity<Scalar>();

  bool operator==(const Checkpoint&) const = default;
};

template <typename Scalar>
struct AttackResult {
  Scalar r_best = infinity<Scalar>();
  SignDirection<Scalar> d_best;
  std::int64_t queries_used = 0;
  Label initial_label = 0;
  std::vector<Checkpoint<Scalar>> history;

  Eigen::Index dim() const { return d_best.dim(); }
  Scalar linf_distortion() const { return d_best.step(r_best); }
  bool success_at(double epsilon) const {
    return static_cast<double>(linf_distortion()) <= epsilon;
  }
  bool operator==(const AttackResult&) const = default;
};

/// One completed decision-boundary search inside an attack.
template <typename Scalar>
struct SearchEvent {
  const SignDirection<Scalar>& candidate;
  Scalar r_best_before;
  Scalar r_found;  // infinity when the fast check skipped the direction
  std::int64_t queries_before;
  std::int64_t queries_after;
};

template <typename Scalar>
using SearchObserver = std::function<void(const SearchEvent<Scalar>&)>;

/// Radius of the closest boundary along d that beats r_best, or infinity.
///
/// One fast-check query at min(r_best, |d|_2) decides whether d can improve
/// on r_best at all. If it can, bisection on [0, min(r_best, |d|_2)] keeps
/// `end` adversarial and stops once the bracket is within tol; `end` is
/// returned, so a finite result always names a queried adversarial point.
/// At |d|_2 every coordinate moves by a full unit, so the clipped point is
/// the saturated corner and larger radii would query the same point.
template <LabelOracle Oracle>
typename Oracle::Scalar dbr_search(Oracle& oracle, const Example<typename Oracle::Scalar>& x,
                                   const SignDirection<typename Oracle::Scalar>& d,
                                   typename Oracle::Scalar r_best,
                                   typename Oracle::Scalar tol) {
  using Scalar = typename Oracle::Scalar;
  if (!(tol > Scalar(0))) throw ConfigError("binary search tolerance must be positive");
  if (d.dim() != x.dim()) {
    throw DimensionMismatch("direction dim " + std::to_string(d.dim()) +
                            " does not match example dim " + std::to_string(x.dim()));
  }
  const Scalar range = std::min(r_best, d.norm());
  if (oracle.predict(d.point(x.features, range)) == x.label) return infinity<Scalar>();

  Scalar start = 0;
  Scalar end = range;
  // Track the bracket width by halving so the query count is exactly
  // ceil(log2(range / tol)) regardless of rounding in start + width.
  for (Scalar width = range; width > tol; width /= Scalar(2)) {
    const Scalar mid = start + width / Scalar(2);
    if (oracle.predict(d.point(x.features, mid)) == x.label) {
      start = mid;
    } else {
      end = mid;
    }
  }
  return end;
}

namespace detail {

template <typename Scalar>
struct Candidate {
  SignDirection<Scalar> direction;
  bool single_flip;
};

inline void check_stopping_rule(const StoppingRule& stop, std::optional<std::int64_t> oracle_budget) {
  if (stop.budget && *stop.budget < 1) throw ConfigError("query budget must be >= 1");
  if (stop.early_stop && !(*stop.early_stop > 0)) throw ConfigError("early-stop epsilon must be positive");
  if (!stop.budget && !oracle_budget && !stop.sweep_convergence) {
    throw ConfigError("attack would never stop: set a query budget or enable sweep convergence");
  }
}

// Shared attack loop: clean-prediction gate, then candidate after candidate
// through dbr_search with strict-improvement updates.
template <LabelOracle Oracle, typename NextCandidate>
AttackResult<typename Oracle::Scalar> drive(Oracle& oracle,
                                            const Example<typename Oracle::Scalar>& x,
                                            typename Oracle::Scalar tol,
                                            const StoppingRule& stop,
                                            const SearchObserver<typename Oracle::Scalar>& observer,
                                            NextCandidate&& next) {
  using Scalar = typename Oracle::Scalar;
  check_stopping_rule(stop, oracle.budget());
  if (!(tol > Scalar(0))) throw ConfigError("binary search tolerance must be positive");
  if (x.dim() != oracle.dim()) {
    throw DimensionMismatch("example dim " + std::to_string(x.dim()) + " does not match model dim " +
                            std::to_string(oracle.dim()));
  }
  oracle.restrict_budget(stop.budget);

  AttackResult<Scalar> result{infinity<Scalar>(), SignDirection<Scalar>::ones(x.dim()), 0, 0, {}};
  try {
    result.initial_label = oracle.predict(x.features);
  } catch (const BudgetExhausted&) {
    result.queries_used = oracle.query_count();
    return result;
  }
  if (result.initial_label != x.label) {
    result.r_best = 0;
    result.queries_used = oracle.query_count();
    result.history.push_back({result.queries_used, result.r_best});
    return result;
  }

  Eigen::Index quiet = 0;
  try {
    for (;;) {
      Candidate<Scalar> cand = next(std::as_const(result.d_best));
      const Scalar before = result.r_best;
      const std::int64_t q_before = oracle.query_count();
      const Scalar found = dbr_search(oracle, x, cand.direction, result.r_best, tol);
      const bool improved = found < result.r_best;
      if (improved) {
        result.r_best = found;
        result.d_best = cand.direction;
      }
      result.history.push_back({oracle.query_count(), result.r_best});
      if (observer) observer({cand.direction, before, found, q_before, oracle.query_count()});

      if (improved && stop.early_stop && result.success_at(*stop.early_stop)) break;
      if (stop.sweep_convergence) {
        quiet = (improved || !cand.single_flip) ? 0 : quiet + 1;
        if (quiet >= x.dim()) break;
      }
    }
  } catch (const BudgetExhausted&) {
    // The interrupted search is discarded; the incumbent stands.
  }
  result.queries_used = oracle.query_count();
  return result;
}

}  // namespace detail

/// Greedy single-coordinate sign flips, cycling over all coordinates.
template <LabelOracle Oracle>
AttackResult<typename Oracle::Scalar> rays_naive(
    Oracle& oracle, const Example<typename Oracle::Scalar>& x, typename Oracle::Scalar tol,
    const StoppingRule& stop, const SearchObserver<typename Oracle::Scalar>& observer = {}) {
  using Scalar = typename Oracle::Scalar;
  Eigen::Index k = 0;
  return detail::drive(oracle, x, tol, stop, observer, [&](const SignDirection<Scalar>& best) {
    SignDirection<Scalar> cand = best;
    cand.negate(k, 1);
    k = (k + 1) % best.dim();
    return detail::Candidate<Scalar>{std::move(cand), true};
  });
}

/// Block sign flips, coarse to fine: stage s flips each of min(2^s, dim)
/// contiguous blocks in turn. Once blocks are singletons every further stage
/// is a naive sweep.
template <LabelOracle Oracle>
AttackResult<typename Oracle::Scalar> rays_hierarchical(
    Oracle& oracle, const Example<typename Oracle::Scalar>& x, typename Oracle::Scalar tol,
    const StoppingRule& stop, const SearchObserver<typename Oracle::Scalar>& observer = {}) {
  using Scalar = typename Oracle::Scalar;
  int stage = 0;
  Eigen::Index k = 0;
  return detail::drive(oracle, x, tol, stop, observer, [&](const SignDirection<Scalar>& best) {
    const BlockPartition partition(best.dim(), stage);
    detail::Candidate<Scalar> cand{flip_block(best, partition, k), partition.singletons()};
    if (++k == partition.block_count()) {
      k = 0;
      if (!partition.singletons()) ++stage;
    }
    return cand;
  });
}

/// Comparison baseline: uniformly random vertex directions from a seeded
/// mt19937_64, one bit per coordinate.
template <LabelOracle Oracle>
AttackResult<typename Oracle::Scalar> random_vertex_baseline(
    Oracle& oracle, const Example<typename Oracle::Scalar>& x, typename Oracle::Scalar tol,
    const StoppingRule& stop, std::uint64_t seed,
    const SearchObserver<typename Oracle::Scalar>& observer = {}) {
  using Scalar = typename Oracle::Scalar;
  std::mt19937_64 rng(seed);
  return detail::drive(oracle, x, tol, stop, observer, [&](const SignDirection<Scalar>& best) {
    Vector<Scalar> signs(best.dim());
    std::uint64_t bits = 0;
    for (Eigen::Index i = 0; i < signs.size(); ++i) {
      if (i % 64 == 0) bits = rng();
      signs[i] = (bits & 1u) ? Scalar(1) : Scalar(-1);
      bits >>= 1;
    }
    return detail::Candidate<Scalar>{SignDirection<Scalar>::from_signs(signs), false};
  });
}

/// Reference radius by dense scan: the first grid radius in [0, |d|_2] whose
/// clipped point is adversarial, refined by bisection to resolution / 2^20.
/// Queries the model directly, bypassing any budget.
template <typename Scalar>
Scalar brute_force_radius(const DenseClassifier<Scalar>& model, const Example<Scalar>& x,
                          const SignDirection<Scalar>& d, Scalar resolution) {
  if (!(resolution > Scalar(0))) throw ConfigError("resolution must be positive");
  auto adversarial = [&](Scalar r) { return model.predict(clip_unit(d.point(x.features, r))) != x.label; };

  const Scalar limit = d.norm();
  Scalar prev = 0;
  if (adversarial(prev)) return 0;
  for (std::int64_t i = 1;; ++i) {
    const Scalar r = std::min(static_cast<Scalar>(i) * resolution, limit);
    if (adversarial(r)) {
      Scalar lo = prev;
      Scalar hi = r;
      for (int j = 0; j < 20; ++j) {
        const Scalar mid = lo + (hi - lo) / Scalar(2);
        (adversarial(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    if (r >= limit) return infinity<Scalar>();
    prev = r;
  }
}

}  // namespace rays

#endif  // RAYS_SEARCH_HPP
