// Test-only oracles and helpers. Nothing here calls into the search code
// under test.
#ifndef RAYS_TESTS_SUPPORT_HPP
#define RAYS_TESTS_SUPPORT_HPP

#include "rays/fixtures.hpp"
#include "rays/oracle.hpp"
#include "rays/direction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace rays::testing {

/// Exact first crossing of the clipped ray x + s*d (s = per-coordinate step)
/// with {w . p >= t}, as an L2 radius s*sqrt(dim). Each clipped coordinate is
/// linear in s up to its kink, so w . p(s) is piecewise linear and each
/// piece is solved in closed form.
inline double analytic_linear_radius(const Vector<double>& w, double t, const Vector<double>& x,
                                     const Vector<double>& signs) {
  const Eigen::Index n = x.size();
  std::vector<double> kinks{0.0, 1.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    kinks.push_back(signs[i] > 0 ? 1.0 - x[i] : x[i]);
  }
  std::sort(kinks.begin(), kinks.end());
  auto value = [&](double s) {
    return w.dot((x + s * signs).cwiseMax(0.0).cwiseMin(1.0)) - t;
  };
  const double scale = std::sqrt(static_cast<double>(n));
  if (value(0.0) >= 0) return 0.0;
  for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
    const double a = kinks[k];
    const double b = kinks[k + 1];
    if (b <= a) continue;
    const double fa = value(a);
    const double fb = value(b);
    if (fb >= 0) {
      // Linear on [a, b]: root of fa + (fb - fa) (s - a) / (b - a).
      const double s = a + (0.0 - fa) * (b - a) / (fb - fa);
      return std::clamp(s, a, b) * scale;
    }
  }
  return std::numeric_limits<double>::infinity();
}

/// Number of times the clipped ray x + s*d, s in [0, 1], switches between
/// w . p < t and w . p >= t. Pieces between kinks are linear, so checking the
/// sign at every kink counts switches exactly.
inline int linear_crossings(const Vector<double>& w, double t, const Vector<double>& x, const Vector<double>& signs) {
  std::vector<double> kinks{0.0, 1.0};
  for (Eigen::Index i = 0; i < x.size(); ++i) kinks.push_back(signs[i] > 0 ? 1.0 - x[i] : x[i]);
  std::sort(kinks.begin(), kinks.end());
  int switches = 0;
  bool prev = w.dot(x.cwiseMax(0.0).cwiseMin(1.0)) >= t;
  for (double s : kinks) {
    const bool cur = w.dot((x + s * signs).cwiseMax(0.0).cwiseMin(1.0)) >= t;
    switches += cur != prev ? 1 : 0;
    prev = cur;
  }
  return switches;
}

/// Defers to a real oracle and records every point it answered.
template <typename S>
class SpyOracle {
 public:
  using Scalar = S;

  explicit SpyOracle(HardLabelOracle<Scalar> inner) : inner_(std::move(inner)) {}

  template <typename Derived>
  Label predict(const Eigen::MatrixBase<Derived>& p) {
    const Label y = inner_.predict(p);
    calls_.push_back(p);
    return y;
  }
  std::int64_t query_count() const { return inner_.query_count(); }
  std::optional<std::int64_t> budget() const { return inner_.budget(); }
  Eigen::Index dim() const { return inner_.dim(); }
  void restrict_budget(std::optional<std::int64_t> b) { inner_.restrict_budget(b); }

  const std::vector<Vector<Scalar>>& calls() const { return calls_; }

 private:
  HardLabelOracle<Scalar> inner_;
  std::vector<Vector<Scalar>> calls_;
};

inline Vector<double> random_signs(Eigen::Index dim, std::mt19937_64& rng) {
  Vector<double> s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s[i] = (rng() & 1u) ? 1.0 : -1.0;
  return s;
}

inline Vector<double> uniform_point(Eigen::Index dim, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector<double> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

/// Queries a non-skipped radius search must spend: the fast check plus
/// ceil(log2(range / tol)) bisection steps.
inline std::int64_t expected_search_queries(double range, double tol) {
  return 1 + std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(std::log2(range / tol))));
}

}  // namespace rays::testing

#endif  // RAYS_TESTS_SUPPORT_HPP
