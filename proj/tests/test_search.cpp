#include "rays/fixtures.hpp"
#include "rays/search.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rays;

namespace {

constexpr double kTol = 1e-4;
const double kDiagonalRadius = 0.6 / std::sqrt(2.0);  // (0.2,0.2) to x1+x2=1 along (1,1)/sqrt2

ClassifierModel diagonal_fixture() {
  Vector<double> w(2);
  w << 1, 1;
  return linear_model(w, 1.0);
}

Example<double> example(std::initializer_list<double> v, Label y) {
  Vector<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return {out, y};
}

SignDirection<double> signs(std::initializer_list<double> v) {
  return SignDirection<double>::from_signs(example(v, 0).features);
}

StoppingRule converge() {
  StoppingRule s;
  s.sweep_convergence = true;
  return s;
}

}  // namespace

TEST_SUITE("dbr_search") {
  TEST_CASE("finds the hyperplane along (+1,+1)") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    const double r = dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1}), infinity<double>(), kTol);
    CHECK(std::abs(r - kDiagonalRadius) <= kTol);
    CHECK(r >= kDiagonalRadius);  // `end` stays on the adversarial side
  }

  TEST_CASE("ray away from the boundary costs exactly one query") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    const double r = dbr_search(oracle, example({0.2, 0.2}, 0), signs({-1, -1}), infinity<double>(), kTol);
    CHECK(std::isinf(r));
    CHECK(oracle.query_count() == 1);
  }

  TEST_CASE("an incumbent closer than the true radius skips the direction") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    const double r = dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1}), 0.3, kTol);
    CHECK(std::isinf(r));
    CHECK(oracle.query_count() == 1);
  }

  TEST_CASE("query count is 1 + ceil(log2(range / tol))") {
    const auto model = diagonal_fixture();
    for (double r_best : {infinity<double>(), 1.0, 0.5}) {
      for (double tol : {1e-2, 1e-3, 1e-4, 0.3}) {
        HardLabelOracle oracle(model);
        const double r = dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1}), r_best, tol);
        REQUIRE(std::isfinite(r));
        const double range = std::min(r_best, std::sqrt(2.0));
        CHECK(oracle.query_count() == testing::expected_search_queries(range, tol));
      }
    }
  }

  TEST_CASE("agrees with the analytic clipped-ray radius on random linear models") {
    std::mt19937_64 rng(2024);
    int exact = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 10);
      const Vector<double> w = testing::uniform_point(dim, 0.1, 1.0, rng);
      const Vector<double> x = testing::uniform_point(dim, 0.0, 0.6, rng);
      const double t = w.dot(x) + 0.05 + 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
      const auto model = linear_model(w, t);
      const Example<double> ex{x, 0};
      const Vector<double> s = testing::random_signs(dim, rng);
      const auto d = SignDirection<double>::from_signs(s);
      HardLabelOracle oracle(model);
      const double got = dbr_search(oracle, ex, d, infinity<double>(), 1e-3);
      const double want = testing::analytic_linear_radius(w, t, x, s);
      const bool corner_adversarial = model.predict(clip_unit(d.point(x, d.norm()))) != 0;
      CHECK(std::isfinite(got) == corner_adversarial);
      if (testing::linear_crossings(w, t, x, s) <= 1) {
        ++exact;
        if (std::isinf(want)) {
          CHECK(std::isinf(got));
        } else {
          CHECK(std::abs(got - want) <= 1e-3 + 1e-9);
        }
      } else if (std::isfinite(got)) {
        // Several crossings: bisection lands on some boundary, never before the first.
        CHECK(got >= want - 1e-9);
      }
    }
    CHECK(exact > 200);
  }

  TEST_CASE("finite radii always witness an adversarial point") {
    std::mt19937_64 rng(5);
    const std::array<Eigen::Index, 3> widths{6, 12, 2};
    for (int m = 0; m < 10; ++m) {
      const auto model = random_mlp(widths, 100 + m);
      const Vector<double> x = testing::uniform_point(6, 0, 1, rng);
      const Example<double> ex{x, model.predict(x)};
      for (int k = 0; k < 10; ++k) {
        const auto d = SignDirection<double>::from_signs(testing::random_signs(6, rng));
        HardLabelOracle oracle(model);
        const double r = dbr_search(oracle, ex, d, infinity<double>(), 1e-3);
        if (std::isfinite(r)) CHECK(model.predict(clip_unit(d.point(x, r))) != ex.label);
      }
    }
  }

  TEST_CASE("argument errors") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    CHECK_THROWS_AS(dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1}), infinity<double>(), 0.0), ConfigError);
    CHECK_THROWS_AS(dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1, 1}), infinity<double>(), kTol),
                    DimensionMismatch);
  }

  TEST_CASE("budget exhaustion propagates out of the search") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model, 4);
    CHECK_THROWS_AS(dbr_search(oracle, example({0.2, 0.2}, 0), signs({1, 1}), infinity<double>(), kTol),
                    BudgetExhausted);
    CHECK(oracle.query_count() == 4);
  }
}

TEST_SUITE("attacks") {
  TEST_CASE("misclassified input stops after the clean query") {
    const auto model = diagonal_fixture();
    const auto ex = example({0.9, 0.9}, 0);
    HardLabelOracle a(model), b(model), c(model);
    const StoppingRule stop{100, std::nullopt, false};
    for (const auto& r : {rays_naive(a, ex, kTol, stop), rays_hierarchical(b, ex, kTol, stop),
                          random_vertex_baseline(c, ex, kTol, stop, 7)}) {
      CHECK(r.r_best == 0.0);
      CHECK(r.queries_used == 1);
      CHECK(r.initial_label == 1);
      CHECK(r.success_at(1e-9));
    }
  }

  TEST_CASE("naive RayS converges to (+1,+1) on the diagonal fixture") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    const auto r = rays_naive(oracle, example({0.2, 0.2}, 0), kTol, converge());
    CHECK(r.d_best == signs({1, 1}));
    CHECK(std::abs(r.r_best - kDiagonalRadius) <= kTol);
    // Every single flip of (+1,+1) has a strictly larger true radius.
    const auto ex = example({0.2, 0.2}, 0);
    CHECK(brute_force_radius(model, ex, signs({-1, 1}), 1e-3) > r.r_best + kTol);
    CHECK(brute_force_radius(model, ex, signs({1, -1}), 1e-3) > r.r_best + kTol);
  }

  TEST_CASE("hierarchical first search flips everything and checks the far corner") {
    const auto model = diagonal_fixture();
    testing::SpyOracle<double> spy{HardLabelOracle(model)};
    const auto ex = example({0.2, 0.2}, 0);
    rays_hierarchical(spy, ex, kTol, StoppingRule{2, std::nullopt, false});
    REQUIRE(spy.calls().size() == 2);
    CHECK(spy.calls()[0] == ex.features);
    CHECK(spy.calls()[1].isApprox(ex.features - Vector<double>::Ones(2)));
  }

  TEST_CASE("hierarchical matches naive on the diagonal fixture") {
    const auto model = diagonal_fixture();
    const auto ex = example({0.2, 0.2}, 0);
    HardLabelOracle a(model), b(model);
    const auto naive = rays_naive(a, ex, kTol, converge());
    const auto hier = rays_hierarchical(b, ex, kTol, converge());
    CHECK(std::abs(hier.r_best - kDiagonalRadius) <= kTol);
    CHECK(hier.d_best == naive.d_best);
    // The stage-0 all-coordinate flip costs hierarchical one extra fast check.
    CHECK(hier.queries_used == naive.queries_used + 1);
  }

  TEST_CASE("random baseline is reproducible and approaches the best vertex") {
    const auto model = diagonal_fixture();
    const auto ex = example({0.2, 0.2}, 0);
    HardLabelOracle a(model), b(model), c(model);
    const StoppingRule stop{2000, std::nullopt, false};
    const auto r1 = random_vertex_baseline(a, ex, kTol, stop, 7);
    const auto r2 = random_vertex_baseline(b, ex, kTol, stop, 7);
    CHECK(r1 == r2);
    CHECK(std::abs(r1.r_best - kDiagonalRadius) <= kTol);
    const auto r3 = random_vertex_baseline(c, ex, kTol, stop, 8);
    CHECK(r3.queries_used == 2000);
  }

  TEST_CASE("deterministic algorithms are bit-identical across runs") {
    const std::array<Eigen::Index, 3> widths{8, 10, 3};
    const auto model = random_mlp(widths, 77);
    std::mt19937_64 rng(8);
    const Vector<double> x = testing::uniform_point(8, 0, 1, rng);
    const Example<double> ex{x, model.predict(x)};
    const StoppingRule stop{500, std::nullopt, false};
    HardLabelOracle a(model), b(model), c(model), d(model);
    CHECK(rays_naive(a, ex, 1e-3, stop) == rays_naive(b, ex, 1e-3, stop));
    CHECK(rays_hierarchical(c, ex, 1e-3, stop) == rays_hierarchical(d, ex, 1e-3, stop));
  }

  TEST_CASE("budget exhaustion finalizes with the incumbent and exact query count") {
    const std::array<Eigen::Index, 3> widths{8, 10, 2};
    const auto model = random_mlp(widths, 31);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const Vector<double> x = testing::uniform_point(8, 0, 1, rng);
      const Example<double> ex{x, model.predict(x)};
      for (std::int64_t budget : {1, 2, 7, 50, 333}) {
        HardLabelOracle oracle(model);
        const auto r = rays_hierarchical(oracle, ex, 1e-3, StoppingRule{budget, std::nullopt, false});
        CHECK(r.queries_used == budget);
        CHECK(oracle.query_count() == budget);
        if (std::isfinite(r.r_best)) {
          CHECK(model.predict(clip_unit(r.d_best.point(x, r.r_best))) != ex.label);
        }
      }
    }
  }

  TEST_CASE("history is non-increasing and ends at the reported radius") {
    const std::array<Eigen::Index, 3> widths{10, 16, 2};
    const auto model = random_mlp(widths, 12);
    std::mt19937_64 rng(12);
    for (int i = 0; i < 10; ++i) {
      const Vector<double> x = testing::uniform_point(10, 0, 1, rng);
      const Example<double> ex{x, model.predict(x)};
      HardLabelOracle oracle(model);
      const auto r = rays_hierarchical(oracle, ex, 1e-3, StoppingRule{800, std::nullopt, false});
      REQUIRE_FALSE(r.history.empty());
      for (std::size_t k = 1; k < r.history.size(); ++k) {
        CHECK(r.history[k].r_best <= r.history[k - 1].r_best);
        CHECK(r.history[k].queries > r.history[k - 1].queries);
      }
      CHECK((r.history.back().r_best == r.r_best || std::isinf(r.r_best)));
    }
  }

  TEST_CASE("early stop ends right after the first success") {
    const auto model = diagonal_fixture();
    const auto ex = example({0.2, 0.2}, 0);
    HardLabelOracle oracle(model);
    // The first finite radius is 0.8*sqrt2 along (-1,+1), returned from just above.
    const auto r = rays_naive(oracle, ex, kTol, StoppingRule{10000, 0.81, false});
    CHECK(r.success_at(0.81));
    CHECK(r.history.size() == 1);
    CHECK(r.queries_used == r.history.back().queries);
  }

  TEST_CASE("an attack that could never stop is rejected") {
    const auto model = diagonal_fixture();
    HardLabelOracle oracle(model);
    CHECK_THROWS_AS(rays_naive(oracle, example({0.2, 0.2}, 0), kTol, StoppingRule{}), ConfigError);
    CHECK_THROWS_AS(rays_naive(oracle, example({0.2, 0.2}, 0), kTol, StoppingRule{0, std::nullopt, false}),
                    ConfigError);
    CHECK_THROWS_AS(rays_naive(oracle, example({0.2, 0.2, 0.2}, 0), kTol, converge()), DimensionMismatch);
    CHECK(oracle.query_count() == 0);
  }

  TEST_CASE("the stopping rule carries only budget, epsilon and the convergence switch") {
    auto [budget, early_stop, sweep] = StoppingRule{};
    CHECK_FALSE(budget.has_value());
    CHECK_FALSE(early_stop.has_value());
    CHECK_FALSE(sweep);
  }

  TEST_CASE("float instantiation runs the same search") {
    Vector<float> w(2);
    w << 1, 1;
    const auto model = linear_model(w.cast<double>(), 0.9).cast<float>();
    HardLabelOracle<float> oracle(model);
    Vector<float> x(2);
    x << 0.2f, 0.2f;
    const auto r = rays_naive(oracle, Example<float>{x, 0}, 1e-3f, converge());
    CHECK(std::abs(r.r_best - 0.25f * std::sqrt(2.0f)) <= 2e-3f);
  }
}

TEST_SUITE("brute_force_radius") {
  TEST_CASE("matches the diagonal hyperplane") {
    const auto model = diagonal_fixture();
    const auto ex = example({0.2, 0.2}, 0);
    CHECK(std::abs(brute_force_radius(model, ex, signs({1, 1}), 1e-3) - kDiagonalRadius) <= 1e-8);
    CHECK(std::isinf(brute_force_radius(model, ex, signs({-1, -1}), 1e-3)));
    CHECK(brute_force_radius(model, example({0.9, 0.9}, 0), signs({1, 1}), 1e-3) == 0.0);
    CHECK_THROWS_AS(brute_force_radius(model, ex, signs({1, 1}), 0.0), ConfigError);
  }

  TEST_CASE("matches the analytic clipped-ray radius") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 6);
      const Vector<double> w = testing::uniform_point(dim, -1.0, 1.0, rng);
      const Vector<double> x = testing::uniform_point(dim, 0.0, 1.0, rng);
      const double t = w.dot(x) + 0.1;
      const auto model = linear_model(w, t);
      const Vector<double> s = testing::random_signs(dim, rng);
      const double want = testing::analytic_linear_radius(w, t, x, s);
      const double got = brute_force_radius(model, Example<double>{x, 0}, SignDirection<double>::from_signs(s), 1e-3);
      if (std::isinf(want)) {
        CHECK(std::isinf(got));
      } else {
        CHECK(std::abs(got - want) <= 1e-3 / 1e6 + 1e-12);
      }
    }
  }
}
