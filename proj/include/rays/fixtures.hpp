#ifndef RAYS_FIXTURES_HPP
#define RAYS_FIXTURES_HPP

#include "rays/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rays {

/// Two-class linear model: class 1 iff normal . x >= threshold. The class-1
/// bias carries a 1e-12 relative nudge to make the threshold inclusive.
ClassifierModel linear_model(const Vector<double>& normal, double threshold);

/// Dense-ReLU network with widths {input, hidden..., classes} and Gaussian
/// He-scaled weights.
ClassifierModel random_mlp(std::span<const Eigen::Index> widths, std::uint64_t seed);

struct GaussianSpec {
  Eigen::Index dim = 16;
  Eigen::Index classes = 2;
  double separation = 0.3;  // L2 distance of each class mean from the box centre
  double sigma = 0.1;       // per-coordinate standard deviation
  std::uint64_t seed = 1;
};

/// Class means sit at centre + separation * u_c for seeded unit vectors u_c.
/// With two classes u_1 = -u_0, so the generating boundary is the hyperplane
/// through the box centre with unit normal u_1.
class GaussianFixture {
 public:
  explicit GaussianFixture(GaussianSpec spec);

  const GaussianSpec& spec() const { return spec_; }
  const Vector<double>& mean(Eigen::Index c) const { return means_[static_cast<std::size_t>(c)]; }

  /// Samples clipped to [0,1]; labels cycle 0,1,...,classes-1. `stream`
  /// selects an independent sample sequence for the same class geometry.
  std::vector<Example<double>> sample(std::size_t n, std::uint64_t stream) const;

  /// Two-class only: unit normal n and offset t of the generating
  /// hyperplane n . x = t, with class 1 on the positive side.
  const Vector<double>& normal() const;
  double offset() const;

  /// Two-class only: Euclidean distance from x to the generating hyperplane.
  double margin(const Vector<double>& x) const;

 private:
  GaussianSpec spec_;
  std::vector<Vector<double>> means_;
  Vector<double> normal_;
  double offset_ = 0;
};

struct TrainSpec {
  Eigen::Index hidden = 32;
  int epochs = 40;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

/// Fits a one-hidden-layer ReLU network by plain per-example SGD on softmax
/// cross-entropy. Deterministic for a fixed seed and sample order.
ClassifierModel train_mlp(std::span<const Example<double>> train, Eigen::Index classes, const TrainSpec& spec);

double accuracy(const ClassifierModel& model, std::span<const Example<double>> examples);

}  // namespace rays

#endif  // RAYS_FIXTURES_HPP
