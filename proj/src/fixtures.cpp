#include "rays/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace rays {

namespace {

// Distinct, reproducible engine per (seed, stream).
std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Vector<double> gaussian_vector(Eigen::Index n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector<double> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

void require_two_class(const GaussianSpec& spec) {
  if (spec.classes != 2) throw ConfigError("hyperplane geometry is defined for two-class fixtures only");
}

}  // namespace

ClassifierModel linear_model(const Vector<double>& normal, double threshold) {
  if (normal.size() < 1) throw ShapeError("linear model needs dim >= 1");
  DenseLayer<double> layer;
  layer.weights = Matrix<double>::Zero(2, normal.size());
  layer.weights.row(1) = normal.transpose();
  layer.bias = Vector<double>::Zero(2);
  // Inclusive threshold: lift the class-1 score by a hair so points exactly
  // on the hyperplane (e.g. saturated corners) are class 1 despite ties
  // going to class 0.
  const double nudge = 1e-12 * std::max({1.0, std::abs(threshold), normal.lpNorm<1>()});
  layer.bias[1] = -threshold + nudge;
  return ClassifierModel(ModelKind::linear, {std::move(layer)});
}

ClassifierModel random_mlp(std::span<const Eigen::Index> widths, std::uint64_t seed) {
  if (widths.size() < 2) throw ShapeError("an MLP needs at least input and output widths");
  auto rng = engine(seed, 0);
  std::vector<DenseLayer<double>> layers;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    const Eigen::Index in = widths[i - 1];
    const Eigen::Index out = widths[i];
    if (in < 1 || out < 1) throw ShapeError("layer widths must be positive");
    DenseLayer<double> layer;
    layer.weights = Matrix<double>(out, in);
    const double scale = std::sqrt(2.0 / static_cast<double>(in));
    std::normal_distribution<double> normal(0.0, scale);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = normal(rng);
    }
    layer.bias = gaussian_vector(out, 0.5, rng);
    layers.push_back(std::move(layer));
  }
  return ClassifierModel(widths.size() == 2 ? ModelKind::linear : ModelKind::mlp, std::move(layers));
}

GaussianFixture::GaussianFixture(GaussianSpec spec) : spec_(spec) {
  if (spec_.dim < 1) throw ConfigError("fixture dim must be >= 1");
  if (spec_.classes < 2) throw ConfigError("fixture needs at least two classes");
  if (!(spec_.separation > 0) || !(spec_.sigma >= 0)) {
    throw ConfigError("fixture separation must be positive and sigma non-negative");
  }
  auto rng = engine(spec_.seed, 0);
  const Vector<double> centre = Vector<double>::Constant(spec_.dim, 0.5);
  std::vector<Vector<double>> dirs;
  for (Eigen::Index c = 0; c < spec_.classes; ++c) {
    if (spec_.classes == 2 && c == 1) {
      dirs.push_back(-dirs.front());
      continue;
    }
    Vector<double> u = gaussian_vector(spec_.dim, 1.0, rng);
    dirs.push_back(u / u.norm());
  }
  for (const auto& u : dirs) means_.push_back(centre + spec_.separation * u);
  if (spec_.classes == 2) {
    normal_ = dirs[1];
    offset_ = normal_.dot(centre);
  }
}

std::vector<Example<double>> GaussianFixture::sample(std::size_t n, std::uint64_t stream) const {
  auto rng = engine(spec_.seed, stream + 1);
  std::vector<Example<double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<Label>(i % static_cast<std::size_t>(spec_.classes));
    Vector<double> x = means_[static_cast<std::size_t>(label)] + gaussian_vector(spec_.dim, spec_.sigma, rng);
    out.push_back({x.cwiseMax(0.0).cwiseMin(1.0), label});
  }
  return out;
}

const Vector<double>& GaussianFixture::normal() const {
  require_two_class(spec_);
  return normal_;
}

double GaussianFixture::offset() const {
  require_two_class(spec_);
  return offset_;
}

double GaussianFixture::margin(const Vector<double>& x) const {
  require_two_class(spec_);
  return std::abs(normal_.dot(x) - offset_);
}

ClassifierModel train_mlp(std::span<const Example<double>> train, Eigen::Index classes, const TrainSpec& spec) {
  if (train.empty()) throw EmptyInput("training set is empty");
  if (classes < 2 || spec.hidden < 1 || spec.epochs < 1 || !(spec.learning_rate > 0)) {
    throw ConfigError("invalid training parameters");
  }
  const Eigen::Index dim = train.front().dim();
  const std::array<Eigen::Index, 3> widths{dim, spec.hidden, classes};
  const ClassifierModel init = random_mlp(widths, spec.seed);
  Matrix<double> w1 = init.layers()[0].weights;
  Vector<double> b1 = Vector<double>::Zero(spec.hidden);
  Matrix<double> w2 = init.layers()[1].weights;
  Vector<double> b2 = Vector<double>::Zero(classes);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = engine(spec.seed, 1);

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const auto& ex = train[idx];
      if (ex.dim() != dim) throw DimensionMismatch("training examples disagree on dim");
      if (ex.label < 0 || ex.label >= classes) throw RangeError("training label out of range");
      const Vector<double> pre = w1 * ex.features + b1;
      const Vector<double> h = pre.cwiseMax(0.0);
      const Vector<double> z = w2 * h + b2;
      Vector<double> p = (z.array() - z.maxCoeff()).exp();
      p /= p.sum();
      p[ex.label] -= 1.0;  // dL/dz for softmax cross-entropy
      const Vector<double> dh = (w2.transpose() * p).cwiseProduct((pre.array() > 0).cast<double>().matrix());
      w2.noalias() -= spec.learning_rate * p * h.transpose();
      b2 -= spec.learning_rate * p;
      w1.noalias() -= spec.learning_rate * dh * ex.features.transpose();
      b1 -= spec.learning_rate * dh;
    }
  }
  return ClassifierModel(ModelKind::mlp, {{w1, b1}, {w2, b2}});
}

double accuracy(const ClassifierModel& model, std::span<const Example<double>> examples) {
  if (examples.empty()) throw EmptyInput("accuracy needs at least one example");
  std::size_t hit = 0;
  for (const auto& ex : examples) hit += model.predict(ex.features) == ex.label ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(examples.size());
}

}  // namespace rays
