#ifndef RAYS_MODEL_HPP
#define RAYS_MODEL_HPP

#include "rays/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rays {

enum class ModelKind { linear, mlp };

template <typename Scalar>
struct DenseLayer {
  Matrix<Scalar> weights;  // outputs x inputs
  Vector<Scalar> bias;

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
};

/// Linear or dense-ReLU classifier. Immutable after construction, so one
/// instance can back any number of concurrent oracles.
template <typename Scalar>
class DenseClassifier {
 public:
  DenseClassifier(ModelKind kind, std::vector<DenseLayer<Scalar>> layers)
      : kind_(kind), layers_(std::move(layers)) {
    validate();
  }

  ModelKind kind() const { return kind_; }
  const std::vector<DenseLayer<Scalar>>& layers() const { return layers_; }
  Eigen::Index input_dim() const { return layers_.front().inputs(); }
  Eigen::Index class_count() const { return layers_.back().outputs(); }

  /// Raw final-layer scores; rectifier between hidden layers only.
  template <typename Derived>
  Vector<Scalar> scores(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != input_dim()) {
      throw DimensionMismatch("point has length " + std::to_string(x.size()) +
                              ", model expects " + std::to_string(input_dim()));
    }
    Vector<Scalar> h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      Vector<Scalar> z = layers_[i].weights * h + layers_[i].bias;
      if (i + 1 < layers_.size()) z = z.cwiseMax(Scalar(0));
      h = std::move(z);
    }
    return h;
  }

  /// Argmax of scores; ties go to the lowest class index.
  template <typename Derived>
  Label predict(const Eigen::MatrixBase<Derived>& x) const {
    return argmax(scores(x));
  }

  template <typename NewScalar>
  DenseClassifier<NewScalar> cast() const {
    std::vector<DenseLayer<NewScalar>> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) {
      out.push_back({l.weights.template cast<NewScalar>(), l.bias.template cast<NewScalar>()});
    }
    return DenseClassifier<NewScalar>(kind_, std::move(out));
  }

  static Label argmax(const Vector<Scalar>& s) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < s.size(); ++i) {
      if (s[i] > s[best]) best = i;
    }
    return static_cast<Label>(best);
  }

 private:
  void validate() const {
    if (layers_.empty()) throw ShapeError("model has no layers");
    if (kind_ == ModelKind::linear && layers_.size() != 1) {
      throw ShapeError("linear model must have exactly one layer, got " +
                       std::to_string(layers_.size()));
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& l = layers_[i];
      if (l.weights.rows() == 0 || l.weights.cols() == 0) {
        throw ShapeError("layer " + std::to_string(i) + " has an empty weight matrix");
      }
      if (l.bias.size() != l.weights.rows()) {
        throw ShapeError("layer " + std::to_string(i) + " has " + std::to_string(l.bias.size()) +
                         " biases for " + std::to_string(l.weights.rows()) + " outputs");
      }
      if (i > 0 && l.inputs() != layers_[i - 1].outputs()) {
        throw ShapeError("layer " + std::to_string(i) + " expects width " +
                         std::to_string(l.inputs()) + " after a width-" +
                         std::to_string(layers_[i - 1].outputs()) + " layer");
      }
    }
  }

  ModelKind kind_;
  std::vector<DenseLayer<Scalar>> layers_;
};

using ClassifierModel = DenseClassifier<double>;

const char* to_string(ModelKind kind);

/// JSON model file: {"kind": "linear"|"mlp", "layers": [{"weights": [[...]], "bias": [...]}]}
ClassifierModel load_model(const std::string& path);
ClassifierModel parse_model(const std::string& json_text);
std::string dump_model(const ClassifierModel& model);
void save_model(const ClassifierModel& model, const std::string& path);

}  // namespace rays

#endif  // RAYS_MODEL_HPP
