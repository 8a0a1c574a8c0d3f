#ifndef RAYS_TYPES_HPP
#define RAYS_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rays {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Label = std::int64_t;

template <typename Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

/// A clean data point in [0,1]^dim together with its ground-truth class.
template <typename Scalar>
struct Example {
  Vector<Scalar> features;
  Label label = 0;

  Eigen::Index dim() const { return features.size(); }
};

// Error hierarchy. Every error carries a stable code() used by the CLI's
// machine-readable error line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept { return "Error"; }
};

#define RAYS_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    using Error::Error;                                           \
    const char* code() const noexcept override { return #Name; } \
  }

RAYS_DEFINE_ERROR(BudgetExhausted);
RAYS_DEFINE_ERROR(DimensionMismatch);
RAYS_DEFINE_ERROR(ParseError);
RAYS_DEFINE_ERROR(ShapeError);
RAYS_DEFINE_ERROR(RangeError);
RAYS_DEFINE_ERROR(IndexError);
RAYS_DEFINE_ERROR(EmptyInput);
RAYS_DEFINE_ERROR(NoSuccesses);
RAYS_DEFINE_ERROR(MissingHistory);
RAYS_DEFINE_ERROR(ConfigError);
RAYS_DEFINE_ERROR(IoError);

#undef RAYS_DEFINE_ERROR

}  // namespace rays

#endif  // RAYS_TYPES_HPP
