#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace curvemates {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Components of a Lie algebra element with respect to a fixed orthonormal
/// left-invariant basis {X1, X2, X3}.
template <typename Scalar>
using AlgebraVector = Vector3<Scalar>;

enum class GroupFamily { CommutativeR3, SO3, S3 };

/// A three-dimensional Lie group with bi-invariant metric, reduced to the
/// structure scalar lambda of its bracket: [X1, X2] = lambda X3 (cyclic).
struct GroupSpec {
  GroupFamily family = GroupFamily::CommutativeR3;
  int structure_scalar = 0;

  /// Lie group torsion tau_G = lambda / 2.
  [[nodiscard]] double lie_torsion() const { return 0.5 * structure_scalar; }

  static GroupSpec r3() { return {GroupFamily::CommutativeR3, 0}; }
  static GroupSpec so3() { return {GroupFamily::SO3, 1}; }
  static GroupSpec s3() { return {GroupFamily::S3, 2}; }

  /// Accepts "r3", "so3", "s3".
  static GroupSpec from_name(std::string_view name) {
    if (name == "r3") return r3();
    if (name == "so3") return so3();
    if (name == "s3") return s3();
    throw std::invalid_argument("unknown group '" + std::string(name) + "' (expected r3, so3 or s3)");
  }

  [[nodiscard]] std::string name() const {
    switch (family) {
      case GroupFamily::CommutativeR3: return "r3";
      case GroupFamily::SO3: return "so3";
      case GroupFamily::S3: return "s3";
    }
    return "r3";
  }
};

template <typename Derived>
[[nodiscard]] Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  Matrix3<S> m;
  // clang-format off
  m << S(0),  -v(2),  v(1),
       v(2),   S(0), -v(0),
      -v(1),   v(0),  S(0);
  // clang-format on
  return m;
}

/// Inverse of hat() applied to the skew part of m.
template <typename Derived>
[[nodiscard]] Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  return Vector3<S>(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) / S(2);
}

/// Lie bracket [u, v] = lambda (u x v).
template <typename DerivedU, typename DerivedV>
[[nodiscard]] AlgebraVector<typename DerivedU::Scalar> bracket(const Eigen::MatrixBase<DerivedU>& u,
                                                               const Eigen::MatrixBase<DerivedV>& v,
                                                               const GroupSpec& spec) {
  using S = typename DerivedU::Scalar;
  return S(spec.structure_scalar) * u.cross(v);
}

/// Covariant derivative of U along a curve with tangent t:
/// nabla_T U = U' + 1/2 [T, U].
template <typename DerivedU, typename DerivedP, typename DerivedT>
[[nodiscard]] AlgebraVector<typename DerivedU::Scalar> covariant_derivative(
    const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedP>& u_prime,
    const Eigen::MatrixBase<DerivedT>& t, const GroupSpec& spec) {
  using S = typename DerivedU::Scalar;
  return u_prime + bracket(t, u, spec) / S(2);
}

/// Left-invariant components of a moving frame (T, N, B).
template <typename Scalar>
struct Frame {
  AlgebraVector<Scalar> t = AlgebraVector<Scalar>::UnitX();
  AlgebraVector<Scalar> n = AlgebraVector<Scalar>::UnitY();
  AlgebraVector<Scalar> b = AlgebraVector<Scalar>::UnitZ();

  static Frame identity() { return Frame{}; }

  static Frame from_matrix(const Matrix3<Scalar>& columns) {
    return Frame{columns.col(0), columns.col(1), columns.col(2)};
  }

  /// Columns t, n, b.
  [[nodiscard]] Matrix3<Scalar> matrix() const {
    Matrix3<Scalar> m;
    m.col(0) = t;
    m.col(1) = n;
    m.col(2) = b;
    return m;
  }

  /// max |G - I| over the Gram matrix G of (t, n, b).
  [[nodiscard]] Scalar orthonormality_defect() const {
    const Matrix3<Scalar> m = matrix();
    return (m.transpose() * m - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff();
  }

  /// max |t x n - b|.
  [[nodiscard]] Scalar handedness_defect() const { return (t.cross(n) - b).cwiseAbs().maxCoeff(); }

  template <typename Other>
  [[nodiscard]] Frame<Other> cast() const {
    return Frame<Other>{t.template cast<Other>(), n.template cast<Other>(), b.template cast<Other>()};
  }
};

/// Modified Gram-Schmidt in the order t, n, b.
template <typename Scalar>
void reorthonormalize(Frame<Scalar>& f) {
  f.t.normalize();
  f.n -= f.t.dot(f.n) * f.t;
  f.n.normalize();
  f.b -= f.t.dot(f.b) * f.t;
  f.b -= f.n.dot(f.b) * f.n;
  f.b.normalize();
}

/// tau_G = 1/2 <[t, n], b>.
template <typename Scalar>
[[nodiscard]] Scalar lie_group_torsion(const Frame<Scalar>& frame, const GroupSpec& spec) {
  return bracket(frame.t, frame.n, spec).dot(frame.b) / Scalar(2);
}

/// A point of one of the supported groups: a translation (R3), a rotation
/// matrix (SO3) or a unit quaternion (S3).
template <typename Scalar>
class GroupElement {
 public:
  using Translation = Vector3<Scalar>;
  using Rotation = Matrix3<Scalar>;
  using UnitQuaternion = Eigen::Quaternion<Scalar>;

  GroupElement() : value_(Translation(Translation::Zero())) {}
  explicit GroupElement(const Translation& x) : value_(x) {}
  explicit GroupElement(const Rotation& r) : value_(r) {}
  explicit GroupElement(const UnitQuaternion& q) : value_(q) {}

  static GroupElement identity(GroupFamily family) {
    switch (family) {
      case GroupFamily::CommutativeR3: return GroupElement(Translation(Translation::Zero()));
      case GroupFamily::SO3: return GroupElement(Rotation(Rotation::Identity()));
      case GroupFamily::S3: return GroupElement(UnitQuaternion::Identity());
    }
    return GroupElement();
  }

  /// Builds an element of `family` from its ambient coordinates (see ambient()).
  static GroupElement from_ambient(GroupFamily family, const VectorX<Scalar>& x) {
    switch (family) {
      case GroupFamily::CommutativeR3:
        if (x.size() != 3) break;
        return GroupElement(Translation(x(0), x(1), x(2)));
      case GroupFamily::SO3: {
        if (x.size() != 9) break;
        Rotation r;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) r(i, j) = x(3 * i + j);
        return GroupElement(r);
      }
      case GroupFamily::S3:
        if (x.size() != 4) break;
        return GroupElement(UnitQuaternion(x(0), x(1), x(2), x(3)));
    }
    throw std::invalid_argument("ambient coordinate count does not match group family");
  }

  [[nodiscard]] GroupFamily family() const {
    if (std::holds_alternative<Translation>(value_)) return GroupFamily::CommutativeR3;
    if (std::holds_alternative<Rotation>(value_)) return GroupFamily::SO3;
    return GroupFamily::S3;
  }

  [[nodiscard]] const Translation& translation() const { return std::get<Translation>(value_); }
  [[nodiscard]] const Rotation& rotation() const { return std::get<Rotation>(value_); }
  [[nodiscard]] const UnitQuaternion& quaternion() const { return std::get<UnitQuaternion>(value_); }

  /// Ambient coordinates: (x, y, z), (w, x, y, z) or the 9 matrix entries row-major.
  [[nodiscard]] VectorX<Scalar> ambient() const {
    switch (family()) {
      case GroupFamily::CommutativeR3: return translation();
      case GroupFamily::S3: {
        const auto& q = quaternion();
        VectorX<Scalar> x(4);
        x << q.w(), q.x(), q.y(), q.z();
        return x;
      }
      case GroupFamily::SO3: {
        VectorX<Scalar> x(9);
        const auto& r = rotation();
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) x(3 * i + j) = r(i, j);
        return x;
      }
    }
    return {};
  }

  /// SO3: max |R^T R - I|; S3: |‖q‖ - 1|; R3: 0.
  [[nodiscard]] Scalar manifold_defect() const {
    using std::abs;
    switch (family()) {
      case GroupFamily::CommutativeR3: return Scalar(0);
      case GroupFamily::SO3:
        return (rotation().transpose() * rotation() - Rotation::Identity()).cwiseAbs().maxCoeff();
      case GroupFamily::S3: return abs(quaternion().norm() - Scalar(1));
    }
    return Scalar(0);
  }

  /// Projects back onto the group: Gram-Schmidt on matrix columns, or quaternion normalization.
  void renormalize() {
    if (auto* r = std::get_if<Rotation>(&value_)) {
      Frame<Scalar> f = Frame<Scalar>::from_matrix(*r);
      reorthonormalize(f);
      *r = f.matrix();
    } else if (auto* q = std::get_if<UnitQuaternion>(&value_)) {
      q->normalize();
    }
  }

 private:
  std::variant<Translation, Rotation, UnitQuaternion> value_;
};

template <typename Scalar>
[[nodiscard]] Eigen::Quaternion<Scalar> pure_quaternion(const AlgebraVector<Scalar>& v) {
  return Eigen::Quaternion<Scalar>(Scalar(0), v(0), v(1), v(2));
}

/// dL_g applied to v, in the ambient coordinates of ambient().
template <typename Scalar>
[[nodiscard]] VectorX<Scalar> left_translate_tangent(const GroupElement<Scalar>& g,
                                                     const AlgebraVector<Scalar>& v) {
  switch (g.family()) {
    case GroupFamily::CommutativeR3: return v;
    case GroupFamily::S3: {
      const Eigen::Quaternion<Scalar> w = g.quaternion() * pure_quaternion(v);
      VectorX<Scalar> x(4);
      x << w.w(), w.x(), w.y(), w.z();
      return x;
    }
    case GroupFamily::SO3: {
      const Matrix3<Scalar> w = g.rotation() * hat(v);
      VectorX<Scalar> x(9);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x(3 * i + j) = w(i, j);
      return x;
    }
  }
  return v;
}

/// dL_{g^-1} applied to an ambient velocity: the left-invariant components
/// of a tangent vector at g.
template <typename Scalar>
[[nodiscard]] AlgebraVector<Scalar> pull_back_tangent(const GroupElement<Scalar>& g,
                                                      const VectorX<Scalar>& velocity) {
  switch (g.family()) {
    case GroupFamily::CommutativeR3: return AlgebraVector<Scalar>(velocity(0), velocity(1), velocity(2));
    case GroupFamily::S3: {
      const Eigen::Quaternion<Scalar> v(velocity(0), velocity(1), velocity(2), velocity(3));
      const Eigen::Quaternion<Scalar> w = g.quaternion().conjugate() * v;
      return AlgebraVector<Scalar>(w.x(), w.y(), w.z());
    }
    case GroupFamily::SO3: {
      Matrix3<Scalar> v;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = velocity(3 * i + j);
      return vee(g.rotation().transpose() * v);
    }
  }
  return AlgebraVector<Scalar>::Zero();
}

/// Cumulative integral of uniformly sampled vectors: composite Simpson on
/// even intervals, with the three-point single-interval rule closing odd ones.
template <typename Scalar, int Rows>
[[nodiscard]] std::vector<Eigen::Matrix<Scalar, Rows, 1>> cumulative_simpson(
    std::span<const Eigen::Matrix<Scalar, Rows, 1>> f, Scalar h) {
  using V = Eigen::Matrix<Scalar, Rows, 1>;
  if (f.size() < 3) throw std::invalid_argument("cumulative quadrature needs at least 3 samples");
  std::vector<V> out(f.size());
  out[0] = V::Zero(f[0].rows());
  out[1] = h / Scalar(12) * (Scalar(5) * f[0] + Scalar(8) * f[1] - f[2]);
  for (std::size_t i = 2; i < f.size(); ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + h / Scalar(3) * (f[i - 2] + Scalar(4) * f[i - 1] + f[i]);
    } else {
      out[i] = out[i - 1] + h / Scalar(12) * (-f[i - 2] + Scalar(8) * f[i - 1] + Scalar(5) * f[i]);
    }
  }
  return out;
}

template <typename Scalar>
[[nodiscard]] std::vector<Scalar> cumulative_simpson(std::span<const Scalar> f, Scalar h) {
  std::vector<Eigen::Matrix<Scalar, 1, 1>> wrapped(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) wrapped[i](0) = f[i];
  const auto integrated = cumulative_simpson<Scalar, 1>(std::span<const Eigen::Matrix<Scalar, 1, 1>>(wrapped), h);
  std::vector<Scalar> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = integrated[i](0);
  return out;
}

/// Left shift alpha(s) = alpha0 + integral of the left-invariant tangent
/// components t(u) from s0 to s, on a uniform grid of step h.
template <typename Scalar>
[[nodiscard]] std::vector<AlgebraVector<Scalar>> left_shift(std::span<const AlgebraVector<Scalar>> tangents,
                                                            Scalar h, const AlgebraVector<Scalar>& alpha0) {
  auto alpha = cumulative_simpson<Scalar, 3>(tangents, h);
  for (auto& a : alpha) a += alpha0;
  return alpha;
}

}  // namespace curvemates
