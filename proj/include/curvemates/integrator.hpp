#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "curvemates/lie_algebra.hpp"
#include "curvemates/profile.hpp"

namespace curvemates {

/// Frames (and optionally positions) sampled on the uniform grid s_i = s0 + i h.
template <typename Scalar>
struct FrameTrajectory {
  GroupSpec spec;
  Scalar s0 = Scalar(0);
  Scalar h = Scalar(0);
  std::vector<Frame<Scalar>> frames;
  /// kappa and tau - tau_G at the grid points.
  std::vector<Scalar> kappa;
  std::vector<Scalar> delta;
  /// Empty until reconstruct_position().
  std::vector<GroupElement<Scalar>> positions;

  /// Largest orthonormality defect seen before / after each re-orthonormalization.
  Scalar max_step_drift = Scalar(0);
  Scalar max_frame_defect = Scalar(0);
  /// Largest manifold defect of the positions before each renormalization.
  Scalar max_manifold_drift = Scalar(0);

  [[nodiscard]] std::size_t size() const { return frames.size(); }
  [[nodiscard]] Scalar s(std::size_t i) const { return s0 + Scalar(static_cast<double>(i)) * h; }
};

enum class DirectionField { PrincipalNormal, Binormal };

namespace detail {

template <typename Scalar>
Matrix3<Scalar> frame_generator(Scalar kappa, Scalar delta) {
  return hat(Vector3<Scalar>(delta, Scalar(0), kappa));
}

/// Grid point count for [s0, s1] with step h.
inline std::size_t grid_count(double s0, double s1, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(s1 > s0)) throw std::invalid_argument("integration interval must satisfy s0 < s1");
  return static_cast<std::size_t>(std::floor((s1 - s0) / h + 1e-9)) + 1;
}

/// One RK4 step of X' = X * W(s) for X in {3-vector, quaternion, matrix}, given
/// the tangent components at s, s + h/2 and s + h.
template <typename Scalar>
GroupElement<Scalar> rk4_position_step(const GroupElement<Scalar>& g, const AlgebraVector<Scalar>& u0,
                                       const AlgebraVector<Scalar>& um, const AlgebraVector<Scalar>& u1,
                                       Scalar h) {
  const Scalar half = h / Scalar(2), sixth = h / Scalar(6), two(2);
  switch (g.family()) {
    case GroupFamily::CommutativeR3:
      return GroupElement<Scalar>(Vector3<Scalar>(g.translation() + sixth * (u0 + Scalar(4) * um + u1)));
    case GroupFamily::S3: {
      using Q = Eigen::Quaternion<Scalar>;
      const Q q = g.quaternion();
      const Q w0 = pure_quaternion(u0), wm = pure_quaternion(um), w1 = pure_quaternion(u1);
      auto axpy = [](const Q& a, Scalar t, const Q& b) { return Q(a.coeffs() + t * b.coeffs()); };
      const Q k1 = q * w0;
      const Q k2 = axpy(q, half, k1) * wm;
      const Q k3 = axpy(q, half, k2) * wm;
      const Q k4 = axpy(q, h, k3) * w1;
      return GroupElement<Scalar>(Q(q.coeffs() + sixth * (k1.coeffs() + two * k2.coeffs() + two * k3.coeffs() +
                                                        k4.coeffs())));
    }
    case GroupFamily::SO3: {
      const Matrix3<Scalar>& r = g.rotation();
      const Matrix3<Scalar> w0 = hat(u0), wm = hat(um), w1 = hat(u1);
      const Matrix3<Scalar> k1 = r * w0;
      const Matrix3<Scalar> k2 = (r + half * k1) * wm;
      const Matrix3<Scalar> k3 = (r + half * k2) * wm;
      const Matrix3<Scalar> k4 = (r + h * k3) * w1;
      return GroupElement<Scalar>(Matrix3<Scalar>(r + sixth * (k1 + two * k2 + two * k3 + k4)));
    }
  }
  return g;
}

}  // namespace detail

/// Classical RK4 on T' = kappa N, N' = -kappa T + (tau - tau_G) B, B' = -(tau - tau_G) N
/// in left-invariant components, re-orthonormalizing after every step.
template <typename Scalar = double>
FrameTrajectory<Scalar> integrate_frame(const CurvatureProfile& p, const GroupSpec& spec, Scalar s0, Scalar s1,
                                        Scalar h, const Frame<Scalar>& init = Frame<Scalar>::identity()) {
  using std::abs;
  const std::size_t n =
      detail::grid_count(static_cast<double>(s0), static_cast<double>(s1), static_cast<double>(h));
  const Scalar tau_g = Scalar(spec.lie_torsion());
  FrameTrajectory<Scalar> traj;
  traj.spec = spec;
  traj.s0 = s0;
  traj.h = h;
  traj.frames.reserve(n);
  traj.kappa.reserve(n);
  traj.delta.reserve(n);

  auto generator = [&](Scalar s) {
    return detail::frame_generator(p.kappa().value(s), Scalar(p.tau().value(s) - tau_g));
  };

  Frame<Scalar> f = init;
  reorthonormalize(f);
  Matrix3<Scalar> x = f.matrix();
  traj.frames.push_back(f);
  traj.kappa.push_back(p.kappa().value(s0));
  traj.delta.push_back(p.tau().value(s0) - tau_g);
  traj.max_frame_defect = f.orthonormality_defect();

  Matrix3<Scalar> a0 = generator(s0);
  for (std::size_t i = 1; i < n; ++i) {
    const Scalar s = traj.s(i - 1);
    const Scalar half = h / Scalar(2);
    const Matrix3<Scalar> am = generator(s + half);
    const Scalar s_next = traj.s(i);
    const Scalar k_next = p.kappa().value(s_next);
    const Scalar d_next = p.tau().value(s_next) - tau_g;
    const Matrix3<Scalar> a1 = detail::frame_generator(k_next, d_next);

    const Matrix3<Scalar> k1 = x * a0;
    const Matrix3<Scalar> k2 = (x + half * k1) * am;
    const Matrix3<Scalar> k3 = (x + half * k2) * am;
    const Matrix3<Scalar> k4 = (x + h * k3) * a1;
    x += h / Scalar(6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);

    f = Frame<Scalar>::from_matrix(x);
    traj.max_step_drift = std::max(traj.max_step_drift, f.orthonormality_defect());
    reorthonormalize(f);
    traj.max_frame_defect = std::max(traj.max_frame_defect, f.orthonormality_defect());
    x = f.matrix();

    traj.frames.push_back(f);
    traj.kappa.push_back(k_next);
    traj.delta.push_back(d_next);
    a0 = a1;
  }
  return traj;
}

/// Integrates a position curve whose left-invariant tangent components are
/// u_i, with derivatives du_i, on the grid of step h. Half-step tangents come
/// from cubic Hermite interpolation.
template <typename Scalar>
std::vector<GroupElement<Scalar>> integrate_tangent_field(const std::vector<AlgebraVector<Scalar>>& u,
                                                          const std::vector<AlgebraVector<Scalar>>& du, Scalar h,
                                                          const GroupElement<Scalar>& g0,
                                                          Scalar* max_drift = nullptr) {
  std::vector<GroupElement<Scalar>> out;
  out.reserve(u.size());
  GroupElement<Scalar> g = g0;
  g.renormalize();
  out.push_back(g);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const AlgebraVector<Scalar> um =
        (u[i - 1] + u[i]) / Scalar(2) + h / Scalar(8) * (du[i - 1] - du[i]);
    g = detail::rk4_position_step(g, u[i - 1], um, u[i], h);
    if (max_drift) *max_drift = std::max(*max_drift, g.manifold_defect());
    g.renormalize();
    out.push_back(g);
  }
  return out;
}

/// Fills traj.positions by integrating gamma' = dL_gamma t(s) from g0.
template <typename Scalar>
FrameTrajectory<Scalar>& reconstruct_position(FrameTrajectory<Scalar>& traj, const GroupElement<Scalar>& g0) {
  if (g0.family() != traj.spec.family) throw std::invalid_argument("initial position belongs to another group");
  std::vector<AlgebraVector<Scalar>> u(traj.size()), du(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    u[i] = traj.frames[i].t;
    du[i] = traj.kappa[i] * traj.frames[i].n;
  }
  traj.positions = integrate_tangent_field(u, du, traj.h, g0, &traj.max_manifold_drift);
  return traj;
}

template <typename Scalar>
FrameTrajectory<Scalar>& reconstruct_position(FrameTrajectory<Scalar>& traj) {
  return reconstruct_position(traj, GroupElement<Scalar>::identity(traj.spec.family));
}

/// Position curve tangent to N (natural mate) or B (conjugate mate) of the source.
template <typename Scalar>
std::vector<GroupElement<Scalar>> integrate_direction_curve(const FrameTrajectory<Scalar>& source,
                                                            DirectionField which,
                                                            const GroupElement<Scalar>& g0) {
  std::vector<AlgebraVector<Scalar>> u(source.size()), du(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Frame<Scalar>& f = source.frames[i];
    if (which == DirectionField::PrincipalNormal) {
      u[i] = f.n;
      du[i] = -source.kappa[i] * f.t + source.delta[i] * f.b;
    } else {
      u[i] = f.b;
      du[i] = -source.delta[i] * f.n;
    }
  }
  return integrate_tangent_field(u, du, source.h, g0);
}

template <typename Scalar>
std::vector<GroupElement<Scalar>> integrate_direction_curve(const FrameTrajectory<Scalar>& source,
                                                            DirectionField which) {
  return integrate_direction_curve(source, which, GroupElement<Scalar>::identity(source.spec.family));
}

/// Frames plus positions in one call.
template <typename Scalar = double>
FrameTrajectory<Scalar> synthesize(const CurvatureProfile& p, const GroupSpec& spec, Scalar h) {
  auto traj = integrate_frame<Scalar>(p, spec, Scalar(p.domain().lo), Scalar(p.domain().hi), h);
  reconstruct_position(traj);
  return traj;
}

}  // namespace curvemates
