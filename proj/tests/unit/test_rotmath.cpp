#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"

using namespace bioright;

namespace {

double det(const Rotation& r) { return r.matrix().determinant(); }

void expect_orthonormal(const Rotation& r, double tol = 1e-10) {
  EXPECT_LT(r.orthonormality_error(), tol);
  EXPECT_NEAR(det(r), 1.0, tol);
}

Rotation random_proper(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::uniform_real_distribution<double> p(-1.5, 1.5);
  return euler321_to_dcm({u(rng), p(rng), u(rng)});
}

}  // namespace

TEST(DcmFromAxes, CanonicalAxesGiveIdentity) {
  const auto r = dcm_from_axes({1, 0, 0}, {0, 1, 0});
  EXPECT_LT(max_abs_diff(r, Rotation::identity()), 1e-15);
}

TEST(DcmFromAxes, NinetyDegreeYaw) {
  // x along N y, z along N z, so y = z x x = -N x.
  const auto r = dcm_from_axes({0, 1, 0}, {-1, 0, 0});
  Mat3 expected;
  expected << 0, 1, 0,
             -1, 0, 0,
              0, 0, 1;
  EXPECT_LT((r.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(dcm_to_euler321(r).yaw, kPi / 2, 1e-12);
}

TEST(DcmFromAxes, ParallelOrZeroInputsAreDegenerate) {
  auto code_of = [](const Vec3& x, const Vec3& y) {
    try {
      dcm_from_axes(x, y);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code_of({1, 0, 0}, {2, 0, 0}), ErrorCode::kDegenerateAxes);
  EXPECT_EQ(code_of({0, 0, 0}, {0, 1, 0}), ErrorCode::kDegenerateAxes);
  EXPECT_EQ(code_of({1, 0, 0}, {0, 0, 0}), ErrorCode::kDegenerateAxes);
  EXPECT_EQ(code_of({1, 0, 0}, {1, 1e-12, 0}), ErrorCode::kDegenerateAxes);
}

TEST(DcmFromAxes, RowsAreTheConstructedAxes) {
  const Vec3 x(0.3, -1.2, 0.5), y(0.7, 0.2, -0.4);
  const auto r = dcm_from_axes(x, y);
  const Vec3 xh = x.normalized();
  const Vec3 zh = xh.cross(y).normalized();
  EXPECT_LT((r.row(0) - xh).norm(), 1e-15);
  EXPECT_LT((r.row(2) - zh).norm(), 1e-15);
  EXPECT_LT((r.row(1) - zh.cross(xh)).norm(), 1e-15);
}

TEST(DcmFromAxes, RandomInputsAreOrthonormal) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 x(n(rng), n(rng), n(rng)), y(n(rng), n(rng), n(rng));
    expect_orthonormal(dcm_from_axes(x, y));
  }
}

TEST(Rotation, CheckedConstructorRejectsNonRotations) {
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  EXPECT_THROW(Rotation{reflect}, Error);
  EXPECT_THROW(Rotation{Mat3::Identity() * 1.001}, Error);
  EXPECT_NO_THROW(Rotation{Rotation::about_y(0.4).matrix()});
}

TEST(Euler321, IdentityIsZero) {
  const auto e = dcm_to_euler321(Rotation::identity());
  EXPECT_EQ(e.yaw, 0.0);
  EXPECT_EQ(e.pitch, 0.0);
  EXPECT_EQ(e.roll, 0.0);
  EXPECT_LT(max_abs_diff(euler321_to_dcm({0, 0, 0}), Rotation::identity()), 1e-16);
}

TEST(Euler321, RoundTripOfKnownTriple) {
  const auto e = dcm_to_euler321(euler321_to_dcm({0.3, 0.2, 0.1}));
  EXPECT_NEAR(e.yaw, 0.3, 1e-10);
  EXPECT_NEAR(e.pitch, 0.2, 1e-10);
  EXPECT_NEAR(e.roll, 0.1, 1e-10);
}

TEST(Euler321, PureRollAboutX) {
  // Passive R1(pi/2) by hand.
  Mat3 m;
  m << 1, 0, 0,
       0, 0, 1,
       0, -1, 0;
  const auto e = dcm_to_euler321(Rotation(m));
  EXPECT_NEAR(e.yaw, 0.0, 1e-15);
  EXPECT_NEAR(e.pitch, 0.0, 1e-15);
  EXPECT_NEAR(e.roll, kPi / 2, 1e-15);
}

TEST(Euler321, YawOfPiRoundTrips) {
  const auto e = dcm_to_euler321(euler321_to_dcm({kPi, 0, 0}));
  EXPECT_NEAR(std::abs(e.yaw), kPi, 1e-12);
  EXPECT_NEAR(e.pitch, 0.0, 1e-12);
  EXPECT_NEAR(e.roll, 0.0, 1e-12);
}

TEST(Euler321, CompositionMatchesElementaryProduct) {
  const EulerYPR e{0.7, -0.4, 2.2};
  const auto r = Rotation::about_x(e.roll) * Rotation::about_y(e.pitch) * Rotation::about_z(e.yaw);
  EXPECT_LT(max_abs_diff(r, euler321_to_dcm(e)), 1e-15);
}

TEST(Euler321, RandomRoundTripAwayFromGimbalLock) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-kPi + 1e-9, kPi);
  std::uniform_real_distribution<double> p(-kPi / 2 + 1e-3, kPi / 2 - 1e-3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const EulerYPR e{u(rng), p(rng), u(rng)};
    const auto back = dcm_to_euler321(euler321_to_dcm(e));
    worst = std::max({worst, std::abs(back.yaw - e.yaw), std::abs(back.pitch - e.pitch),
                      std::abs(back.roll - e.roll)});
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Euler321, DcmRoundTripOnRandomRotations) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto r = random_proper(rng);
    EXPECT_LT(max_abs_diff(euler321_to_dcm(dcm_to_euler321(r)), r), 1e-10);
  }
}

TEST(Euler321, GimbalLockFoldsIntoYaw) {
  for (double pitch : {kPi / 2, -kPi / 2}) {
    const auto r = euler321_to_dcm({0.5, pitch, 0.3});
    const auto c = dcm_to_euler321_checked(r);
    EXPECT_TRUE(c.gimbal_lock);
    EXPECT_EQ(c.angles.roll, 0.0);
    EXPECT_NEAR(c.angles.pitch, pitch, 1e-6);
    // The folded triple must still describe the same rotation.
    EXPECT_LT(max_abs_diff(euler321_to_dcm(c.angles), r), 1e-9);
  }
  EXPECT_FALSE(dcm_to_euler321_checked(euler321_to_dcm({0.5, 1.0, 0.3})).gimbal_lock);
}

TEST(RelativeRotation, SameFrameIsIdentity) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_proper(rng);
    EXPECT_LT(max_abs_diff(relative_rotation(c, c), Rotation::identity()), 1e-12);
  }
}

TEST(RelativeRotation, RecoversPremultipliedRoll) {
  std::mt19937_64 rng(10);
  const auto roll40 = Rotation::about_x(deg2rad(40.0));
  for (int i = 0; i < 50; ++i) {
    const auto c_bn = random_proper(rng);
    const auto rel = relative_rotation(roll40 * c_bn, c_bn);
    EXPECT_LT(max_abs_diff(rel, roll40), 1e-12);
    EXPECT_NEAR(rad2deg(dcm_to_euler321(rel).roll), 40.0, 1e-10);
  }
}

TEST(RelativeRotation, RecoversRandomRelative) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const auto c_ab = random_proper(rng);
    const auto c_bn = random_proper(rng);
    EXPECT_LT(max_abs_diff(relative_rotation(c_ab * c_bn, c_bn), c_ab), 1e-12);
  }
}

TEST(Unwrap, SmoothSeriesUnchanged) {
  const std::vector<double> in{0.0, 0.1, 0.2};
  EXPECT_EQ(unwrap_angles(in), in);
}

TEST(Unwrap, ShiftsByTwoPi) {
  const std::vector<double> in{3.0, -3.0};
  const auto out = unwrap_angles(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], 3.0);
  EXPECT_NEAR(out[1], -3.0 + 2 * kPi, 1e-15);
  EXPECT_NEAR(out[1], 3.2831853, 1e-7);
}

TEST(Unwrap, RampCrossingPiThreeTimesIsMonotone) {
  std::vector<double> wrapped;
  for (int i = 0; i <= 700; ++i) wrapped.push_back(wrap_pi(0.025 * i));
  int crossings = 0;
  for (std::size_t i = 1; i < wrapped.size(); ++i) crossings += wrapped[i] < wrapped[i - 1];
  ASSERT_EQ(crossings, 3);
  const auto out = unwrap_angles(wrapped);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GT(out[i], out[i - 1]);
  EXPECT_NEAR(out.back(), 17.5, 1e-12);
}

TEST(Unwrap, PreservesAnglesModuloTwoPiAndBoundsSteps) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> in(500);
  for (double& x : in) x = u(rng);
  const auto out = unwrap_angles(in);
  EXPECT_EQ(out.front(), in.front());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double k = (out[i] - in[i]) / (2 * kPi);
    EXPECT_NEAR(k, std::round(k), 1e-12);
    if (i > 0) EXPECT_LE(std::abs(out[i] - out[i - 1]), kPi + 1e-12);
  }
}

TEST(WrapPi, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_pi(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_pi(-kPi), kPi);
  EXPECT_NEAR(wrap_pi(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(wrap_pi(0.25), 0.25, 1e-16);
}
