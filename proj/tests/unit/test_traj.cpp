#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/traj.hpp"

using namespace bioright;

namespace {

JointTrajectory sampled(double dt, int n, auto&& f) {
  std::vector<double> t, a;
  for (int i = 0; i < n; ++i) {
    t.push_back(i * dt);
    a.push_back(f(i * dt));
  }
  return make_trajectory(std::move(t), std::move(a));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

double stddev(const std::vector<double>& v, std::size_t skip) {
  double m = 0.0;
  const auto n = static_cast<double>(v.size() - 2 * skip);
  for (std::size_t i = skip; i + skip < v.size(); ++i) m += v[i];
  m /= n;
  double s = 0.0;
  for (std::size_t i = skip; i + skip < v.size(); ++i) s += (v[i] - m) * (v[i] - m);
  return std::sqrt(s / n);
}

// Independent settling oracle: dense evaluation of the closed-form response.
double dense_settling(double zeta, double wn, double horizon, double band) {
  const double f = second_order_response(zeta, wn, horizon);
  const double h = 1e-4;
  double last = 0.0;
  for (double t = 0.0; t <= horizon; t += h) {
    if (std::abs(second_order_response(zeta, wn, t) / f - 1.0) > band) last = t;
  }
  return last;
}

}  // namespace

TEST(JointTrajectory, ValidateRejectsNonUniformGrids) {
  EXPECT_THROW(make_trajectory({0.0, 0.1, 0.3}, {0, 0, 0}), Error);
  EXPECT_THROW(make_trajectory({0.0, 0.1}, {0.0}), Error);
  EXPECT_THROW(make_trajectory({0.0, 0.1}, {0.0, std::nan("")}), Error);
  EXPECT_NO_THROW(make_trajectory({0.0, 0.1, 0.2}, {0, 1, 2}));
}

TEST(Differentiate, ConstantAndRamp) {
  const auto c = differentiate(sampled(0.01, 50, [](double) { return 1.25; }));
  for (double r : *c.rate) EXPECT_EQ(r, 0.0);
  const auto ramp = differentiate(sampled(0.01, 50, [](double t) { return 2.0 * t; }));
  for (double r : *ramp.rate) EXPECT_NEAR(r, 2.0, 1e-9);
}

TEST(Differentiate, SineMatchesCosine) {
  const auto d = differentiate(sampled(1e-3, 6284, [](double t) { return std::sin(t); }));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR((*d.rate)[i], std::cos(d.times[i]), 1e-6);
}

TEST(Differentiate, SecondOrderConvergence) {
  auto max_err = [](double dt) {
    const int n = static_cast<int>(std::round(2.0 / dt)) + 1;
    const auto d = differentiate(sampled(dt, n, [](double t) { return std::exp(t); }));
    double e = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      e = std::max(e, std::abs((*d.rate)[i] - std::exp(d.times[i])));
    }
    return e;
  };
  const double ratio = max_err(0.01) / max_err(0.005);
  EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(Differentiate, TooShort) {
  EXPECT_EQ(code_of([] { differentiate(make_trajectory({0.0, 1.0}, {0.0, 1.0})); }),
            ErrorCode::kTooShort);
}

TEST(Smooth, IdentityAndConstant) {
  const auto s = sampled(0.1, 20, [](double t) { return t * t; });
  EXPECT_EQ(smooth(s, 1).angle, s.angle);
  const auto c = sampled(0.1, 20, [](double) { return -3.5; });
  for (int w : {3, 5, 19}) {
    for (double x : smooth(c, w).angle) EXPECT_DOUBLE_EQ(x, -3.5);
  }
}

TEST(Smooth, WhiteNoiseShrinksByRootWindow) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto s = sampled(0.01, 40000, [&](double) { return n(rng); });
  EXPECT_NEAR(stddev(smooth(s, 9).angle, 4), 1.0 / 3.0, 0.01);
}

TEST(Smooth, ShrinkingWindowsAtEnds) {
  const auto s = make_trajectory({0, 1, 2, 3, 4}, {0, 10, 20, 0, 50});
  const auto out = smooth(s, 5);
  EXPECT_DOUBLE_EQ(out.angle[0], 0.0);
  EXPECT_DOUBLE_EQ(out.angle[1], 10.0);
  EXPECT_DOUBLE_EQ(out.angle[2], 16.0);
  EXPECT_DOUBLE_EQ(out.angle[3], 70.0 / 3.0);
  EXPECT_DOUBLE_EQ(out.angle[4], 50.0);
}

TEST(Smooth, BadWindow) {
  const auto s = sampled(0.1, 5, [](double t) { return t; });
  EXPECT_EQ(code_of([&] { smooth(s, 4); }), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of([&] { smooth(s, 7); }), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of([&] { smooth(s, 0); }), ErrorCode::kBadWindow);
}

TEST(TimeScale, AnimalSpanToTwoHundredTwentyFiveSeconds) {
  auto s = sampled(1e-4, 1501, [](double t) { return t; });
  s.rate = std::vector<double>(s.size(), deg2rad(3000.0));
  EXPECT_NEAR(s.duration(), 0.150, 1e-15);
  const double k = time_scale_factor(s, 225.0);
  EXPECT_EQ(k, 1500.0);
  const auto out = time_scale(s, 225.0);
  EXPECT_DOUBLE_EQ(out.times.back(), 1500.0 * s.times.back());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.angle[i], s.angle[i]);
    EXPECT_EQ((*out.rate)[i], (*s.rate)[i] / 1500.0);
  }
  EXPECT_NEAR(rad2deg((*out.rate)[0]), 2.0, 1e-12);
  EXPECT_LT(rad2deg((*out.rate)[0]), 5.0);
}

TEST(TimeScale, UnitFactorIsIdentity) {
  auto s = differentiate(sampled(0.2, 10, [](double t) { return std::cos(t); }));
  const auto out = time_scale(s, s.duration());
  EXPECT_EQ(out.times, s.times);
  EXPECT_EQ(out.angle, s.angle);
  EXPECT_EQ(*out.rate, *s.rate);
}

TEST(TimeScale, CommutesWithDifferentiation) {
  const auto s = sampled(0.01, 301, [](double t) { return std::sin(3.0 * t) + t * t; });
  const double target = 17.3;
  const double k = time_scale_factor(s, target);
  const auto a = differentiate(time_scale(s, target));
  const auto b = differentiate(s);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR((*a.rate)[i], (*b.rate)[i] / k, 1e-9);
}

TEST(Resample, OwnGridLinearAndSine) {
  const auto s = sampled(0.05, 41, [](double t) { return std::sin(t); });
  const auto same = resample(s, 0.05);
  ASSERT_EQ(same.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(same.angle[i], s.angle[i], 1e-12);

  const auto ramp = sampled(0.1, 11, [](double t) { return 3.0 * t - 1.0; });
  const auto r = resample(ramp, 0.0123);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r.angle[i], 3.0 * r.times[i] - 1.0, 1e-12);

  const double dt = 0.05;
  const auto fine = resample(s, dt / 10.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    worst = std::max(worst, std::abs(fine.angle[i] - std::sin(fine.times[i])));
  }
  EXPECT_LE(worst, dt * dt / 8.0);
  EXPECT_GT(worst, dt * dt / 100.0);
}

TEST(StepMetrics, IdealStep) {
  std::vector<double> t, a;
  for (int i = 0; i <= 1000; ++i) {
    t.push_back(i * 1e-3);
    a.push_back(i == 0 ? 0.0 : 2.0);
  }
  const auto m = step_metrics(make_trajectory(t, a), 1.0);
  EXPECT_LT(m.rise_time, 1e-3);
  EXPECT_LT(m.settling_time, 1e-3);
  EXPECT_EQ(m.overshoot, 0.0);
  EXPECT_EQ(m.final_value, 2.0);
}

TEST(StepMetrics, UnderdampedAnalyticOvershoot) {
  const double zeta = 0.5326, wn = 1.0;
  const auto s = sampled(1e-3, 40001, [&](double t) { return second_order_response(zeta, wn, t); });
  const auto m = step_metrics(s, 40.0);
  const double os = 100.0 * std::exp(-kPi * zeta / std::sqrt(1 - zeta * zeta));
  EXPECT_NEAR(os, 13.85, 0.01);
  EXPECT_NEAR(m.overshoot, 13.85, 0.1);
  EXPECT_NEAR(m.overshoot, os, 1e-3);
  EXPECT_LE(m.rise_time, m.settling_time);
  EXPECT_LE(m.settling_time, m.steady_assumed_at);
  EXPECT_NEAR(m.settling_time, dense_settling(zeta, wn, 40.0, 0.05), 2e-3);
}

TEST(StepMetrics, InvariantUnderConstantOffsetAndSign) {
  const auto s = sampled(0.01, 2001, [](double t) { return second_order_response(0.4, 0.8, t); });
  auto shifted = s;
  auto flipped = s;
  for (double& x : shifted.angle) x += 7.5;
  for (double& x : flipped.angle) x = -x;
  const auto a = step_metrics(s, 20.0), b = step_metrics(shifted, 20.0),
             c = step_metrics(flipped, 20.0);
  EXPECT_NEAR(a.rise_time, b.rise_time, 1e-9);
  EXPECT_NEAR(a.settling_time, b.settling_time, 1e-9);
  EXPECT_NEAR(a.overshoot, b.overshoot, 1e-9);
  EXPECT_NEAR(a.overshoot, c.overshoot, 1e-9);
  EXPECT_NEAR(a.rise_time, c.rise_time, 1e-9);
}

TEST(StepMetrics, ZeroToHundredConvention) {
  const auto s = sampled(1e-3, 20001, [](double t) { return second_order_response(0.5, 1.0, t); });
  const auto m = step_metrics(s, 20.0, 0.05, RiseConvention::kZeroToHundred);
  // First crossing of the final value, measured against y(20).
  const double f = second_order_response(0.5, 1.0, 20.0);
  double lo = 0.0, hi = kPi / std::sqrt(0.75);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (second_order_response(0.5, 1.0, mid) < f ? lo : hi) = mid;
  }
  EXPECT_NEAR(m.rise_time, lo, 1e-4);
}

TEST(StepMetrics, Errors) {
  const auto flat = sampled(0.1, 10, [](double) { return 1.0; });
  EXPECT_EQ(code_of([&] { step_metrics(flat, 0.5); }), ErrorCode::kNoStep);
  const auto s = sampled(0.1, 10, [](double t) { return t; });
  EXPECT_THROW(step_metrics(s, 5.0), Error);
  EXPECT_THROW(step_metrics(s, 0.5, 0.6), Error);
}

TEST(StepMetrics, TextAndJsonOutput) {
  const auto s = sampled(0.01, 2001, [](double t) { return second_order_response(0.4, 0.8, t); });
  const auto m = step_metrics(s, 20.0);
  std::ostringstream text, json;
  write_metrics_text(m, text);
  write_metrics_json(m, json);
  EXPECT_NE(text.str().find("rise_convention=10-90"), std::string::npos);
  EXPECT_NE(text.str().find("overshoot_pct="), std::string::npos);
  EXPECT_EQ(json.str().front(), '{');
  EXPECT_NE(json.str().find("\"settling_time_s\""), std::string::npos);
}

TEST(Synth, RoundTripsOvershootAndRise) {
  const auto fit = synth_second_order(13.85, 64.5, 225.0, 0.01);
  const auto& tr = fit.trajectory;
  EXPECT_EQ(tr.size(), 22501u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 225.0);
  EXPECT_EQ(tr.angle.front(), 0.0);
  EXPECT_NEAR(tr.angle.back(), kPi, 1e-12);
  const auto m = step_metrics(tr, 225.0);
  EXPECT_NEAR(m.overshoot, 13.85, 0.1);
  EXPECT_NEAR(m.rise_time, 64.5, 0.5);
  EXPECT_NEAR(m.settling_time,
              dense_settling(fit.damping_ratio, fit.natural_frequency, 225.0, 0.05), 1.0);
  // Carried rates are the analytic derivative.
  const auto d = differentiate(tr);
  for (std::size_t i = 100; i < tr.size(); i += 1000) {
    EXPECT_NEAR((*tr.rate)[i], (*d.rate)[i], 1e-8);
  }
}

TEST(Synth, DampingStartsNearClosedForm) {
  const auto fit = synth_second_order(13.85, 64.5, 225.0, 0.01);
  EXPECT_NEAR(damping_from_overshoot(13.85), 0.5326, 1e-4);
  // The horizon makes the fitted damping a little lower than the formula.
  EXPECT_LT(fit.damping_ratio, damping_from_overshoot(13.85));
  EXPECT_GT(fit.damping_ratio, 0.45);
}

TEST(Synth, HalvingDtChangesMetricsBelowOneTenthPercent) {
  const auto a = step_metrics(synth_second_order(13.85, 64.5, 225.0, 0.02).trajectory, 225.0);
  const auto b = step_metrics(synth_second_order(13.85, 64.5, 225.0, 0.01).trajectory, 225.0);
  EXPECT_LT(std::abs(a.overshoot - b.overshoot) / b.overshoot, 1e-3);
  EXPECT_LT(std::abs(a.rise_time - b.rise_time) / b.rise_time, 1e-3);
  EXPECT_LT(std::abs(a.settling_time - b.settling_time) / b.settling_time, 1e-3);
  const auto fine = step_metrics(resample(synth_second_order(13.85, 64.5, 225.0, 0.02).trajectory, 0.005), 225.0);
  EXPECT_LT(std::abs(fine.overshoot - b.overshoot) / b.overshoot, 1e-3);
}

TEST(Synth, TinyOvershootIsNearlyMonotone) {
  const auto fit = synth_second_order(1e-4, 64.5, 225.0, 0.05);
  const auto& a = fit.trajectory.angle;
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_GE(a[i], a[i - 1] - 1e-6 * kPi);
  EXPECT_GT(fit.damping_ratio, 0.9);
}

TEST(Synth, InfeasibleRequests) {
  EXPECT_EQ(code_of([] { synth_second_order(13.85, 220.0, 225.0, 0.01); }), ErrorCode::kUnreachable);
  EXPECT_THROW(synth_second_order(0.0, 64.5, 225.0, 0.01), Error);
  EXPECT_THROW(synth_second_order(120.0, 64.5, 225.0, 0.01), Error);
}

TEST(TrajectoryCsv, RoundTripAndErrors) {
  const auto fit = synth_second_order(13.85, 64.5, 225.0, 0.5);
  std::stringstream buf;
  write_trajectory_csv(fit.trajectory, buf);
  const std::string first = buf.str();
  const auto back = read_trajectory_csv(buf);
  std::ostringstream again;
  write_trajectory_csv(back, again);
  EXPECT_EQ(again.str(), first);
  EXPECT_EQ(first.substr(0, first.find('\n')), "t,angle_deg,rate_deg_s");

  std::istringstream no_rate("t,angle_deg\n0,0\n1,10\n2,20\n");
  EXPECT_FALSE(read_trajectory_csv(no_rate).rate);
  std::istringstream empty("t,angle_deg,rate_deg_s\n");
  EXPECT_EQ(code_of([&] { read_trajectory_csv(empty); }), ErrorCode::kEmptyDataset);
  std::istringstream bad("t,angle_deg\n0,x\n");
  EXPECT_EQ(code_of([&] { read_trajectory_csv(bad); }), ErrorCode::kParseError);
}
