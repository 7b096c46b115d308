#include "bioright/traj.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "bioright/error.hpp"
#include "bioright/rotmath.hpp"
#include "bioright/text_format.hpp"

namespace bioright {

namespace {

constexpr double kGridTol = 1e-9;

void require_valid(const JointTrajectory& t) { t.validate(); }

double lerp_series(const std::vector<double>& times,
                   const std::vector<double>& values, double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  const double u = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + u * (values[k] - values[k - 1]);
}

}  // namespace

double JointTrajectory::step() const {
  if (times.size() < 2) return 0.0;
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void JointTrajectory::validate() const {
  if (times.size() != angle.size() || (rate && rate->size() != times.size())) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory field sizes differ");
  }
  if (times.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty trajectory");
  }
  for (double a : angle) {
    if (!std::isfinite(a)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite angle");
    }
  }
  if (times.size() < 2) return;
  const double h = step();
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "times must increase");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    // Absolute times carry their own rounding (e.g. 9-decimal CSV).
    const double tol = kGridTol * (1.0 + std::abs(times[i]));
    if (std::abs((times[i] - times[i - 1]) - h) > tol) {
      throw Error(ErrorCode::kInvalidArgument, "time grid is not uniform");
    }
  }
}

double JointTrajectory::angle_at(double t) const {
  return lerp_series(times, angle, t);
}

double JointTrajectory::rate_at(double t) const {
  if (!rate) throw Error(ErrorCode::kInvalidArgument, "trajectory has no rate");
  return lerp_series(times, *rate, t);
}

JointTrajectory make_trajectory(std::vector<double> times,
                                std::vector<double> angle) {
  JointTrajectory t{std::move(times), std::move(angle), std::nullopt};
  t.validate();
  return t;
}

JointTrajectory differentiate(const JointTrajectory& traj) {
  require_valid(traj);
  const std::size_t n = traj.size();
  if (n < 3) throw Error(ErrorCode::kTooShort, "differentiation needs 3 samples");
  const double h = traj.step();
  const auto& a = traj.angle;
  std::vector<double> rate(n);
  rate[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rate[i] = (a[i + 1] - a[i - 1]) / (2.0 * h);
  }
  rate[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
  JointTrajectory out = traj;
  out.rate = std::move(rate);
  return out;
}

JointTrajectory smooth(const JointTrajectory& traj, int window) {
  require_valid(traj);
  const auto n = static_cast<long>(traj.size());
  if (window < 1 || window % 2 == 0 || window > n) {
    throw Error(ErrorCode::kBadWindow,
                "window must be odd and at most the sample count");
  }
  const long half = window / 2;
  auto average = [&](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (long i = 0; i < n; ++i) {
      const long h = std::min({half, i, n - 1 - i});
      double acc = 0.0;
      for (long j = i - h; j <= i + h; ++j) acc += v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = acc / static_cast<double>(2 * h + 1);
    }
    return out;
  };
  JointTrajectory out = traj;
  out.angle = average(traj.angle);
  if (traj.rate) out.rate = average(*traj.rate);
  return out;
}

double time_scale_factor(const JointTrajectory& traj, double target_duration) {
  if (!(target_duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target duration must be positive");
  }
  const double d = traj.duration();
  if (!(d > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "trajectory has zero duration");
  }
  double k = target_duration / d;
  const double nearest = std::round(k);
  if (nearest >= 1.0 && std::abs(k - nearest) <= 1e-9 * k) k = nearest;
  return k;
}

JointTrajectory time_scale(const JointTrajectory& traj, double target_duration) {
  require_valid(traj);
  const double k = time_scale_factor(traj, target_duration);
  JointTrajectory out = traj;
  if (k == 1.0) return out;
  for (auto& t : out.times) t *= k;
  if (out.rate) {
    for (auto& r : *out.rate) r /= k;
  }
  return out;
}

JointTrajectory resample(const JointTrajectory& traj, double dt) {
  require_valid(traj);
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  const double t0 = traj.times.front();
  const auto steps = static_cast<std::size_t>(std::floor(traj.duration() / dt + 1e-9));
  JointTrajectory out;
  out.times.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    out.times.push_back(t0 + static_cast<double>(i) * dt);
  }
  for (double t : out.times) out.angle.push_back(traj.angle_at(t));
  if (traj.rate) {
    out.rate.emplace();
    for (double t : out.times) out.rate->push_back(traj.rate_at(t));
  }
  return out;
}

std::string_view to_string(RiseConvention convention) {
  return convention == RiseConvention::kTenToNinety ? "10-90" : "0-100";
}

StepResponseMetrics step_metrics(const JointTrajectory& traj, double steady_time,
                                 double settle_band, RiseConvention convention) {
  require_valid(traj);
  if (!(settle_band > 0.0 && settle_band < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "settle band must be in (0, 0.5)");
  }
  const double t0 = traj.times.front();
  if (steady_time < t0 - kGridTol || steady_time > traj.times.back() + kGridTol) {
    throw Error(ErrorCode::kInvalidArgument, "steady time outside trajectory");
  }
  steady_time = std::clamp(steady_time, t0, traj.times.back());

  StepResponseMetrics m;
  m.initial_value = traj.angle.front();
  m.final_value = traj.angle_at(steady_time);
  m.steady_assumed_at = steady_time - t0;
  m.settle_band = settle_band;
  m.convention = convention;
  const double step = m.final_value - m.initial_value;
  if (std::abs(step) < 1e-12) {
    throw Error(ErrorCode::kNoStep, "initial and final values coincide");
  }

  // Normalized response up to the steady time, ending exactly at u = 1.
  std::vector<double> t, u;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] >= steady_time - kGridTol * std::max(1.0, steady_time)) break;
    t.push_back(traj.times[i] - t0);
    u.push_back((traj.angle[i] - m.initial_value) / step);
  }
  t.push_back(steady_time - t0);
  u.push_back(1.0);

  auto first_crossing = [&](double level) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k] >= level) {
        if (k == 0) return t[0];
        return t[k - 1] + (level - u[k - 1]) / (u[k] - u[k - 1]) * (t[k] - t[k - 1]);
      }
    }
    return t.back();
  };
  if (convention == RiseConvention::kTenToNinety) {
    m.rise_time = first_crossing(0.9) - first_crossing(0.1);
  } else {
    m.rise_time = first_crossing(1.0) - t.front();
  }

  const double peak = *std::max_element(u.begin(), u.end());
  m.overshoot = std::max(0.0, peak - 1.0) * 100.0;

  std::optional<std::size_t> last_out;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (std::abs(u[k] - 1.0) > settle_band) last_out = k;
  }
  if (!last_out) {
    m.settling_time = 0.0;
  } else {
    const std::size_t k = *last_out;  // k + 1 exists: the last point is u = 1
    const double level = u[k] > 1.0 ? 1.0 + settle_band : 1.0 - settle_band;
    m.settling_time =
        t[k] + (level - u[k]) / (u[k + 1] - u[k]) * (t[k + 1] - t[k]);
  }
  return m;
}

void write_metrics_text(const StepResponseMetrics& m, std::ostream& out) {
  out << "rise_time_s=" << format_fixed(m.rise_time, 4) << '\n'
      << "settling_time_s=" << format_fixed(m.settling_time, 4) << '\n'
      << "overshoot_pct=" << format_fixed(m.overshoot, 4) << '\n'
      << "initial_deg=" << format_fixed(rad2deg(m.initial_value), 4) << '\n'
      << "final_deg=" << format_fixed(rad2deg(m.final_value), 4) << '\n'
      << "steady_assumed_at_s=" << format_fixed(m.steady_assumed_at, 4) << '\n'
      << "settle_band=" << format_fixed(m.settle_band, 4) << '\n'
      << "rise_convention=" << to_string(m.convention) << '\n';
}

void write_metrics_json(const StepResponseMetrics& m, std::ostream& out) {
  out << "{\"rise_time_s\": " << format_fixed(m.rise_time, 4)
      << ", \"settling_time_s\": " << format_fixed(m.settling_time, 4)
      << ", \"overshoot_pct\": " << format_fixed(m.overshoot, 4)
      << ", \"initial_deg\": " << format_fixed(rad2deg(m.initial_value), 4)
      << ", \"final_deg\": " << format_fixed(rad2deg(m.final_value), 4)
      << ", \"steady_assumed_at_s\": " << format_fixed(m.steady_assumed_at, 4)
      << ", \"settle_band\": " << format_fixed(m.settle_band, 4)
      << ", \"rise_convention\": \"" << to_string(m.convention) << "\"}\n";
}

// ---------------------------------------------------------------------------
// Second-order surrogate

double second_order_response(double zeta, double wn, double t) {
  const double s = std::sqrt(1.0 - zeta * zeta);
  const double wd = wn * s;
  return 1.0 - std::exp(-zeta * wn * t) *
                   (std::cos(wd * t) + zeta / s * std::sin(wd * t));
}

double second_order_rate(double zeta, double wn, double t) {
  const double s = std::sqrt(1.0 - zeta * zeta);
  return wn / s * std::exp(-zeta * wn * t) * std::sin(wn * s * t);
}

double damping_from_overshoot(double overshoot_percent) {
  const double l = std::log(overshoot_percent / 100.0);
  return -l / std::sqrt(kPi * kPi + l * l);
}

namespace {

struct ContinuousMetrics {
  double overshoot;  // percent, against y(horizon)
  double rise;
  bool peak_inside;
};

// Closed-form metrics of the unit response measured against y(horizon).
ContinuousMetrics continuous_metrics(double zeta, double wn, double horizon,
                                     RiseConvention convention) {
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  const double tp = kPi / wd;
  const double f = second_order_response(zeta, wn, horizon);
  ContinuousMetrics m{};
  m.peak_inside = tp < horizon;
  const double peak_t = std::min(tp, horizon);
  m.overshoot = std::max(0.0, second_order_response(zeta, wn, peak_t) / f - 1.0) * 100.0;
  // y is increasing on [0, tp]; bisect for the first crossing of level * f.
  auto cross = [&](double level) {
    double lo = 0.0, hi = peak_t;
    if (second_order_response(zeta, wn, hi) < level * f) return hi;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * peak_t; ++i) {
      const double mid = 0.5 * (lo + hi);
      (second_order_response(zeta, wn, mid) < level * f ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  m.rise = convention == RiseConvention::kTenToNinety ? cross(0.9) - cross(0.1)
                                                      : cross(1.0);
  return m;
}

// Natural frequency matching the rise time for a given damping ratio.
std::optional<double> fit_frequency(double zeta, double rise, double horizon,
                                    RiseConvention convention) {
  // Slowest response that still peaks inside the horizon.
  const double w_slow = kPi / (horizon * std::sqrt(1.0 - zeta * zeta)) * (1.0 + 1e-9);
  double lo = std::log(w_slow), hi = std::log(w_slow * 1e6);
  if (continuous_metrics(zeta, std::exp(lo), horizon, convention).rise < rise) {
    return std::nullopt;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = continuous_metrics(zeta, std::exp(mid), horizon, convention).rise;
    (r > rise ? lo : hi) = mid;
    if (std::abs(r - rise) < 1e-9 * rise && hi - lo < 1e-15) break;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

SecondOrderFit synth_second_order(double overshoot_percent, double rise_time,
                                  double duration, double dt,
                                  RiseConvention convention, double step) {
  if (!(overshoot_percent > 0.0 && overshoot_percent < 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "overshoot must be in (0, 100)");
  }
  if (!(rise_time > 0.0 && duration > rise_time && dt > 0.0 && dt < duration)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < rise < duration, 0 < dt");
  }

  auto overshoot_at = [&](double zeta) -> std::optional<double> {
    const auto wn = fit_frequency(zeta, rise_time, duration, convention);
    if (!wn) return std::nullopt;
    return continuous_metrics(zeta, *wn, duration, convention).overshoot;
  };

  // Overshoot falls with damping; widen a bracket outward from the
  // infinite-horizon value. Past some damping the rise time forces the peak
  // beyond the horizon; the overshoot tends to 0 at that boundary, so an
  // infeasible upper probe is pulled back towards the last feasible one.
  const double z0 = damping_from_overshoot(overshoot_percent);
  double z_lo = z0, z_hi = z0;
  double z_feasible = 0.0;
  std::optional<double> z_infeasible;
  bool found_lo = false, found_hi = false;
  for (int i = 0; i < 200 && !(found_lo && found_hi); ++i) {
    if (!found_lo && i < 60) {
      const auto os = overshoot_at(z_lo);
      if (os && *os >= overshoot_percent) found_lo = true;
      else z_lo *= 0.9;
    }
    if (!found_hi) {
      const auto os = overshoot_at(z_hi);
      if (os && *os <= overshoot_percent) {
        found_hi = true;
      } else {
        if (os) z_feasible = z_hi;
        else z_infeasible = z_hi;
        z_hi = z_infeasible ? 0.5 * (z_feasible + *z_infeasible) : 1.0 - 0.9 * (1.0 - z_hi);
      }
    }
  }
  if (!found_lo || !found_hi) {
    throw Error(ErrorCode::kUnreachable,
                "no underdamped response has this overshoot and rise time "
                "within the given duration");
  }
  double zeta = z_lo == z_hi ? z_lo : 0.5 * (z_lo + z_hi);
  for (int i = 0; i < 200 && z_lo != z_hi; ++i) {
    const auto os = overshoot_at(zeta);
    if (!os) {
      throw Error(ErrorCode::kUnreachable, "rise time not reachable");
    }
    if (std::abs(*os - overshoot_percent) < 1e-10) break;
    (*os > overshoot_percent ? z_lo : z_hi) = zeta;
    zeta = 0.5 * (z_lo + z_hi);
  }
  const double wn = *fit_frequency(zeta, rise_time, duration, convention);
  const auto cm = continuous_metrics(zeta, wn, duration, convention);

  SecondOrderFit fit;
  fit.damping_ratio = zeta;
  fit.natural_frequency = wn;
  fit.amplitude = step / second_order_response(zeta, wn, duration);
  fit.overshoot = cm.overshoot;
  fit.rise_time = cm.rise;

  const auto intervals = static_cast<std::size_t>(std::llround(duration / dt));
  auto& traj = fit.trajectory;
  traj.rate.emplace();
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = i == intervals ? duration
                                    : duration * static_cast<double>(i) /
                                          static_cast<double>(intervals);
    traj.times.push_back(t);
    traj.angle.push_back(fit.amplitude * second_order_response(zeta, wn, t));
    traj.rate->push_back(fit.amplitude * second_order_rate(zeta, wn, t));
  }
  return fit;
}

// ---------------------------------------------------------------------------

void write_trajectory_csv(const JointTrajectory& traj, std::ostream& out) {
  out << "t,angle_deg,rate_deg_s\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_fixed(traj.times[i], 9) << ','
        << format_fixed(rad2deg(traj.angle[i]), 9) << ',';
    if (traj.rate) out << format_fixed(rad2deg((*traj.rate)[i]), 9);
    out << '\n';
  }
}

JointTrajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool header = false;
  JointTrajectory traj;
  bool any_rate = false, any_missing_rate = false;
  std::vector<double> rate;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (!header) {
      if (v != "t,angle_deg,rate_deg_s" && v != "t,angle_deg") {
        throw Error(ErrorCode::kParseError, "unexpected trajectory header");
      }
      header = true;
      continue;
    }
    const auto f = split(v, ',');
    double t = 0, a = 0, r = 0;
    if (f.size() < 2 || f.size() > 3 || !parse_double(f[0], t) ||
        !parse_double(f[1], a)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": malformed trajectory row");
    }
    traj.times.push_back(t);
    traj.angle.push_back(deg2rad(a));
    if (f.size() == 3 && !trim(f[2]).empty()) {
      if (!parse_double(f[2], r)) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": bad rate");
      }
      rate.push_back(deg2rad(r));
      any_rate = true;
    } else {
      rate.push_back(0.0);
      any_missing_rate = true;
    }
  }
  if (traj.times.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "trajectory has no samples");
  }
  if (any_rate && any_missing_rate) {
    throw Error(ErrorCode::kParseError, "rate column partially filled");
  }
  if (any_rate) traj.rate = std::move(rate);
  traj.validate();
  return traj;
}

}  // namespace bioright
