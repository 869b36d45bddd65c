#include "graylap/schedule.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "graylap/types.hpp"

namespace graylap {
namespace {

double integrand(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = integrand(lm), frm = integrand(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(double a, double b, double tol) {
  const double fa = integrand(a), fb = integrand(b), fm = integrand(0.5 * (a + b));
  return adaptive_simpson(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
}

struct BumpTable {
  // Nodes s_i = i / kBumpNodes for i <= kBumpNodes / 2; the upper half is
  // the mirror image.
  std::vector<double> value, slope;
  double norm = 0.0;

  BumpTable() {
    const int half = kBumpNodes / 2;
    const double h = 1.0 / kBumpNodes;
    value.assign(half + 1, 0.0);
    slope.assign(half + 1, 0.0);
    for (int i = 1; i <= half; ++i)
      value[i] = value[i - 1] + integrate((i - 1) * h, i * h, 1e-14 * h);
    norm = 2.0 * value[half];
    for (int i = 0; i <= half; ++i) {
      value[i] /= norm;
      slope[i] = integrand(i * h) / norm;
    }
    value[half] = 0.5;
  }

  // Lower half only, s in [0, 1/2].
  double eval(double s) const {
    const double x = s * kBumpNodes;
    const int i = std::min(static_cast<int>(x), kBumpNodes / 2 - 1);
    const double t = x - i, h = 1.0 / kBumpNodes;
    const double y0 = value[i], y1 = value[i + 1];
    double m0 = slope[i] * h, m1 = slope[i + 1] * h;
    const double d = y1 - y0;
    if (d <= 0.0) {
      m0 = m1 = 0.0;
    } else {
      const double a = m0 / d, b = m1 / d, r = a * a + b * b;
      if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        m0 *= tau;
        m1 *= tau;
      }
    }
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  }
};

const BumpTable& table() {
  static const BumpTable t;
  return t;
}

std::atomic<bool> g_warned{false};

double clamp_unit(double s) {
  if (s < 0.0 || s > 1.0) {
    if (!g_warned.exchange(true))
      std::fprintf(stderr,
                   "warning: bump_schedule(%g) outside [0,1]; clamping\n", s);
    return std::clamp(s, 0.0, 1.0);
  }
  return s;
}

double bump_unchecked(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  if (s <= 0.5) return table().eval(s);
  return 1.0 - table().eval(1.0 - s);
}

}  // namespace

double bump_schedule(double s) { return bump_unchecked(clamp_unit(s)); }

double bump_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return integrand(s) / table().norm;
}

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::bump: return "bump";
    case ScheduleKind::delayed_bump: return "delayed_bump";
    case ScheduleKind::linear: return "linear";
  }
  return "?";
}

ScheduleKind parse_schedule_kind(const std::string& s) {
  if (s == "constant") return ScheduleKind::constant;
  if (s == "bump") return ScheduleKind::bump;
  if (s == "delayed_bump" || s == "delayed-bump") return ScheduleKind::delayed_bump;
  if (s == "linear") return ScheduleKind::linear;
  throw ConfigError("unknown schedule '" + s +
                    "' (expected constant, bump, delayed_bump or linear)");
}

Schedule Schedule::constant(double value) {
  return Schedule(ScheduleKind::constant, 0.0, 0.0, value);
}

Schedule Schedule::bump() { return Schedule(ScheduleKind::bump, 0.0, 1.0, 1.0); }

Schedule Schedule::delayed_bump(double s0, double s1) {
  if (!(s1 > s0)) throw ContractError("schedule window needs s1 > s0");
  return Schedule(ScheduleKind::delayed_bump, s0, s1, 1.0);
}

Schedule Schedule::linear(double s0, double s1) {
  if (!(s1 > s0)) throw ContractError("schedule window needs s1 > s0");
  return Schedule(ScheduleKind::linear, s0, s1, 1.0);
}

double Schedule::operator()(double s) const {
  switch (kind_) {
    case ScheduleKind::constant: return value_;
    case ScheduleKind::linear:
      return std::clamp((s - s0_) / (s1_ - s0_), 0.0, 1.0);
    case ScheduleKind::bump:
    case ScheduleKind::delayed_bump:
      return bump_unchecked((s - s0_) / (s1_ - s0_));
  }
  return 0.0;
}

std::string Schedule::describe() const {
  char buf[96];
  switch (kind_) {
    case ScheduleKind::constant:
      std::snprintf(buf, sizeof buf, "constant(%g)", value_);
      break;
    default:
      std::snprintf(buf, sizeof buf, "%s[%g,%g]", to_string(kind_).c_str(), s0_,
                    s1_);
  }
  return buf;
}

}  // namespace graylap
