#pragma once

#include <string>

namespace graylap {

// Normalized integral of exp(-1/(s(1-s))) from 0 to s. Read from a cached
// table with monotone cubic interpolation; B(1-s) = 1 - B(s) holds exactly.
// Arguments outside [0,1] are clamped and a warning is printed once.
double bump_schedule(double s);

// dB/ds.
double bump_derivative(double s);

// Number of table intervals.
inline constexpr int kBumpNodes = 4096;

enum class ScheduleKind { constant, bump, delayed_bump, linear };

std::string to_string(ScheduleKind k);
ScheduleKind parse_schedule_kind(const std::string& s);

// Weight of one Hamiltonian component as a function of the anneal
// parameter s. bump is delayed_bump over [0, 1]; every ramp is 0 before its
// window and 1 after it.
class Schedule {
 public:
  static Schedule constant(double value = 1.0);
  static Schedule bump();
  static Schedule delayed_bump(double s0, double s1);
  static Schedule linear(double s0 = 0.0, double s1 = 1.0);

  ScheduleKind kind() const { return kind_; }
  double start() const { return s0_; }
  double end() const { return s1_; }
  double value() const { return value_; }

  double operator()(double s) const;
  std::string describe() const;

 private:
  Schedule(ScheduleKind k, double s0, double s1, double v)
      : kind_(k), s0_(s0), s1_(s1), value_(v) {}

  ScheduleKind kind_;
  double s0_;
  double s1_;
  double value_;
};

}  // namespace graylap
