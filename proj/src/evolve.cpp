#include "graylap/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace graylap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using CVec = std::vector<cplx>;

double* raw(CVec& v) { return reinterpret_cast<double*>(v.data()); }
const double* raw(const CVec& v) { return reinterpret_cast<const double*>(v.data()); }

double vec_norm(const CVec& v) {
  double re, im;
  kernels::active().dot(raw(v), raw(v), v.size(), &re, &im);
  return std::sqrt(re);
}

void axpy(cplx a, const CVec& x, CVec& y) {
  kernels::active().axpy(a.real(), a.imag(), raw(x), raw(y), x.size());
}

// H(s) = sum_i w_i(s) H_i with every H_i compiled once.
class Engine {
 public:
  Engine(const HamiltonianSchedule& hs, double total_time, double s_begin)
      : hs_(hs), total_(total_time), s_begin_(s_begin) {
    for (const auto& p : hs.components()) {
      ops_.emplace_back(p.op);
      norms_.push_back(p.op.norm_bound());
    }
  }

  std::size_t dim() const { return std::size_t{1} << hs_.width(); }
  std::size_t size() const { return ops_.size(); }
  double s_of(double t) const { return s_begin_ + t / total_; }
  std::vector<double> weights_at_time(double t) const {
    return hs_.weights(s_of(t));
  }

  // out = scale * sum_i c_i H_i in
  void apply(const std::vector<double>& c, const CVec& in, CVec& out,
             cplx scale) const {
    std::fill(out.begin(), out.end(), cplx{0.0});
    for (std::size_t i = 0; i < ops_.size(); ++i)
      if (c[i] != 0.0) ops_[i].apply_add(in.data(), out.data(), scale * c[i]);
  }

  double norm_bound(const std::vector<double>& c) const {
    double n = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) n += std::abs(c[i]) * norms_[i];
    return n;
  }

  std::string dominant(double t) const {
    const auto w = weights_at_time(t);
    std::size_t best = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (std::abs(w[i]) * norms_[i] > std::abs(w[best]) * norms_[best]) best = i;
    std::ostringstream os;
    os << "'" << hs_.components()[best].label << "' (weight " << w[best]
       << ", norm bound " << norms_[best] << ")";
    return os.str();
  }

  double energy(double s, const CVec& psi, CVec& scratch) const {
    apply(hs_.weights(s), psi, scratch, 1.0);
    double re, im;
    kernels::active().dot(raw(psi), raw(scratch), psi.size(), &re, &im);
    return re;
  }

  const HamiltonianSchedule& schedule() const { return hs_; }
  double total_time() const { return total_; }

 private:
  const HamiltonianSchedule& hs_;
  double total_;
  double s_begin_;
  std::vector<CompiledOperator> ops_;
  std::vector<double> norms_;
};

// ------------------------------------------------------------ steppers

class Stepper {
 public:
  virtual ~Stepper() = default;
  // Attempts one step of size h from t. Returns the scaled error (<= 1
  // accepts) and leaves the candidate in `next`.
  virtual double attempt(double t, double h, const CVec& y, CVec& next) = 0;
  virtual int order() const = 0;
  virtual void accepted() {}
};

// Dormand-Prince 5(4) with first-same-as-last reuse.
class DormandPrince final : public Stepper {
 public:
  DormandPrince(const Engine& e, double rtol, double atol)
      : e_(e), rtol_(rtol), atol_(atol), n_(e.dim()) {
    for (auto& k : k_) k.assign(n_, 0.0);
    tmp_.assign(n_, 0.0);
    err_.assign(n_, 0.0);
  }

  int order() const override { return 5; }

  double attempt(double t, double h, const CVec& y, CVec& next) override {
    static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
         -5103.0 / 18656},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double e[7] = {71.0 / 57600,      0,          -71.0 / 16695,
                                    71.0 / 1920,       -17253.0 / 339200,
                                    22.0 / 525,        -1.0 / 40};
    const cplx mi(0.0, -1.0);
    if (!fsal_valid_ || fsal_t_ != t) rhs(t, y, k_[0]);
    for (int s = 1; s < 7; ++s) {
      tmp_ = y;
      for (int j = 0; j < s; ++j)
        if (a[s][j] != 0.0) axpy(h * a[s][j], k_[j], tmp_);
      rhs(t + c[s] * h, tmp_, k_[s]);
    }
    (void)mi;
    next = tmp_;  // stage 7 input is the 5th-order solution
    std::fill(err_.begin(), err_.end(), cplx{0.0});
    for (int j = 0; j < 7; ++j)
      if (e[j] != 0.0) axpy(h * e[j], k_[j], err_);
    pending_t_ = t + h;
    return vec_norm(err_) / (atol_ + rtol_ * std::max(1.0, vec_norm(next)));
  }

  void accepted() override {
    std::swap(k_[0], k_[6]);
    fsal_valid_ = true;
    fsal_t_ = pending_t_;
  }

  // The caller renormalized the state by 1/scale; the linear RHS follows.
  void rescale(double scale) {
    for (auto& v : k_[0]) v *= scale;
  }

  void invalidate() { fsal_valid_ = false; }

 private:
  void rhs(double t, const CVec& y, CVec& out) {
    e_.apply(e_.weights_at_time(t), y, out, cplx(0.0, -1.0));
  }

  const Engine& e_;
  double rtol_, atol_;
  std::size_t n_;
  CVec k_[7];
  CVec tmp_, err_;
  bool fsal_valid_ = false;
  double fsal_t_ = 0.0, pending_t_ = 0.0;
};

// Fourth-order commutator-free Magnus step,
//   exp(-ih(a2 H1 + a1 H2)) exp(-ih(a1 H1 + a2 H2)),
// a1,2 = 1/4 +- sqrt(3)/6 and H1,2 at the Gauss nodes. Errors come from
// step doubling. Exponentials are dense for small widths and Krylov
// otherwise.
class Magnus4 final : public Stepper {
 public:
  Magnus4(const Engine& e, double rtol, double atol, int dense_limit)
      : e_(e), rtol_(rtol), atol_(atol), n_(e.dim()) {
    dense_ = e.schedule().width() <= dense_limit;
    if (dense_) {
      for (const auto& p : e.schedule().components()) {
        cmats_.push_back(to_dense(p.op));
        if (cmats_.back().imag().cwiseAbs().maxCoeff() != 0.0) complex_ = true;
      }
      // real symmetric eigensolves are about four times cheaper
      if (!complex_)
        for (const auto& m : cmats_) mats_.push_back(m.real());
      if (!complex_) cmats_.clear();
    }
    half_.assign(n_, 0.0);
    full_.assign(n_, 0.0);
    diff_.assign(n_, 0.0);
  }

  int order() const override { return 4; }

  double attempt(double t, double h, const CVec& y, CVec& next) override {
    step(t, h, y, full_);
    step(t, 0.5 * h, y, half_);
    step(t + 0.5 * h, 0.5 * h, half_, next);
    for (std::size_t i = 0; i < n_; ++i) diff_[i] = next[i] - full_[i];
    return vec_norm(diff_) / 15.0 / (atol_ + rtol_);
  }

 private:
  void step(double t, double h, const CVec& y, CVec& out) {
    const double r3 = std::sqrt(3.0);
    const double a1 = 0.25 + r3 / 6.0, a2 = 0.25 - r3 / 6.0;
    const auto w1 = e_.weights_at_time(t + (0.5 - r3 / 6.0) * h);
    const auto w2 = e_.weights_at_time(t + (0.5 + r3 / 6.0) * h);
    std::vector<double> c1(w1.size()), c2(w1.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
      c1[i] = a1 * w1[i] + a2 * w2[i];
      c2[i] = a2 * w1[i] + a1 * w2[i];
    }
    CVec mid(n_);
    expmv(c1, h, y, mid);
    expmv(c2, h, mid, out);
  }

  // out = exp(-i h sum_i c_i H_i) in
  void expmv(const std::vector<double>& c, double h, const CVec& in,
             CVec& out) {
    if (dense_ && complex_) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_, n_);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0.0) m += c[i] * cmats_[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      const auto& v = es.eigenvectors();
      Eigen::Map<const Eigen::VectorXcd> x(in.data(), n_);
      Eigen::VectorXcd p = v.adjoint() * x;
      for (Eigen::Index k = 0; k < p.size(); ++k)
        p[k] *= std::polar(1.0, -h * es.eigenvalues()[k]);
      Eigen::Map<Eigen::VectorXcd>(out.data(), n_) = v * p;
      return;
    }
    if (dense_) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0.0) m += c[i] * mats_[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      const auto& v = es.eigenvectors();
      Eigen::Map<const Eigen::VectorXcd> x(in.data(), n_);
      Eigen::VectorXcd p = v.transpose().cast<cplx>() * x;
      for (Eigen::Index k = 0; k < p.size(); ++k)
        p[k] *= std::polar(1.0, -h * es.eigenvalues()[k]);
      Eigen::Map<Eigen::VectorXcd>(out.data(), n_) = v.cast<cplx>() * p;
      return;
    }
    krylov(c, h, in, out, 0);
  }

  void krylov(const std::vector<double>& c, double h, const CVec& in,
              CVec& out, int depth) {
    const int mmax = 48;
    const double tol = 0.05 * rtol_;
    const double beta0 = vec_norm(in);
    std::vector<CVec> q{in};
    for (auto& v : q[0]) v /= beta0;
    std::vector<double> alpha, beta;
    CVec w(n_);
    Eigen::VectorXcd coef;
    double err = 1.0;
    for (int j = 0; j < mmax; ++j) {
      e_.apply(c, q[j], w, 1.0);
      double re, im;
      kernels::active().dot(raw(q[j]), raw(w), n_, &re, &im);
      alpha.push_back(re);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : q) {
          kernels::active().dot(raw(b), raw(w), n_, &re, &im);
          axpy(-cplx(re, im), b, w);
        }
      const double b = vec_norm(w);
      const int m = static_cast<int>(alpha.size());
      if (m >= 4 || b < 1e-14 || j + 1 == mmax) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXcd ph(m);
        for (int i = 0; i < m; ++i)
          ph[i] = std::polar(1.0, -h * es.eigenvalues()[i]) *
                  es.eigenvectors()(0, i);
        coef = es.eigenvectors().cast<cplx>() * ph;
        err = b * std::abs(coef[m - 1]);
        if (err <= tol || b < 1e-14) break;
      }
      beta.push_back(b);
      q.push_back(w);
      for (auto& v : q.back()) v /= b;
    }
    if (err > tol) {
      if (depth > 30) throw NumericalError("Krylov exponential did not converge");
      CVec mid(n_);
      krylov(c, 0.5 * h, in, mid, depth + 1);
      krylov(c, 0.5 * h, mid, out, depth + 1);
      return;
    }
    std::fill(out.begin(), out.end(), cplx{0.0});
    for (Eigen::Index i = 0; i < coef.size(); ++i) axpy(beta0 * coef[i], q[i], out);
  }

  const Engine& e_;
  double rtol_, atol_;
  std::size_t n_;
  bool dense_ = false, complex_ = false;
  std::vector<Eigen::MatrixXd> mats_;
  std::vector<Eigen::MatrixXcd> cmats_;
  CVec half_, full_, diff_;
};

}  // namespace

// ------------------------------------------------------------ schedule

void HamiltonianSchedule::add(std::string label, Schedule schedule,
                              OperatorSum op) {
  if (op.width() != width_)
    throw ContractError("component '" + label + "' has width " +
                        std::to_string(op.width()) + ", schedule has " +
                        std::to_string(width_));
  parts_.push_back({std::move(label), schedule, std::move(op)});
}

std::vector<double> HamiltonianSchedule::weights(double s) const {
  std::vector<double> w;
  w.reserve(parts_.size());
  for (const auto& p : parts_) w.push_back(p.schedule(s));
  return w;
}

OperatorSum HamiltonianSchedule::at(double s) const {
  std::vector<OperatorSum::Term> terms;
  const auto w = weights(s);
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (w[i] == 0.0) continue;
    for (const auto& t : parts_[i].op.terms())
      terms.push_back({t.key, w[i] * t.coeff});
  }
  return OperatorSum(width_, std::move(terms));
}

std::string to_string(Propagator p) {
  return p == Propagator::rk45 ? "rk45" : "magnus4";
}

Propagator parse_propagator(const std::string& s) {
  if (s == "rk45" || s == "dopri5") return Propagator::rk45;
  if (s == "magnus4" || s == "cfm4") return Propagator::magnus4;
  throw ConfigError("unknown propagator '" + s + "' (expected rk45 or magnus4)");
}

double TraceSample::gap() const {
  return eigenvalues.size() >= 2 ? eigenvalues[1] - eigenvalues[0] : kNaN;
}

double SimulationTrace::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    if (s.eigenvalues.size() >= 2) g = std::min(g, s.gap());
  return g;
}

double SimulationTrace::final_overlap() const {
  return samples.empty() ? kNaN : samples.back().overlap;
}

std::string SimulationTrace::csv() const {
  std::size_t k = 0;
  for (const auto& s : samples) k = std::max(k, s.eigenvalues.size());
  std::ostringstream os;
  os.precision(12);
  os << "s,t,energy,overlap,norm_drift,gap";
  for (std::size_t i = 0; i < k; ++i) os << ",ev_" << i;
  os << "\n";
  for (const auto& s : samples) {
    os << s.s << "," << s.t << "," << s.energy << "," << s.overlap << ","
       << s.norm_drift << "," << s.gap();
    for (std::size_t i = 0; i < k; ++i)
      os << "," << (i < s.eigenvalues.size() ? s.eigenvalues[i] : kNaN);
    os << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------ evolve

EvolveResult evolve(const HamiltonianSchedule& hs, const StateVector& psi0,
                    double total_time, const EvolveControls& ctl) {
  if (psi0.width() != hs.width())
    throw ContractError("initial state width does not match the Hamiltonian");
  if (!(total_time > 0.0)) throw ContractError("evolution time must be positive");
  if (!(ctl.s_end > ctl.s_begin)) throw ContractError("need s_end > s_begin");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw ContractError("initial state is not normalized");
  if (ctl.target && ctl.target->width() != hs.width())
    throw ContractError("target state width mismatch");

  const double span_s = ctl.s_end - ctl.s_begin;
  const double t_end = span_s * total_time;
  const Engine engine(hs, total_time, ctl.s_begin);

  // Sample events: trace grid, spectrum grid and snapshots.
  struct Event {
    double s;
    bool spectrum;
    bool snapshot;
  };
  std::vector<Event> events;
  auto grid = [&](std::size_t n, bool spec) {
    for (std::size_t i = 0; i < n; ++i)
      events.push_back({ctl.s_begin + span_s * (n == 1 ? 1.0 : double(i) / double(n - 1)),
                        spec, false});
  };
  grid(std::max<std::size_t>(ctl.trace_points, 2), false);
  if (ctl.spectrum_k > 0) grid(std::max<std::size_t>(ctl.spectrum_points, 2), true);
  for (double s : ctl.snapshot_s)
    if (s >= ctl.s_begin - 1e-12 && s <= ctl.s_end + 1e-12)
      events.push_back({std::clamp(s, ctl.s_begin, ctl.s_end), false, true});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.s < b.s; });
  std::vector<Event> merged;
  for (const auto& e : events) {
    if (!merged.empty() && std::abs(merged.back().s - e.s) < 1e-12 * std::max(1.0, std::abs(e.s))) {
      merged.back().spectrum |= e.spectrum;
      merged.back().snapshot |= e.snapshot;
    } else {
      merged.push_back(e);
    }
  }

  std::unique_ptr<Stepper> stepper;
  DormandPrince* dp = nullptr;
  if (ctl.method == Propagator::rk45) {
    auto p = std::make_unique<DormandPrince>(engine, ctl.rtol, ctl.atol);
    dp = p.get();
    stepper = std::move(p);
  } else {
    stepper = std::make_unique<Magnus4>(engine, ctl.rtol, ctl.atol,
                                        ctl.magnus_width_limit);
  }

  EvolveResult res{SimulationTrace{}, psi0};
  auto& tr = res.trace;
  CVec y = psi0.amplitudes(), next(y.size()), scratch(y.size());
  double t = 0.0;
  double h = ctl.initial_step;
  if (h <= 0.0) {
    const double nb = std::max(engine.norm_bound(engine.weights_at_time(0.0)), 1e-300);
    h = std::min(t_end / 10.0, (ctl.method == Propagator::rk45 ? 0.05 : 0.5) / nb);
  }
  const double h_min = ctl.min_step * total_time;
  double err_prev = 1.0;
  const double k_exp = 1.0 / (stepper->order());

  auto record = [&](const Event& ev) {
    TraceSample smp;
    smp.s = ev.s;
    smp.t = t;
    smp.energy = engine.energy(ev.s, y, scratch);
    smp.norm_drift = tr.total_norm_drift;
    if (ctl.target) {
      double re, im;
      kernels::active().dot(ctl.target->raw(), raw(y), y.size(), &re, &im);
      smp.overlap = re * re + im * im;
    } else {
      smp.overlap = kNaN;
    }
    if (ev.spectrum) {
      try {
        smp.eigenvalues = instantaneous_spectrum(hs, ev.s, ctl.spectrum_k, ctl.eigen);
      } catch (const std::exception& ex) {
        tr.warnings.push_back("spectrum at s=" + std::to_string(ev.s) + ": " + ex.what());
      }
    }
    if (ev.snapshot)
      tr.snapshots.emplace_back(ev.s, StateVector::from_amplitudes(y, false));
    tr.samples.push_back(std::move(smp));
  };

  std::size_t ei = 0;
  for (; ei < merged.size() && merged[ei].s <= ctl.s_begin + 1e-15; ++ei) record(merged[ei]);

  while (ei < merged.size()) {
    const double t_target = (merged[ei].s - ctl.s_begin) * total_time;
    while (t < t_target - 1e-14 * std::max(1.0, t_target)) {
      const bool clipped = t + h >= t_target;
      const double hs_step = clipped ? t_target - t : h;
      const double err = stepper->attempt(t, hs_step, y, next);
      if (!std::isfinite(err))
        throw NumericalError("non-finite error estimate at s=" +
                             std::to_string(engine.s_of(t)) + "; dominant term " +
                             engine.dominant(t));
      if (err <= 1.0) {
        stepper->accepted();
        t = clipped ? t_target : t + hs_step;
        const double nrm = vec_norm(next);
        const double drift = std::abs(nrm - 1.0);
        tr.total_norm_drift += drift;
        tr.max_step_drift = std::max(tr.max_step_drift, drift);
        for (auto& v : next) v /= nrm;
        if (dp) dp->rescale(1.0 / nrm);
        std::swap(y, next);
        ++tr.accepted;
        tr.steps.emplace_back(t, hs_step);
        // PI control.
        const double e = std::max(err, 1e-10);
        double fac = 0.9 * std::pow(e, -0.7 * k_exp) * std::pow(err_prev, 0.4 * k_exp);
        fac = std::clamp(fac, 0.2, 5.0);
        if (!clipped || fac < 1.0) h = hs_step * fac;
        err_prev = e;
      } else {
        ++tr.rejected;
        if (dp) dp->invalidate();
        h = hs_step * std::max(0.2, 0.9 * std::pow(err, -k_exp));
      }
      if (h < h_min)
        throw NumericalError("step size underflow (h=" + std::to_string(h) +
                             ") at s=" + std::to_string(engine.s_of(t)) +
                             "; dominant term " + engine.dominant(t));
      if (tr.accepted + tr.rejected > ctl.max_steps)
        throw NumericalError("step budget exhausted at s=" +
                             std::to_string(engine.s_of(t)) + "; dominant term " +
                             engine.dominant(t));
    }
    record(merged[ei]);
    ++ei;
  }

  tr.drift_per_time = tr.total_norm_drift / t_end;
  if (tr.total_norm_drift > ctl.norm_tolerance)
    tr.warnings.push_back("accumulated norm drift " +
                          std::to_string(tr.total_norm_drift) +
                          " exceeds tolerance");
  res.final_state = StateVector::from_amplitudes(std::move(y), false);
  return res;
}

std::vector<double> instantaneous_spectrum(const HamiltonianSchedule& hs,
                                           double s, std::size_t k,
                                           const EigenOptions& opts) {
  const auto ep = lowest_eigenpairs(hs.at(s), k, false, opts);
  if (!ep.converged)
    throw NumericalError("eigensolver did not converge at s=" + std::to_string(s));
  return {ep.values.data(), ep.values.data() + ep.values.size()};
}

double ir_cutoff(double mass, double length, double hbar_c) {
  if (!(mass > 0.0) || !(length > 0.0))
    throw ContractError("ir_cutoff needs positive mass and length");
  const double p = 2.0 * std::numbers::pi * hbar_c / length;
  return p * p / (2.0 * mass);
}

double overlap(const StateVector& psi, const StateVector& phi) {
  if (psi.width() != phi.width()) throw ContractError("overlap width mismatch");
  double re, im;
  kernels::active().dot(phi.raw(), psi.raw(), psi.dim(), &re, &im);
  return re * re + im * im;
}

double energy(const StateVector& psi, const OperatorSum& h) {
  const auto hp = apply(h, psi);
  double re, im;
  kernels::active().dot(psi.raw(), hp.raw(), psi.dim(), &re, &im);
  return re;
}

}  // namespace graylap
