#pragma once

#include <cstddef>
#include <vector>

#include "beltrami/frames.hpp"

namespace beltrami {

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.5;
  double initial_step = 0.0;   // 0: choose automatically
  double max_radius = 1e6;     // leaving |coordinate| > max_radius counts as a guard exit
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;  // largest accepted scaled error
};

/// Integrated trajectory of dx/dt = w(x). theta/L_theta are sampled at
/// accepted steps when a coordinate triple is attached.
struct Streamline {
  std::vector<double> times;
  std::vector<Vec3> points;
  std::vector<double> theta_values;
  std::vector<double> L_theta_values;
  StepStats stats;
  bool exited_domain = false;  // guard exit truncated the trace
  double t_final = 0.0;

  bool has_invariants() const { return !theta_values.empty(); }
};

/// Embedded Dormand-Prince RK45 with PI step control. Local error per
/// step is kept under atol + rtol * |x|. A guard exit truncates the trace
/// (local fields: leaving the chart is expected); step underflow throws.
Streamline trace_streamline(const VectorField& w, const Vec3& x0, double t_end,
                            const StepControl& ctrl = {}, const OrthoTriple* invariants = nullptr);

struct DriftReport {
  double theta_drift = 0.0;
  double L_drift = 0.0;
};

/// max |theta(t) - theta(0)| and |L_theta(t) - L_theta(0)| over the trace.
DriftReport invariant_drift(const Streamline& s);

struct ObservableSample {
  double t = 0.0;
  double f = 0.0;
  double bracket_rate = 0.0;  // {f, theta, L_theta} = hhat^-1 grad f . grad theta x grad L_theta
  double chain_rate = 0.0;    // df/dt on the trajectory: grad f . w
  double fd_slope = 0.0;      // slope of the sampled f-series (NaN at the ends)
};

struct ObservableSeries {
  std::vector<ObservableSample> samples;
  /// median |chain_rate - bracket_rate|: the bracket identity along the flow
  double median_bracket_mismatch = 0.0;
  /// median |fd_slope - bracket_rate| over interior samples
  double median_fd_mismatch = 0.0;
  /// tolerance for the fd check, scaled by ctrl: differentiating the
  /// sampled series amplifies the integrator's per-step noise by ~1/step
  double fd_tolerance = 0.0;
  bool consistent = false;
  Streamline trace;
};

/// Evolves an observable along the flow and checks df/dt against the
/// Nambu bracket built from the invariants theta and L_theta.
ObservableSeries evolve_observable(const ScalarField& f, const OrthoTriple& t,
                                   const VectorField& w, const Vec3& x0, double t_end,
                                   const StepControl& ctrl = {});

}  // namespace beltrami
