#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "proxnet/network.hpp"

namespace proxnet {

// Relaxation sequences (lambda_n) admissible for the convergence theorems.
class RelaxationSchedule {
 public:
  enum class Mode { constant, theorem1_ii, theorem_g };

  // lambda_n = c, no interval constraint beyond (0, infinity)
  static RelaxationSchedule constant(double c);
  // lambda_n = c with c in (0, 1/alpha)
  static RelaxationSchedule theorem1_ii_constant(double c, double alpha);
  // lambda_n = 1/alpha - d/(n+1), clipped to (eps, 1/alpha - eps)
  static RelaxationSchedule theorem1_ii_decay(double d, double alpha,
                                              double eps = 1e-3);
  // lambda_n = c with c in [eps, (1-eps)(eps + 1/alpha)]
  static RelaxationSchedule theorem_g(double c, double alpha,
                                      double eps = 1e-2);

  double lambda(long n) const;
  Mode mode() const { return mode_; }

 private:
  Mode mode_ = Mode::constant;
  double c_ = 1.0, d_ = 0.0, alpha_ = 1.0, eps_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;  // declared interval for the fault check
};

struct StopCriteria {
  double tol = 1e-10;
  long max_iter = 1000000;
  double divergence_norm = 1e12;
};

enum class RunStatus { converged, max_iterations, diverged };

struct TraceRow {
  long n;
  double lambda;
  double step_norm;
  double residual;
  double x_norm;
  std::optional<double> dist_ref;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::max_iterations;
};

struct IterateResult {
  Vector x;
  IterationTrace trace;
};

IterateResult iterate(const Network& net, const Vector& x0,
                      const RelaxationSchedule& schedule,
                      const StopCriteria& stop,
                      const Vector* x_ref = nullptr);

// Iteration-varying layer overrides with summable decay:
//   W_{i,n} = W_i + omega_n D_i,  b_{i,n} = b_i + nu_n e_i,
//   R_{i,n} = (1 - rho_n) R_i,
// with omega_n = c_omega/(n+1)^2 and likewise for rho, eta, nu.  The eta
// constant enters the deviation bounds only.
class PerturbationSchedule {
 public:
  struct Decay {
    double c_omega = 0.0, c_rho = 0.0, c_eta = 0.0, c_nu = 0.0;
  };

  // directions: normalized all-ones matrices/vectors
  static PerturbationSchedule ones(const Network& net, Decay decay);
  // seedable random unit-norm directions
  static PerturbationSchedule random(const Network& net, Decay decay,
                                     std::uint64_t seed);

  double omega(long n) const;
  double rho(long n) const;
  double eta(long n) const;
  double nu(long n) const;

  Matrix weight_at(const Network& net, int layer, long n) const;
  Vector bias_at(const Network& net, int layer, long n) const;
  // x -> (1 - rho_n) R_i(W_{i,n} x + b_{i,n})
  Vector apply_layer(const Network& net, int layer, long n,
                     const Vector& x) const;

 private:
  Decay decay_;
  std::vector<Matrix> dirs_w_;
  std::vector<Vector> dirs_b_;
};

// chi_{i,n} = rho_n ||W_{i,n}|| + omega_n, zeta_{i,n} = rho_n ||b_{i,n}|| +
// eta_n + nu_n, and the tau/theta recursion bounding the deviation of the
// perturbed layer compositions from the limit ones.
struct BoundSequences {
  // [layer][n], layers 0-based
  std::vector<std::vector<double>> chi, zeta, tau, theta;
  std::vector<std::vector<double>> tau_partial_sums;  // running sums of tau
};

BoundSequences bound_sequences(const Network& net,
                               const PerturbationSchedule& perturb,
                               long horizon);

struct PerturbedResult {
  Vector x;
  IterationTrace trace;
  BoundSequences bounds;
};

// Perturbed run; convergence is measured against the limit network T.
PerturbedResult iterate_perturbed(const Network& net,
                                  const PerturbationSchedule& perturb,
                                  const Vector& x0,
                                  const RelaxationSchedule& schedule,
                                  const StopCriteria& stop,
                                  const Vector* x_ref = nullptr);

// Largest increase of ||x_n - x_ref|| along the trace; <= 0 means the run
// was Fejer monotone with respect to x_ref.  Requires dist_ref columns.
double fejer_check(const IterationTrace& trace);

void write_trace_csv(const IterationTrace& trace, std::ostream& os);

const char* to_string(RunStatus s);

}  // namespace proxnet
