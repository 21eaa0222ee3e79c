#include "proxnet/engine.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace proxnet {

RelaxationSchedule RelaxationSchedule::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("relaxation must be positive");
  RelaxationSchedule s;
  s.mode_ = Mode::constant;
  s.c_ = c;
  s.lo_ = 0.0;
  s.hi_ = std::numeric_limits<double>::infinity();
  return s;
}

RelaxationSchedule RelaxationSchedule::theorem1_ii_constant(double c,
                                                            double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(c > 0.0 && c < 1.0 / alpha))
    throw std::invalid_argument("relaxation must lie in (0, 1/alpha)");
  RelaxationSchedule s;
  s.mode_ = Mode::theorem1_ii;
  s.c_ = c;
  s.alpha_ = alpha;
  s.lo_ = 0.0;
  s.hi_ = 1.0 / alpha;
  return s;
}

RelaxationSchedule RelaxationSchedule::theorem1_ii_decay(double d, double alpha,
                                                         double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(d > 0.0)) throw std::invalid_argument("decay constant must be positive");
  if (!(eps > 0.0 && 2.0 * eps < 1.0 / alpha))
    throw std::invalid_argument("clipping margin too large");
  RelaxationSchedule s;
  s.mode_ = Mode::theorem1_ii;
  s.d_ = d;
  s.alpha_ = alpha;
  s.eps_ = eps;
  s.lo_ = eps;
  s.hi_ = 1.0 / alpha - eps;
  return s;
}

RelaxationSchedule RelaxationSchedule::theorem_g(double c, double alpha,
                                                 double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
  const double hi = (1.0 - eps) * (eps + 1.0 / alpha);
  if (!(eps > 0.0 && c >= eps && c <= hi))
    throw std::invalid_argument(
        "relaxation must lie in [eps, (1-eps)(eps + 1/alpha)]");
  RelaxationSchedule s;
  s.mode_ = Mode::theorem_g;
  s.c_ = c;
  s.alpha_ = alpha;
  s.eps_ = eps;
  s.lo_ = eps;
  s.hi_ = hi;
  return s;
}

double RelaxationSchedule::lambda(long n) const {
  if (mode_ == Mode::theorem1_ii && d_ > 0.0) {
    const double v = 1.0 / alpha_ - d_ / static_cast<double>(n + 1);
    return std::min(std::max(v, lo_), hi_);
  }
  return c_;
}

namespace {

// step_map applies the (possibly iteration-varying) network at index n.  The
// trace records the residual of step_map, while convergence is decided by
// stop_residual (these differ only in the perturbed regime, where the limit
// network decides convergence).
void run_loop(const Vector& x0, const RelaxationSchedule& schedule,
              const StopCriteria& stop, const Vector* x_ref,
              const std::function<Vector(long, const Vector&)>& step_map,
              const std::function<double(const Vector&)>& stop_residual,
              Vector& x_out, IterationTrace& trace) {
  Vector x = x0;
  long n = 0;
  while (true) {
    if (!x.allFinite() || x.norm() >= stop.divergence_norm) {
      trace.status = RunStatus::diverged;
      break;
    }
    const double lam = schedule.lambda(n);
    std::optional<double> dist;
    if (x_ref) dist = (x - *x_ref).norm();
    if (stop_residual(x) <= stop.tol) {
      const double res = (step_map(n, x) - x).norm();
      trace.rows.push_back({n, lam, 0.0, res, x.norm(), dist});
      trace.status = RunStatus::converged;
      break;
    }
    if (n >= stop.max_iter) {
      trace.status = RunStatus::max_iterations;
      break;
    }
    const Vector tx = step_map(n, x);
    const Vector x_next = x + lam * (tx - x);
    trace.rows.push_back(
        {n, lam, (x_next - x).norm(), (tx - x).norm(), x.norm(), dist});
    x = x_next;
    ++n;
  }
  x_out = x;
}

}  // namespace

IterateResult iterate(const Network& net, const Vector& x0,
                      const RelaxationSchedule& schedule,
                      const StopCriteria& stop, const Vector* x_ref) {
  if (x0.size() != net.dim_in())
    throw std::invalid_argument("iterate: bad initial point dimension");
  IterateResult result;
  run_loop(
      x0, schedule, stop, x_ref,
      [&](long, const Vector& x) { return net.forward(x); },
      [&](const Vector& x) { return (net.forward(x) - x).norm(); }, result.x,
      result.trace);
  return result;
}

PerturbationSchedule PerturbationSchedule::ones(const Network& net,
                                                Decay decay) {
  if (decay.c_omega < 0.0 || decay.c_rho < 0.0 || decay.c_eta < 0.0 ||
      decay.c_nu < 0.0)
    throw std::invalid_argument("decay constants must be >= 0");
  if (decay.c_rho > 1.0)
    throw std::invalid_argument("activation decay constant must be <= 1");
  PerturbationSchedule p;
  p.decay_ = decay;
  for (const Layer& l : net.layers()) {
    const auto rows = l.w.rows();
    const auto cols = l.w.cols();
    // spectral norm of the all-ones matrix is sqrt(rows * cols)
    p.dirs_w_.push_back(Matrix::Ones(rows, cols) /
                        std::sqrt(static_cast<double>(rows * cols)));
    p.dirs_b_.push_back(Vector::Ones(rows) /
                        std::sqrt(static_cast<double>(rows)));
  }
  return p;
}

PerturbationSchedule PerturbationSchedule::random(const Network& net,
                                                  Decay decay,
                                                  std::uint64_t seed) {
  PerturbationSchedule p = ones(net, decay);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < p.dirs_w_.size(); ++i) {
    Matrix d(p.dirs_w_[i].rows(), p.dirs_w_[i].cols());
    for (Eigen::Index r = 0; r < d.rows(); ++r)
      for (Eigen::Index c = 0; c < d.cols(); ++c) d(r, c) = normal(rng);
    p.dirs_w_[i] = d / spectral_norm(d);
    Vector e(p.dirs_b_[i].size());
    for (Eigen::Index r = 0; r < e.size(); ++r) e(r) = normal(rng);
    p.dirs_b_[i] = e / e.norm();
  }
  return p;
}

double PerturbationSchedule::omega(long n) const {
  const double q = static_cast<double>(n + 1);
  return decay_.c_omega / (q * q);
}
double PerturbationSchedule::rho(long n) const {
  const double q = static_cast<double>(n + 1);
  return decay_.c_rho / (q * q);
}
double PerturbationSchedule::eta(long n) const {
  const double q = static_cast<double>(n + 1);
  return decay_.c_eta / (q * q);
}
double PerturbationSchedule::nu(long n) const {
  const double q = static_cast<double>(n + 1);
  return decay_.c_nu / (q * q);
}

Matrix PerturbationSchedule::weight_at(const Network& net, int layer,
                                       long n) const {
  return net.layer(layer).w + omega(n) * dirs_w_[layer];
}

Vector PerturbationSchedule::bias_at(const Network& net, int layer,
                                     long n) const {
  return net.layer(layer).b + nu(n) * dirs_b_[layer];
}

Vector PerturbationSchedule::apply_layer(const Network& net, int layer, long n,
                                         const Vector& x) const {
  const Vector y =
      net.layer(layer).r.apply(weight_at(net, layer, n) * x +
                               bias_at(net, layer, n));
  return (1.0 - rho(n)) * y;
}

BoundSequences bound_sequences(const Network& net,
                               const PerturbationSchedule& perturb,
                               long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const int m = net.num_layers();
  BoundSequences b;
  b.chi.assign(m, std::vector<double>(horizon));
  b.zeta.assign(m, std::vector<double>(horizon));
  b.tau.assign(m, std::vector<double>(horizon));
  b.theta.assign(m, std::vector<double>(horizon));
  b.tau_partial_sums.assign(m, std::vector<double>(horizon));

  // prefix products ||W_i .. W_1|| (norm products) and bias chains
  std::vector<double> w_prod(m + 1, 1.0);
  for (int i = 0; i < m; ++i) w_prod[i + 1] = w_prod[i] * net.weight_norm(i);
  std::vector<double> bias_chain(m + 1, 0.0);  // sum_j ||b_j|| prod_{k>j}||W_k||
  for (int i = 1; i <= m; ++i)
    bias_chain[i] = net.output_norm_bound(1, i, 0.0);

  for (long n = 0; n < horizon; ++n) {
    for (int i = 0; i < m; ++i) {
      const double w_pert_norm = spectral_norm(perturb.weight_at(net, i, n));
      const double b_pert_norm = perturb.bias_at(net, i, n).norm();
      b.chi[i][n] = perturb.rho(n) * w_pert_norm + perturb.omega(n);
      b.zeta[i][n] =
          perturb.rho(n) * b_pert_norm + perturb.eta(n) + perturb.nu(n);
      if (i == 0) {
        b.tau[i][n] = b.chi[i][n];
        b.theta[i][n] = b.zeta[i][n];
      } else {
        const double factor = net.weight_norm(i) + b.chi[i][n];
        b.tau[i][n] = factor * b.tau[i - 1][n] + b.chi[i][n] * w_prod[i];
        b.theta[i][n] = factor * b.theta[i - 1][n] +
                        b.chi[i][n] * bias_chain[i] + b.zeta[i][n];
      }
      b.tau_partial_sums[i][n] =
          (n > 0 ? b.tau_partial_sums[i][n - 1] : 0.0) + b.tau[i][n];
    }
  }
  return b;
}

PerturbedResult iterate_perturbed(const Network& net,
                                  const PerturbationSchedule& perturb,
                                  const Vector& x0,
                                  const RelaxationSchedule& schedule,
                                  const StopCriteria& stop,
                                  const Vector* x_ref) {
  if (x0.size() != net.dim_in())
    throw std::invalid_argument("iterate_perturbed: bad initial point dim");
  PerturbedResult result;
  run_loop(
      x0, schedule, stop, x_ref,
      [&](long n, const Vector& x) {
        Vector y = x;
        for (int i = 0; i < net.num_layers(); ++i)
          y = perturb.apply_layer(net, i, n, y);
        return y;
      },
      // convergence is judged against the unperturbed limit map
      [&](const Vector& x) { return (net.forward(x) - x).norm(); }, result.x,
      result.trace);
  const long horizon =
      std::max<long>(1, static_cast<long>(result.trace.rows.size()));
  result.bounds = bound_sequences(net, perturb, horizon);
  return result;
}

double fejer_check(const IterationTrace& trace) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    if (!trace.rows[k - 1].dist_ref || !trace.rows[k].dist_ref)
      throw std::invalid_argument("fejer_check needs a reference point");
    const double inc = *trace.rows[k].dist_ref - *trace.rows[k - 1].dist_ref;
    if (!any || inc > worst) worst = inc;
    any = true;
  }
  return any ? worst : 0.0;
}

namespace {
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
  os << "n,lambda,step_norm,residual,x_norm,dist_ref\n";
  for (const TraceRow& r : trace.rows) {
    os << r.n << ',' << fmt(r.lambda) << ',' << fmt(r.step_norm) << ','
       << fmt(r.residual) << ',' << fmt(r.x_norm) << ',';
    if (r.dist_ref) os << fmt(*r.dist_ref);
    os << '\n';
  }
  os << "# status=" << to_string(trace.status) << '\n';
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iterations: return "max_iterations";
    case RunStatus::diverged: return "diverged";
  }
  return "?";
}

}  // namespace proxnet
