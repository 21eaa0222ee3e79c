#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "proxnet/certify.hpp"
#include "proxnet/config.hpp"
#include "proxnet/engine.hpp"
#include "proxnet/vi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 1;
constexpr int kExitNotCertified = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitMaxIter = 4;
constexpr int kExitResidual = 5;

int status_exit_code(proxnet::RunStatus s) {
  switch (s) {
    case proxnet::RunStatus::converged: return kExitOk;
    case proxnet::RunStatus::diverged: return kExitDiverged;
    case proxnet::RunStatus::max_iterations: return kExitMaxIter;
  }
  return kExitBadConfig;
}

struct CommonOpts {
  std::string config_path;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<long> max_iter;
};

proxnet::ExperimentConfig load(const CommonOpts& opts) {
  proxnet::ExperimentConfig cfg = proxnet::load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw proxnet::ConfigError("--tol must be > 0");
    cfg.stop.tol = *opts.tol;
  }
  if (opts.max_iter) {
    if (*opts.max_iter < 0)
      throw proxnet::ConfigError("--max-iter must be >= 0");
    cfg.stop.max_iter = *opts.max_iter;
  }
  if (!opts.trace_path.empty()) cfg.trace_path = opts.trace_path;
  return cfg;
}

int cmd_certify(const CommonOpts& opts) {
  const proxnet::ExperimentConfig cfg = load(opts);
  const proxnet::Certificate cert = proxnet::certify_network(*cfg.network);
  if (cert.alpha)
    std::cout << "alpha=" << *cert.alpha << "\n";
  std::cout << "condition=" << proxnet::to_string(cert.condition) << "\n";
  std::cout << "theta=";
  for (std::size_t i = 0; i < cert.theta.size(); ++i)
    std::cout << (i ? " " : "") << cert.theta[i];
  std::cout << "\n";
  if (cert.eta) std::cout << "eta=" << *cert.eta << "\n";
  if (cert.mu) std::cout << "mu=" << *cert.mu << "\n";
  return cert.alpha ? kExitOk : kExitNotCertified;
}

int cmd_run(const CommonOpts& opts) {
  const proxnet::ExperimentConfig cfg = load(opts);
  const proxnet::Network& net = *cfg.network;
  const proxnet::Vector x0 =
      cfg.x0 ? *cfg.x0 : proxnet::Vector::Zero(net.dim_in());
  const proxnet::Vector* x_ref = cfg.reference ? &*cfg.reference : nullptr;

  proxnet::IterationTrace trace;
  proxnet::Vector x_final;
  if (cfg.perturbation) {
    const proxnet::PerturbationSchedule perturb =
        cfg.perturbation_random_directions
            ? proxnet::PerturbationSchedule::random(net, *cfg.perturbation,
                                                    cfg.seed)
            : proxnet::PerturbationSchedule::ones(net, *cfg.perturbation);
    proxnet::PerturbedResult res = proxnet::iterate_perturbed(
        net, perturb, x0, cfg.schedule, cfg.stop, x_ref);
    trace = std::move(res.trace);
    x_final = std::move(res.x);
  } else {
    proxnet::IterateResult res =
        proxnet::iterate(net, x0, cfg.schedule, cfg.stop, x_ref);
    trace = std::move(res.trace);
    x_final = std::move(res.x);
  }

  if (!cfg.trace_path.empty()) {
    std::ofstream out(cfg.trace_path);
    if (!out) {
      std::cerr << "error: cannot open trace file " << cfg.trace_path << "\n";
      return kExitBadConfig;
    }
    proxnet::write_trace_csv(trace, out);
  } else {
    proxnet::write_trace_csv(trace, std::cout);
  }
  std::cerr << "status=" << proxnet::to_string(trace.status)
            << " iterations=" << trace.rows.size()
            << " final_norm=" << x_final.norm() << "\n";
  return status_exit_code(trace.status);
}

int cmd_vicheck(const CommonOpts& opts, const std::string& point_path) {
  const proxnet::ExperimentConfig cfg = load(opts);
  const proxnet::Network& net = *cfg.network;

  std::ifstream pf(point_path);
  if (!pf) throw proxnet::ConfigError("cannot open point file: " + point_path);
  proxnet::BlockPoint p;
  try {
    p = proxnet::read_block_point(pf, net);
  } catch (const std::exception& e) {
    throw proxnet::ConfigError(e.what());
  }

  const proxnet::ViResiduals res = proxnet::vi_residual(net, p);
  for (std::size_t i = 0; i < res.per_layer.size(); ++i)
    std::cout << "residual_" << (i + 1) << "=" << res.per_layer[i] << "\n";
  std::cout << "residual_max=" << res.max << "\n";

  const proxnet::MonotonicityReport mono = proxnet::monotonicity_check(net);
  std::cout << "monotone=" << (mono.monotone ? "true" : "false")
            << " max_eigenvalue=" << mono.max_eigenvalue << "\n";
  const proxnet::ExistenceFlags fl = proxnet::existence_flags(net);
  std::cout << "range_bounded=" << (fl.range_bounded ? "true" : "false")
            << "\n";
  std::cout << "some_domain_bounded="
            << (fl.some_domain_bounded ? "true" : "false") << "\n";
  std::cout << "kernel_condition=" << (fl.kernel_condition ? "true" : "false")
            << "\n";
  std::cout << "conjugates_full=" << (fl.conjugates_full ? "true" : "false")
            << "\n";
  std::cout << "all_domains_bounded="
            << (fl.all_domains_bounded ? "true" : "false") << "\n";

  return res.max <= cfg.stop.tol ? kExitOk : kExitResidual;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Layered prox-affine operator networks: averagedness certification, "
      "fixed-point iteration, and variational-inequality checking"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string point_path;

  auto add_common = [&](CLI::App* sub, bool needs_point) {
    sub->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--trace", opts.trace_path, "trace CSV output path");
    sub->add_option("--seed", opts.seed, "override the config seed");
    sub->add_option("--tol", opts.tol, "override stop tolerance");
    sub->add_option("--max-iter", opts.max_iter, "override iteration budget");
    if (needs_point)
      sub->add_option("--point", point_path,
                      "block point file (one component per line)")
          ->required();
  };

  CLI::App* certify =
      app.add_subcommand("certify", "compute an averagedness certificate");
  CLI::App* run = app.add_subcommand("run", "run the fixed-point iteration");
  CLI::App* vicheck = app.add_subcommand(
      "vicheck", "check a block point against the variational inequality");
  add_common(certify, false);
  add_common(run, false);
  add_common(vicheck, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(opts);
    if (run->parsed()) return cmd_run(opts);
    if (vicheck->parsed()) return cmd_vicheck(opts, point_path);
  } catch (const proxnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return kExitBadConfig;
}
