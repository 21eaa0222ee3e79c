#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "proxnet/engine.hpp"
#include "proxnet/network.hpp"

namespace proxnet {

// Any malformed config, unreadable referenced file, or out-of-range field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<Network> network;
  RelaxationSchedule schedule = RelaxationSchedule::constant(1.0);
  StopCriteria stop;
  std::optional<Vector> x0;         // default: zeros
  std::optional<Vector> reference;  // distance column reference, if any
  std::optional<PerturbationSchedule::Decay> perturbation;
  bool perturbation_random_directions = false;
  std::string trace_path;  // empty: trace goes to --trace / stdout only
};

// Parses the JSON experiment file; file paths inside the config are resolved
// relative to the config file's directory.  Throws ConfigError.
ExperimentConfig load_config(const std::string& path);

// Whitespace-separated text matrix: one row per line.
Matrix load_matrix(const std::string& path);

// Single line of whitespace-separated entries.
Vector load_vector(const std::string& path);

}  // namespace proxnet
