#include "proxnet/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace proxnet {

namespace {

using nlohmann::json;

Vector vector_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigError(std::string(what) + ": expected array");
  Vector v(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number())
      throw ConfigError(std::string(what) + ": non-numeric entry");
    v(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
  }
  return v;
}

Matrix matrix_from_row_major(const json& arr, int rows, int cols,
                             const char* what) {
  if (!arr.is_array() ||
      static_cast<int>(arr.size()) != rows * cols)
    throw ConfigError(std::string(what) + ": expected " +
                      std::to_string(rows * cols) + " row-major entries");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const json& e = arr[static_cast<std::size_t>(r * cols + c)];
      if (!e.is_number())
        throw ConfigError(std::string(what) + ": non-numeric entry");
      m(r, c) = e.get<double>();
    }
  return m;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

ActivationOperator activation_from_descriptor(const json& desc, int dim,
                                              const std::string& base_dir) {
  if (desc.is_string()) {
    // uniform separable activation from a string key like "prelu:0.25"
    try {
      return ActivationOperator::separable(
          dim, ScalarActivation::from_key(desc.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("activation: ") + e.what());
    }
  }
  if (!desc.is_object() || desc.size() != 1)
    throw ConfigError("activation: expected string or one-key object");
  if (desc.contains("separable")) {
    const json& names = desc["separable"];
    if (!names.is_array() || static_cast<int>(names.size()) != dim)
      throw ConfigError("activation.separable: need one name per coordinate");
    std::vector<ScalarActivation> coords;
    coords.reserve(names.size());
    for (const json& n : names) {
      if (!n.is_string())
        throw ConfigError("activation.separable: names must be strings");
      try {
        coords.push_back(ScalarActivation::from_key(n.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("activation: ") + e.what());
      }
    }
    return ActivationOperator::separable(std::move(coords));
  }
  if (desc.contains("softmax")) {
    if (!desc["softmax"].is_number_integer() ||
        desc["softmax"].get<int>() != dim)
      throw ConfigError("activation.softmax: size must equal the layer dim");
    return ActivationOperator::softmax(dim);
  }
  if (desc.contains("sandwich")) {
    const json& sw = desc["sandwich"];
    if (!sw.is_object() || !sw.contains("inner"))
      throw ConfigError("activation.sandwich: need l/l_file and inner");
    Matrix l;
    if (sw.contains("l_file")) {
      l = load_matrix(resolve(base_dir, sw["l_file"].get<std::string>()));
    } else if (sw.contains("l")) {
      const json& lj = sw["l"];
      if (!lj.is_object() || !lj.contains("rows") || !lj.contains("cols") ||
          !lj.contains("data"))
        throw ConfigError("activation.sandwich.l: need rows, cols, data");
      l = matrix_from_row_major(lj["data"], lj["rows"].get<int>(),
                                lj["cols"].get<int>(), "sandwich.l");
    } else {
      throw ConfigError("activation.sandwich: need l or l_file");
    }
    if (static_cast<int>(l.cols()) != dim)
      throw ConfigError("activation.sandwich: l cols must equal layer dim");
    ActivationOperator inner = activation_from_descriptor(
        sw["inner"], static_cast<int>(l.rows()), base_dir);
    try {
      return ActivationOperator::sandwich(std::move(l), std::move(inner));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("activation.sandwich: ") + e.what());
    }
  }
  throw ConfigError("activation: unknown descriptor key");
}

Network network_from_json(const json& nj, const std::string& base_dir) {
  if (!nj.is_object() || !nj.contains("layers") || !nj["layers"].is_array() ||
      nj["layers"].empty())
    throw ConfigError("network: need a nonempty layers array");
  std::vector<Layer> layers;
  for (const json& lj : nj["layers"]) {
    if (!lj.is_object() || !lj.contains("rows") || !lj.contains("cols"))
      throw ConfigError("layer: need rows and cols");
    const int rows = lj["rows"].get<int>();
    const int cols = lj["cols"].get<int>();
    if (rows < 1 || cols < 1) throw ConfigError("layer: bad dimensions");
    Matrix w;
    if (lj.contains("weights_file")) {
      w = load_matrix(resolve(base_dir, lj["weights_file"].get<std::string>()));
      if (w.rows() != rows || w.cols() != cols)
        throw ConfigError("layer: weights_file dimensions disagree");
    } else if (lj.contains("weights")) {
      w = matrix_from_row_major(lj["weights"], rows, cols, "layer.weights");
    } else {
      throw ConfigError("layer: need weights or weights_file");
    }
    Vector b = Vector::Zero(rows);
    if (lj.contains("bias")) {
      b = vector_from_json(lj["bias"], "layer.bias");
      if (b.size() != rows) throw ConfigError("layer: bias length != rows");
    }
    if (!lj.contains("activation"))
      throw ConfigError("layer: need an activation descriptor");
    ActivationOperator r =
        activation_from_descriptor(lj["activation"], rows, base_dir);
    layers.push_back({std::move(w), std::move(b), std::move(r)});
  }
  try {
    return Network(std::move(layers));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
}

RelaxationSchedule schedule_from_json(const json& sj) {
  if (!sj.is_object() || !sj.contains("mode"))
    throw ConfigError("schedule: need a mode");
  const std::string mode = sj["mode"].get<std::string>();
  try {
    if (mode == "constant") {
      return RelaxationSchedule::constant(sj.value("lambda", 1.0));
    }
    if (mode == "theorem1_ii") {
      if (!sj.contains("alpha"))
        throw ConfigError("schedule: theorem1_ii needs alpha");
      const double alpha = sj["alpha"].get<double>();
      if (sj.contains("decay"))
        return RelaxationSchedule::theorem1_ii_decay(
            sj["decay"].get<double>(), alpha, sj.value("eps", 1e-3));
      if (!sj.contains("lambda"))
        throw ConfigError("schedule: theorem1_ii needs lambda or decay");
      return RelaxationSchedule::theorem1_ii_constant(
          sj["lambda"].get<double>(), alpha);
    }
    if (mode == "theorem_g") {
      if (!sj.contains("alpha") || !sj.contains("lambda"))
        throw ConfigError("schedule: theorem_g needs alpha and lambda");
      return RelaxationSchedule::theorem_g(sj["lambda"].get<double>(),
                                           sj["alpha"].get<double>(),
                                           sj.value("eps", 1e-2));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  throw ConfigError("schedule: unknown mode '" + mode + "'");
}

}  // namespace

Matrix load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw ConfigError("non-numeric entry in " + path);
    if (row.empty()) continue;  // blank lines allowed
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("empty matrix file: " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows.front().size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  return m;
}

Vector load_vector(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.rows() != 1)
    throw ConfigError("expected a single-line vector file: " + path);
  return m.row(0).transpose();
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();

  ExperimentConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (!j.contains("network")) throw ConfigError("config: missing network");
    cfg.network = network_from_json(j["network"], base_dir);
    if (j.contains("schedule")) cfg.schedule = schedule_from_json(j["schedule"]);
    if (j.contains("stop")) {
      const json& st = j["stop"];
      cfg.stop.tol = st.value("tol", cfg.stop.tol);
      cfg.stop.max_iter = st.value("max_iter", cfg.stop.max_iter);
      cfg.stop.divergence_norm =
          st.value("divergence_norm", cfg.stop.divergence_norm);
      if (!(cfg.stop.tol > 0.0)) throw ConfigError("stop.tol must be > 0");
      if (cfg.stop.max_iter < 0)
        throw ConfigError("stop.max_iter must be >= 0");
      if (!(cfg.stop.divergence_norm > 0.0))
        throw ConfigError("stop.divergence_norm must be > 0");
    }
    if (j.contains("x0")) {
      cfg.x0 = vector_from_json(j["x0"], "x0");
      if (cfg.x0->size() != cfg.network->dim_in())
        throw ConfigError("x0: wrong dimension");
    }
    if (j.contains("reference")) {
      cfg.reference = vector_from_json(j["reference"], "reference");
    } else if (j.contains("reference_file")) {
      cfg.reference =
          load_vector(resolve(base_dir, j["reference_file"].get<std::string>()));
    }
    if (cfg.reference && cfg.reference->size() != cfg.network->dim_in())
      throw ConfigError("reference: wrong dimension");
    if (j.contains("perturbation")) {
      const json& pj = j["perturbation"];
      PerturbationSchedule::Decay d;
      d.c_omega = pj.value("c_omega", 0.0);
      d.c_rho = pj.value("c_rho", 0.0);
      d.c_eta = pj.value("c_eta", 0.0);
      d.c_nu = pj.value("c_nu", 0.0);
      if (d.c_omega < 0 || d.c_rho < 0 || d.c_eta < 0 || d.c_nu < 0)
        throw ConfigError("perturbation: decay constants must be >= 0");
      if (d.c_rho > 1.0)
        throw ConfigError("perturbation: c_rho must be <= 1");
      cfg.perturbation = d;
      const std::string dirs = pj.value("directions", std::string("ones"));
      if (dirs == "random") cfg.perturbation_random_directions = true;
      else if (dirs != "ones")
        throw ConfigError("perturbation.directions must be ones or random");
    }
    if (j.contains("output") && j["output"].contains("trace"))
      cfg.trace_path =
          resolve(base_dir, j["output"]["trace"].get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

}  // namespace proxnet
