#include "proxnet/certify.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace proxnet {

namespace {

void check_chain(const std::vector<Matrix>& weights) {
  if (weights.empty()) throw std::invalid_argument("empty weight chain");
  for (std::size_t i = 1; i < weights.size(); ++i)
    if (weights[i].cols() != weights[i - 1].rows())
      throw std::invalid_argument("weight chain dimension mismatch");
}

// products[i][k] = W_i * ... * W_{k+1} (1-based i, 0 <= k < i); the empty
// product (k = i) is not stored.
std::vector<std::vector<Matrix>> composite_products(
    const std::vector<Matrix>& weights) {
  const int l = static_cast<int>(weights.size());
  std::vector<std::vector<Matrix>> products(l + 1);
  for (int i = 1; i <= l; ++i) {
    products[i].resize(i);
    products[i][i - 1] = weights[i - 1];
    for (int k = i - 2; k >= 0; --k)
      products[i][k] = products[i][k + 1] * weights[k];
  }
  return products;
}

bool chain_is_square(const std::vector<Matrix>& weights) {
  return weights.back().rows() == weights.front().cols();
}

}  // namespace

std::vector<double> theta_sequence(const std::vector<Matrix>& weights) {
  check_chain(weights);
  const int l = static_cast<int>(weights.size());
  const auto products = composite_products(weights);
  std::vector<double> theta(l + 1);
  theta[0] = 1.0;
  for (int i = 1; i <= l; ++i) {
    double s = 0.0;
    for (int k = 0; k < i; ++k) s += theta[k] * spectral_norm(products[i][k]);
    theta[i] = s;
  }
  return theta;
}

double mu_lower(const Matrix& w) { return min_symmetric_eigenvalue(w); }

bool check_condition_iii(const std::vector<Matrix>& weights, double alpha) {
  check_chain(weights);
  if (!chain_is_square(weights))
    throw std::invalid_argument("chain product must map H_0 to H_0");
  const int m = static_cast<int>(weights.size()) - 1;
  Matrix w = weights[0];
  for (std::size_t i = 1; i < weights.size(); ++i) w = weights[i] * w;
  const double scale = std::pow(2.0, m + 1);
  const double theta_last = theta_sequence(weights).back();
  const Matrix shifted =
      w - scale * (1.0 - alpha) * Matrix::Identity(w.rows(), w.cols());
  return spectral_norm(shifted) - spectral_norm(w) + 2.0 * theta_last <=
         scale * alpha;
}

std::optional<double> check_condition_iv(const std::vector<Matrix>& weights,
                                         double alpha, int eta_grid) {
  check_chain(weights);
  if (!chain_is_square(weights))
    throw std::invalid_argument("chain product must map H_0 to H_0");
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("condition (iv) requires alpha in [1/2, 1)");
  if (eta_grid < 2) throw std::invalid_argument("eta_grid must be >= 2");
  for (const Matrix& wi : weights)
    if (spectral_norm(wi) == 0.0)
      throw std::invalid_argument("condition (iv) requires nonzero weights");

  const int m = static_cast<int>(weights.size()) - 1;
  Matrix w = weights[0];
  for (std::size_t i = 1; i < weights.size(); ++i) w = weights[i] * w;
  const double scale = std::pow(2.0, m + 1);
  const double theta_last = theta_sequence(weights).back();
  if (theta_last > scale * alpha) return std::nullopt;

  const double w_norm = spectral_norm(w);
  const double mu = mu_lower(w);
  const double rhs = std::pow(2.0, m) * (2.0 * alpha - 1.0) + (1.0 - alpha) * mu;
  const Matrix id = Matrix::Identity(w.rows(), w.cols());
  const auto lhs = [&](double eta) {
    return alpha * theta_last +
           (1.0 - alpha) * (spectral_norm(id - eta * w) - eta * w_norm) *
               (theta_last - w_norm);
  };

  const double eta_max = alpha / ((1.0 - alpha) * theta_last);
  double best_eta = 0.0;
  double best_val = lhs(0.0);
  for (int g = 0; g < eta_grid; ++g) {
    const double eta = eta_max * g / (eta_grid - 1);
    const double v = lhs(eta);
    if (v < best_val) {
      best_val = v;
      best_eta = eta;
    }
    if (v <= rhs) return eta;
  }
  // refine once around the best candidate
  const double half_cell = eta_max / (eta_grid - 1);
  const double lo = std::max(0.0, best_eta - half_cell);
  const double hi = std::min(eta_max, best_eta + half_cell);
  for (int g = 0; g < eta_grid; ++g) {
    const double eta = lo + (hi - lo) * g / (eta_grid - 1);
    if (lhs(eta) <= rhs) return eta;
  }
  return std::nullopt;
}

Certificate certify_network(const Network& net, double alpha_step) {
  std::vector<Matrix> weights;
  weights.reserve(net.num_layers());
  for (const Layer& l : net.layers()) weights.push_back(l.w);

  Certificate cert;
  cert.theta = theta_sequence(weights);
  if (chain_is_square(weights)) {
    Matrix w = weights[0];
    for (std::size_t i = 1; i < weights.size(); ++i) w = weights[i] * w;
    cert.mu = mu_lower(w);
  }

  bool has_zero = false;
  bool all_nonzero = true;
  for (int i = 0; i < net.num_layers(); ++i) {
    if (net.weight_norm(i) == 0.0) {
      has_zero = true;
      all_nonzero = false;
    }
  }
  if (has_zero) {
    cert.alpha = 0.5;
    cert.condition = CertCondition::zero_factor;
    return cert;
  }

  const long steps = std::lround(0.5 / alpha_step);
  for (long s = 0; s <= steps; ++s) {
    const double alpha = std::min(0.5 + s * alpha_step, 1.0);
    if (check_condition_iii(weights, alpha)) {
      cert.alpha = alpha;
      cert.condition = CertCondition::norm_bound;
      return cert;
    }
    if (alpha < 1.0 && all_nonzero) {
      if (auto eta = check_condition_iv(weights, alpha)) {
        cert.alpha = alpha;
        cert.condition = CertCondition::eta_condition;
        cert.eta = eta;
        return cert;
      }
    }
  }
  cert.condition = CertCondition::none;
  return cert;
}

std::optional<std::vector<double>> certify_layerwise(const Network& net,
                                                     double beta_step) {
  const int d = net.dim_in();
  for (const Layer& l : net.layers())
    if (l.w.rows() != d || l.w.cols() != d)
      throw std::invalid_argument(
          "layerwise certification needs equal-dimension square layers");
  const Matrix id = Matrix::Identity(d, d);
  std::vector<double> betas;
  const long steps = std::lround(1.0 / beta_step);
  for (const Layer& l : net.layers()) {
    const double w_norm = spectral_norm(l.w);
    std::optional<double> found;
    for (long s = 1; s < steps; ++s) {
      const double beta = s * beta_step;
      if (spectral_norm(l.w - 2.0 * (1.0 - beta) * id) + w_norm <=
          2.0 * beta) {
        found = beta;
        break;
      }
    }
    if (!found) return std::nullopt;
    betas.push_back(*found);
  }
  return betas;
}

Vector chain_combination(const std::vector<Matrix>& weights, int i,
                         const std::vector<Vector>& blocks) {
  check_chain(weights);
  if (i < 1 || i > static_cast<int>(weights.size()))
    throw std::invalid_argument("chain_combination: bad index");
  if (static_cast<int>(blocks.size()) != i)
    throw std::invalid_argument("chain_combination: need i blocks");
  Vector acc = weights[0] * blocks[0];
  for (int k = 1; k < i; ++k) acc = weights[k] * (acc + blocks[k]);
  return acc;
}

NormEstimate m_norm_lower_bound(const std::vector<Matrix>& weights,
                                double alpha, int samples, std::uint64_t seed) {
  check_chain(weights);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const int l = static_cast<int>(weights.size());
  const int m = l - 1;
  const double scale = std::pow(2.0, m + 1);
  const auto theta = theta_sequence(weights);
  const auto products = composite_products(weights);

  // block k of the input lives in the domain of W_{k+1}
  std::vector<int> dims(l);
  int total = 0;
  for (int k = 0; k < l; ++k) {
    dims[k] = static_cast<int>(weights[k].cols());
    total += dims[k];
  }

  const auto apply_m = [&](const std::vector<Vector>& blocks) {
    Vector out = Vector::Zero(weights.back().rows());
    for (int k = 0; k < l; ++k)
      out += theta[k] * (products[l][k] * blocks[k]);
    return out;
  };
  const auto value = [&](const std::vector<Vector>& blocks) {
    const Vector mx = apply_m(blocks);
    return ((mx - scale * (1.0 - alpha) * blocks[0]).norm() + mx.norm()) /
           (scale * alpha);
  };
  const auto concat = [&](const std::vector<Vector>& blocks) {
    Vector out(total);
    int off = 0;
    for (const Vector& b : blocks) {
      out.segment(off, b.size()) = b;
      off += static_cast<int>(b.size());
    }
    return out;
  };

  NormEstimate est{0.0, Vector(), 0};
  std::vector<Vector> blocks(l);
  const auto consider = [&] {
    const double v = value(blocks);
    ++est.samples;
    if (v > est.lower_bound) {
      est.lower_bound = v;
      est.witness = concat(blocks);
    }
  };

  if (total <= 16) {
    // every +-1 sign pattern, each block normalized to its unit sphere
    for (std::uint64_t bits = 0; bits < (1ull << total); ++bits) {
      int off = 0;
      for (int k = 0; k < l; ++k) {
        Vector b(dims[k]);
        for (int j = 0; j < dims[k]; ++j)
          b(j) = (bits >> (off + j)) & 1 ? 1.0 : -1.0;
        blocks[k] = b / b.norm();
        off += dims[k];
      }
      consider();
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < l; ++k) {
      Vector b(dims[k]);
      for (int j = 0; j < dims[k]; ++j) b(j) = normal(rng);
      const double n = b.norm();
      blocks[k] = n > 0.0 ? Vector(b / n) : Vector::Unit(dims[k], 0);
    }
    consider();
  }
  return est;
}

const char* to_string(CertCondition c) {
  switch (c) {
    case CertCondition::zero_factor: return "zero_factor";
    case CertCondition::norm_bound: return "norm_bound";
    case CertCondition::eta_condition: return "eta_condition";
    case CertCondition::none: return "none";
  }
  return "?";
}

}  // namespace proxnet
