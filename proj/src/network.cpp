#include "proxnet/network.hpp"

#include <stdexcept>

namespace proxnet {

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("network needs >= 1 layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (!l.w.allFinite()) throw std::invalid_argument("non-finite weights");
    if (l.b.size() != l.w.rows() || l.r.dim() != l.w.rows())
      throw std::invalid_argument("layer dimension mismatch");
    if (i > 0 && l.w.cols() != layers_[i - 1].w.rows())
      throw std::invalid_argument("dimension chain broken between layers");
  }
  if (layers_.back().w.rows() != layers_.front().w.cols())
    throw std::invalid_argument("dimension chain must close: H_m = H_0");
  w_norms_.reserve(layers_.size());
  b_norms_.reserve(layers_.size());
  for (const Layer& l : layers_) {
    w_norms_.push_back(spectral_norm(l.w));
    b_norms_.push_back(l.b.norm());
  }
}

Vector Network::apply_layer(int i, const Vector& x) const {
  return layers_[i].r.apply(layers_[i].w * x + layers_[i].b);
}

Vector Network::forward(const Vector& x) const {
  if (x.size() != dim_in()) throw std::invalid_argument("forward: bad input dim");
  Vector y = x;
  for (int i = 0; i < num_layers(); ++i) y = apply_layer(i, y);
  return y;
}

std::vector<Vector> Network::layer_outputs(const Vector& x) const {
  if (x.size() != dim_in())
    throw std::invalid_argument("layer_outputs: bad input dim");
  std::vector<Vector> out;
  out.reserve(layers_.size());
  Vector y = x;
  for (int i = 0; i < num_layers(); ++i) {
    y = apply_layer(i, y);
    out.push_back(y);
  }
  return out;
}

double Network::output_norm_bound(int from_layer, int to_layer,
                                  double x_norm) const {
  if (from_layer < 1 || to_layer < from_layer || to_layer > num_layers())
    throw std::invalid_argument("output_norm_bound: invalid layer range");
  if (x_norm < 0.0) throw std::invalid_argument("x_norm must be >= 0");
  double prod = 1.0;
  double bound = 0.0;
  // walk i down to j accumulating ||W_i..W_{q+1}|| products
  for (int q = to_layer; q >= from_layer; --q) {
    bound += b_norms_[q - 1] * prod;
    prod *= w_norms_[q - 1];
  }
  return x_norm * prod + bound;
}

}  // namespace proxnet
