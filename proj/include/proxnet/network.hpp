#pragma once

#include <vector>

#include "proxnet/linalg.hpp"
#include "proxnet/operators.hpp"

namespace proxnet {

// One layer x -> R(Wx + b).
struct Layer {
  Matrix w;
  Vector b;
  ActivationOperator r;
};

// An ordered stack of layers whose dimension chain closes on itself:
// dim_in(layer 1) == dim_out(layer m).
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  const Layer& layer(int i) const { return layers_[i]; }  // 0-based
  const std::vector<Layer>& layers() const { return layers_; }
  int dim_in() const { return static_cast<int>(layers_.front().w.cols()); }
  int dim_out(int i) const { return static_cast<int>(layers_[i].w.rows()); }

  double weight_norm(int i) const { return w_norms_[i]; }
  double bias_norm(int i) const { return b_norms_[i]; }

  Vector forward(const Vector& x) const;
  // (T_1 x, T_2 T_1 x, ..., T x)
  std::vector<Vector> layer_outputs(const Vector& x) const;

  // Norm bound on T_i o ... o T_j applied to any x with ||x|| = x_norm;
  // layers are 1-based here, 1 <= j <= i <= m.
  double output_norm_bound(int from_layer, int to_layer, double x_norm) const;

  Vector apply_layer(int i, const Vector& x) const;  // 0-based

 private:
  std::vector<Layer> layers_;
  std::vector<double> w_norms_, b_norms_;
};

}  // namespace proxnet
