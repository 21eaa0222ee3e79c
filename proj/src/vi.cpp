#include "proxnet/vi.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace proxnet {

namespace {

void check_block_point(const Network& net, const BlockPoint& p) {
  if (static_cast<int>(p.size()) != net.num_layers())
    throw std::invalid_argument("block point: wrong number of components");
  for (int i = 0; i < net.num_layers(); ++i)
    if (p[i].size() != net.dim_out(i))
      throw std::invalid_argument("block point: component dimension mismatch");
}

}  // namespace

BlockOperators block_operators(const Network& net) {
  const int m = net.num_layers();
  std::vector<int> roff(m + 1, 0), coff(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    roff[i + 1] = roff[i] + static_cast<int>(net.layer(i).w.rows());
    coff[i + 1] = coff[i] + static_cast<int>(net.layer(i).w.cols());
  }
  const int total = roff[m];  // equals coff[m]: the dimension chain closes

  BlockOperators bo;
  bo.s = Matrix::Zero(total, total);
  bo.wblk = Matrix::Zero(total, total);
  for (int i = 0; i < m; ++i) {
    const int j = (i + m - 1) % m;  // block fed into layer i+1
    const int d = static_cast<int>(net.layer(i).w.cols());
    bo.s.block(coff[i], roff[j], d, d) = Matrix::Identity(d, d);
    bo.wblk.block(roff[i], coff[i], net.layer(i).w.rows(),
                  net.layer(i).w.cols()) = net.layer(i).w;
  }
  bo.ws = bo.wblk * bo.s;
  return bo;
}

ViResiduals vi_residual(const Network& net, const BlockPoint& p) {
  check_block_point(net, p);
  const int m = net.num_layers();
  ViResiduals r;
  r.per_layer.resize(m);
  for (int i = 0; i < m; ++i) {
    const Vector& prev = p[(i + m - 1) % m];
    r.per_layer[i] = (p[i] - net.apply_layer(i, prev)).norm();
  }
  r.max = *std::max_element(r.per_layer.begin(), r.per_layer.end());
  return r;
}

BlockPoint lift_fixed_point(const Network& net, const Vector& xm) {
  if (xm.size() != net.dim_in())
    throw std::invalid_argument("lift_fixed_point: bad input dimension");
  return net.layer_outputs(xm);
}

BlockPoint block_step(const Network& net, const BlockPoint& p) {
  check_block_point(net, p);
  const int m = net.num_layers();
  BlockPoint out(m);
  for (int i = 0; i < m; ++i)
    out[i] = net.apply_layer(i, p[(i + m - 1) % m]);
  return out;
}

MonotonicityReport monotonicity_check(const Network& net) {
  const BlockOperators bo = block_operators(net);
  const double eig =
      max_symmetric_eigenvalue(bo.ws + bo.ws.transpose());
  return {eig <= 2.0 + 1e-10, eig, 2.0 - eig};
}

ExistenceFlags existence_flags(const Network& net) {
  const int m = net.num_layers();
  ExistenceFlags f{};

  // A layer with bounded activation range or a zero weight makes the signal
  // bounded from that layer on; later layers are Lipschitz, so the network
  // range stays bounded.
  f.range_bounded = false;
  for (int i = 0; i < m; ++i)
    if (net.layer(i).r.range_bounded() || net.weight_norm(i) == 0.0)
      f.range_bounded = true;

  f.some_domain_bounded = false;
  f.all_domains_bounded = true;
  bool weights_nonexpansive = true;
  bool conj_full = true;
  for (int i = 0; i < m; ++i) {
    const bool db = net.layer(i).r.potential_domain_bounded();
    f.some_domain_bounded = f.some_domain_bounded || db;
    f.all_domains_bounded = f.all_domains_bounded && db;
    weights_nonexpansive =
        weights_nonexpansive && net.weight_norm(i) <= 1.0 + 1e-12;
    conj_full = conj_full && net.layer(i).r.all_conjugates_full();
  }

  const BlockOperators bo = block_operators(net);
  const double sv = min_singular_value(bo.s - bo.wblk.transpose());
  f.kernel_condition = weights_nonexpansive && sv > 1e-10;
  f.conjugates_full = weights_nonexpansive && conj_full;
  return f;
}

BlockPoint read_block_point(std::istream& is, const Network& net) {
  BlockPoint p;
  std::string line;
  for (int i = 0; i < net.num_layers(); ++i) {
    if (!std::getline(is, line))
      throw std::runtime_error("block point file: missing component line");
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof())
      throw std::runtime_error("block point file: non-numeric entry");
    if (static_cast<int>(vals.size()) != net.dim_out(i))
      throw std::runtime_error("block point file: wrong component dimension");
    Vector x(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k)
      x(static_cast<Eigen::Index>(k)) = vals[k];
    p.push_back(std::move(x));
  }
  return p;
}

void write_block_point(const BlockPoint& p, std::ostream& os) {
  char buf[64];
  for (const Vector& x : p) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", x(k));
      if (k) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace proxnet
