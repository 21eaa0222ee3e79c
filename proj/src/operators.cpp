#include "proxnet/operators.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace proxnet {

struct ActivationOperator::Impl {
  OperatorStructure structure;
  int dim = 0;
  bool range_bounded = false;
  bool domain_bounded = false;
  bool conjugates_full = false;

  // separable
  std::vector<ScalarActivation> coords;
  // uniform fast path: all coordinates share one kernel op
  std::optional<ScalarActivation::KernelInfo> uniform_kernel;
  // sandwich
  Matrix l;
  // children (sandwich inner, combination terms, complement, half_difference)
  std::vector<std::shared_ptr<const Impl>> children;
  std::vector<double> weights;
};

namespace {

using Impl = ActivationOperator::Impl;

Vector apply_impl(const Impl& im, const Vector& x) {
  switch (im.structure) {
    case OperatorStructure::separable: {
      Vector y(im.dim);
      if (im.uniform_kernel) {
        kernels::map(im.uniform_kernel->op, im.uniform_kernel->param, x.data(),
                     y.data(), static_cast<std::size_t>(im.dim));
      } else {
        for (int k = 0; k < im.dim; ++k) y(k) = im.coords[k].eval(x(k));
      }
      return y;
    }
    case OperatorStructure::softmax: {
      const double shift = x.maxCoeff();
      Vector e = (x.array() - shift).exp();
      e /= e.sum();
      e.array() -= 1.0 / im.dim;
      return e;
    }
    case OperatorStructure::sandwich:
      return im.l.transpose() * apply_impl(*im.children[0], im.l * x);
    case OperatorStructure::convex_combination: {
      Vector y = Vector::Zero(im.dim);
      for (std::size_t i = 0; i < im.children.size(); ++i)
        y += im.weights[i] * apply_impl(*im.children[i], x);
      return y;
    }
    case OperatorStructure::complement:
      return x - apply_impl(*im.children[0], x);
    case OperatorStructure::half_difference:
      return (apply_impl(*im.children[0], x) - apply_impl(*im.children[1], x) +
              x) /
             2.0;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ActivationOperator::ActivationOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

ActivationOperator ActivationOperator::separable(
    std::vector<ScalarActivation> coords) {
  if (coords.empty()) throw std::invalid_argument("empty separable operator");
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::separable;
  im->dim = static_cast<int>(coords.size());
  im->range_bounded = true;
  im->domain_bounded = true;
  im->conjugates_full = true;
  for (const auto& a : coords) {
    // the prox range is contained in the potential domain, so a bounded
    // domain bounds the range too
    im->range_bounded = im->range_bounded && a.potential_domain_bounded();
    im->domain_bounded = im->domain_bounded && a.potential_domain_bounded();
    im->conjugates_full = im->conjugates_full && a.conjugate_full_domain();
  }
  if (const auto* k0 = coords.front().kernel()) {
    bool uniform = true;
    for (const auto& a : coords) {
      const auto* k = a.kernel();
      if (!k || k->op != k0->op || k->param != k0->param) {
        uniform = false;
        break;
      }
    }
    if (uniform) im->uniform_kernel = *k0;
  }
  im->coords = std::move(coords);
  return ActivationOperator(std::move(im));
}

ActivationOperator ActivationOperator::separable(int dim,
                                                 const ScalarActivation& a) {
  return separable(std::vector<ScalarActivation>(dim, a));
}

ActivationOperator ActivationOperator::softmax(int n) {
  if (n < 1) throw std::invalid_argument("softmax dimension must be >= 1");
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::softmax;
  im->dim = n;
  im->range_bounded = true;    // outputs live in the shifted simplex
  im->domain_bounded = true;   // potential domain is the shifted simplex
  im->conjugates_full = true;  // bounded potential domain
  return ActivationOperator(std::move(im));
}

ActivationOperator ActivationOperator::sandwich(Matrix l,
                                                ActivationOperator inner) {
  if (l.rows() != inner.dim())
    throw std::invalid_argument("sandwich: L rows must match inner dimension");
  if (spectral_norm(l) > 1.0 + 1e-12)
    throw std::invalid_argument("sandwich: ||L|| must be <= 1");
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::sandwich;
  im->dim = static_cast<int>(l.cols());
  im->range_bounded = inner.range_bounded();
  im->l = std::move(l);
  im->children = {inner.impl_};
  return ActivationOperator(std::move(im));
}

ActivationOperator ActivationOperator::convex_combination(
    std::vector<std::pair<double, ActivationOperator>> terms) {
  if (terms.empty()) throw std::invalid_argument("empty combination");
  double sum = 0.0;
  const int dim = terms.front().second.dim();
  for (const auto& [w, op] : terms) {
    if (!(w > 0.0 && w <= 1.0))
      throw std::invalid_argument("weights must lie in (0,1]");
    if (op.dim() != dim) throw std::invalid_argument("dimension mismatch");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::convex_combination;
  im->dim = dim;
  im->range_bounded = true;
  for (auto& [w, op] : terms) {
    im->range_bounded = im->range_bounded && op.range_bounded();
    im->weights.push_back(w);
    im->children.push_back(op.impl_);
  }
  return ActivationOperator(std::move(im));
}

ActivationOperator ActivationOperator::complement(ActivationOperator inner) {
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::complement;
  im->dim = inner.dim();
  im->children = {inner.impl_};
  return ActivationOperator(std::move(im));
}

ActivationOperator ActivationOperator::half_difference(ActivationOperator a,
                                                       ActivationOperator b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  auto im = std::make_shared<Impl>();
  im->structure = OperatorStructure::half_difference;
  im->dim = a.dim();
  im->children = {a.impl_, b.impl_};
  return ActivationOperator(std::move(im));
}

Vector ActivationOperator::apply(const Vector& x) const {
  if (x.size() != impl_->dim)
    throw std::invalid_argument("apply: dimension mismatch");
  return apply_impl(*impl_, x);
}

int ActivationOperator::dim() const { return impl_->dim; }

OperatorStructure ActivationOperator::structure() const {
  return impl_->structure;
}

bool ActivationOperator::range_bounded() const { return impl_->range_bounded; }

bool ActivationOperator::potential_domain_bounded() const {
  return impl_->domain_bounded;
}

bool ActivationOperator::all_conjugates_full() const {
  return impl_->conjugates_full;
}

FirmnessReport ActivationOperator::check_firm_nonexpansive(
    int samples, double tol, std::uint64_t seed) const {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  FirmnessReport report{true, -std::numeric_limits<double>::infinity(),
                        Vector(), Vector()};
  for (int s = 0; s < samples; ++s) {
    Vector x(impl_->dim), y(impl_->dim);
    for (int k = 0; k < impl_->dim; ++k) {
      x(k) = unif(rng);
      y(k) = unif(rng);
    }
    const Vector rx = apply(x), ry = apply(y);
    const double lhs = (rx - ry).squaredNorm();
    const double rhs =
        (x - y).squaredNorm() - (x - y - rx + ry).squaredNorm();
    const double violation = lhs - rhs;
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_x = x;
      report.worst_y = y;
    }
  }
  report.passed = report.worst_violation <= tol;
  return report;
}

}  // namespace proxnet
