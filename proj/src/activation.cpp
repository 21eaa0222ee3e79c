#include "proxnet/activation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace proxnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
}  // namespace

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

struct ScalarActivation::Node {
  ActKind kind;
  // catalog params
  double slope = 0.0;  // prelu
  // combinator params
  double alpha = 0.0, beta = 0.0;          // scaled
  std::vector<double> weights;             // convex_combination
  std::vector<std::shared_ptr<const Node>> children;
  Interval domain{-kInf, kInf};
  bool has_potential = true;
  bool conjugate_full = false;
  std::optional<KernelInfo> kern;
};

ScalarActivation::ScalarActivation(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

namespace {

using Node = ScalarActivation::Node;

double eval_node(const Node& n, double x);

double eval_catalog(const Node& n, double x) {
  switch (n.kind) {
    case ActKind::identity:
      return x;
    case ActKind::satlin:
      return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x);
    case ActKind::relu:
      return x > 0.0 ? x : 0.0;
    case ActKind::prelu:
      return x > 0.0 ? x : n.slope * x;
    case ActKind::bent_identity:
      return (x + std::sqrt(x * x + 1.0) - 1.0) / 2.0;
    case ActKind::isru:
      return x / std::sqrt(1.0 + x * x);
    case ActKind::isrlu:
      return x >= 0.0 ? x : x / std::sqrt(1.0 + x * x);
    case ActKind::arctan2pi:
      return (2.0 / kPi) * std::atan(x);
    case ActKind::tanh_:
      return std::tanh(x);
    case ActKind::sigmoid_shifted:
      return 1.0 / (1.0 + std::exp(-x)) - 0.5;
    case ActKind::elliot:
      return x / (1.0 + std::fabs(x));
    case ActKind::arcsinh:
      return std::asinh(x);
    case ActKind::logarithmic:
      return std::copysign(std::log1p(std::fabs(x)), x);
    case ActKind::soft_threshold:
      return x > 1.0 ? x - 1.0 : (x < -1.0 ? x + 1.0 : 0.0);
    default:
      throw std::logic_error("not a catalog activation");
  }
}

double eval_node(const Node& n, double x) {
  switch (n.kind) {
    case ActKind::scaled:
      return n.alpha * eval_node(*n.children[0], n.beta * x);
    case ActKind::convex_combination: {
      double s = 0.0;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        s += n.weights[i] * eval_node(*n.children[i], x);
      return s;
    }
    case ActKind::composed:
      return eval_node(*n.children[0], eval_node(*n.children[1], x));
    case ActKind::complement:
      return x - eval_node(*n.children[0], x);
    case ActKind::half_difference:
      return (eval_node(*n.children[0], x) - eval_node(*n.children[1], x) + x) /
             2.0;
    case ActKind::reflected_compose: {
      const double r2 = eval_node(*n.children[1], x);
      return eval_node(*n.children[0], 2.0 * r2 - x) + x - r2;
    }
    default:
      return eval_catalog(n, x);
  }
}

// Potentials normalized so that phi(0) = 0.  Closed-domain endpoint values
// are the stated finite limits (tanh, sigmoid, isru).
double potential_catalog(const Node& n, double y) {
  const double a = std::fabs(y);
  switch (n.kind) {
    case ActKind::identity:
      return 0.0;
    case ActKind::satlin:
      return a <= 1.0 ? 0.0 : kInf;
    case ActKind::relu:
      return y >= 0.0 ? 0.0 : kInf;
    case ActKind::prelu:
      return y > 0.0 ? 0.0 : (1.0 / n.slope - 1.0) * y * y / 2.0;
    case ActKind::bent_identity:
      return y > -0.5 ? y / 2.0 - std::log(2.0 * y + 1.0) / 4.0 : kInf;
    case ActKind::isru:
      return a <= 1.0 ? 1.0 - y * y / 2.0 - std::sqrt(1.0 - y * y) : kInf;
    case ActKind::isrlu:
      if (y >= 0.0) return 0.0;
      return y >= -1.0 ? 1.0 - y * y / 2.0 - std::sqrt(1.0 - y * y) : kInf;
    case ActKind::arctan2pi:
      return a < 1.0
                 ? -(2.0 / kPi) * std::log(std::cos(kPi * y / 2.0)) - y * y / 2.0
                 : kInf;
    case ActKind::tanh_:
      if (a < 1.0)
        return ((1.0 + y) * std::log1p(y) + (1.0 - y) * std::log1p(-y) - y * y) /
               2.0;
      return a == 1.0 ? std::log(2.0) - 0.5 : kInf;
    case ActKind::sigmoid_shifted: {
      if (a < 0.5) {
        const double p = y + 0.5, q = 0.5 - y;
        return p * std::log(p) + q * std::log(q) - (y * y + 0.25) / 2.0 +
               std::log(2.0) + 0.125;
      }
      return a == 0.5 ? std::log(2.0) - 0.125 : kInf;
    }
    case ActKind::elliot:
      return a < 1.0 ? -a - std::log1p(-a) - y * y / 2.0 : kInf;
    case ActKind::arcsinh:
      return std::cosh(y) - y * y / 2.0 - 1.0;
    case ActKind::logarithmic:
      return std::exp(a) - a - 1.0 - y * y / 2.0;
    case ActKind::soft_threshold:
      return a;
    default:
      throw std::logic_error("combinator activations have no stored potential");
  }
}

std::shared_ptr<const Node> make_catalog(ActKind kind, double slope = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->slope = slope;
  switch (kind) {
    case ActKind::satlin:
      n->domain = {-1.0, 1.0};
      n->conjugate_full = true;
      n->kern = ScalarActivation::KernelInfo{kernels::Op::satlin, 0.0};
      break;
    case ActKind::relu:
      n->domain = {0.0, kInf};
      n->kern = ScalarActivation::KernelInfo{kernels::Op::relu, 0.0};
      break;
    case ActKind::prelu:
      n->kern = ScalarActivation::KernelInfo{kernels::Op::prelu, slope};
      break;
    case ActKind::bent_identity:
      n->domain = {-0.5, kInf};
      break;
    case ActKind::isru:
      n->domain = {-1.0, 1.0};
      n->conjugate_full = true;
      break;
    case ActKind::isrlu:
      n->domain = {-1.0, kInf};
      break;
    case ActKind::arctan2pi:
    case ActKind::tanh_:
    case ActKind::elliot:
      n->domain = {-1.0, 1.0};
      n->conjugate_full = true;
      break;
    case ActKind::sigmoid_shifted:
      n->domain = {-0.5, 0.5};
      n->conjugate_full = true;
      break;
    case ActKind::arcsinh:
    case ActKind::logarithmic:
      n->conjugate_full = true;  // supercoercive potential
      break;
    case ActKind::soft_threshold:
      n->kern = ScalarActivation::KernelInfo{kernels::Op::soft_threshold, 0.0};
      break;
    case ActKind::identity:
      n->kern = ScalarActivation::KernelInfo{kernels::Op::identity, 0.0};
      break;
    default:
      break;
  }
  return n;
}

const char* kind_name(ActKind k) {
  switch (k) {
    case ActKind::identity: return "identity";
    case ActKind::satlin: return "satlin";
    case ActKind::relu: return "relu";
    case ActKind::prelu: return "prelu";
    case ActKind::bent_identity: return "bent_identity";
    case ActKind::isru: return "isru";
    case ActKind::isrlu: return "isrlu";
    case ActKind::arctan2pi: return "arctan2pi";
    case ActKind::tanh_: return "tanh";
    case ActKind::sigmoid_shifted: return "sigmoid_shifted";
    case ActKind::elliot: return "elliot";
    case ActKind::arcsinh: return "arcsinh";
    case ActKind::logarithmic: return "logarithmic";
    case ActKind::soft_threshold: return "soft_threshold";
    case ActKind::scaled: return "scaled";
    case ActKind::convex_combination: return "convex_combination";
    case ActKind::composed: return "composed";
    case ActKind::complement: return "complement";
    case ActKind::half_difference: return "half_difference";
    case ActKind::reflected_compose: return "reflected_compose";
  }
  return "?";
}

}  // namespace

ScalarActivation ScalarActivation::identity() {
  return ScalarActivation(make_catalog(ActKind::identity));
}
ScalarActivation ScalarActivation::satlin() {
  return ScalarActivation(make_catalog(ActKind::satlin));
}
ScalarActivation ScalarActivation::relu() {
  return ScalarActivation(make_catalog(ActKind::relu));
}
ScalarActivation ScalarActivation::prelu(double slope) {
  if (slope == 1.0) return identity();
  if (!(slope > 0.0 && slope < 1.0))
    throw std::invalid_argument("prelu slope must lie in (0,1)");
  return ScalarActivation(make_catalog(ActKind::prelu, slope));
}
ScalarActivation ScalarActivation::bent_identity() {
  return ScalarActivation(make_catalog(ActKind::bent_identity));
}
ScalarActivation ScalarActivation::isru() {
  return ScalarActivation(make_catalog(ActKind::isru));
}
ScalarActivation ScalarActivation::isrlu() {
  return ScalarActivation(make_catalog(ActKind::isrlu));
}
ScalarActivation ScalarActivation::arctan2pi() {
  return ScalarActivation(make_catalog(ActKind::arctan2pi));
}
ScalarActivation ScalarActivation::tanh() {
  return ScalarActivation(make_catalog(ActKind::tanh_));
}
ScalarActivation ScalarActivation::sigmoid_shifted() {
  return ScalarActivation(make_catalog(ActKind::sigmoid_shifted));
}
ScalarActivation ScalarActivation::elliot() {
  return ScalarActivation(make_catalog(ActKind::elliot));
}
ScalarActivation ScalarActivation::arcsinh() {
  return ScalarActivation(make_catalog(ActKind::arcsinh));
}
ScalarActivation ScalarActivation::logarithmic() {
  return ScalarActivation(make_catalog(ActKind::logarithmic));
}
ScalarActivation ScalarActivation::soft_threshold() {
  return ScalarActivation(make_catalog(ActKind::soft_threshold));
}

std::vector<ScalarActivation> ScalarActivation::catalog() {
  return {identity(),   satlin(),          relu(),      prelu(0.25),
          bent_identity(), isru(),         isrlu(),     arctan2pi(),
          tanh(),       sigmoid_shifted(), elliot(),    arcsinh(),
          logarithmic(), soft_threshold()};
}

ScalarActivation ScalarActivation::from_key(std::string_view key) {
  const auto colon = key.find(':');
  const std::string name(key.substr(0, colon));
  if (name == "prelu") {
    if (colon == std::string_view::npos)
      throw std::invalid_argument("prelu requires a slope, e.g. prelu:0.25");
    return prelu(std::stod(std::string(key.substr(colon + 1))));
  }
  if (colon != std::string_view::npos)
    throw std::invalid_argument("unexpected parameter in activation key: " +
                                std::string(key));
  if (name == "identity") return identity();
  if (name == "satlin") return satlin();
  if (name == "relu") return relu();
  if (name == "bent_identity") return bent_identity();
  if (name == "isru") return isru();
  if (name == "isrlu") return isrlu();
  if (name == "arctan2pi") return arctan2pi();
  if (name == "tanh") return tanh();
  if (name == "sigmoid_shifted") return sigmoid_shifted();
  if (name == "elliot") return elliot();
  if (name == "arcsinh") return arcsinh();
  if (name == "logarithmic") return logarithmic();
  if (name == "soft_threshold") return soft_threshold();
  throw std::invalid_argument("unknown activation key: " + std::string(key));
}

namespace {

std::shared_ptr<Node> make_combinator(ActKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->has_potential = false;
  n->domain = {-kInf, kInf};
  return n;
}

}  // namespace

ScalarActivation ScalarActivation::scale(const ScalarActivation& a,
                                         double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("scale factors must be positive");
  if (alpha * beta > 1.0)
    throw std::invalid_argument("scale requires alpha*beta <= 1");
  if (alpha == 1.0 && beta == 1.0) return a;
  auto n = make_combinator(ActKind::scaled);
  n->alpha = alpha;
  n->beta = beta;
  n->children = {a.node_};
  return ScalarActivation(std::move(n));
}

ScalarActivation ScalarActivation::convex_combination(
    const std::vector<std::pair<double, ScalarActivation>>& terms) {
  if (terms.empty()) throw std::invalid_argument("empty combination");
  double sum = 0.0;
  for (const auto& [w, act] : terms) {
    if (!(w > 0.0 && w <= 1.0))
      throw std::invalid_argument("weights must lie in (0,1]");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");
  if (terms.size() == 1) return terms[0].second;
  auto n = make_combinator(ActKind::convex_combination);
  for (const auto& [w, act] : terms) {
    n->weights.push_back(w);
    n->children.push_back(act.node_);
  }
  return ScalarActivation(std::move(n));
}

ScalarActivation ScalarActivation::compose(const ScalarActivation& outer,
                                           const ScalarActivation& inner) {
  auto n = make_combinator(ActKind::composed);
  n->children = {outer.node_, inner.node_};
  return ScalarActivation(std::move(n));
}

ScalarActivation ScalarActivation::complement(const ScalarActivation& a) {
  auto n = make_combinator(ActKind::complement);
  n->children = {a.node_};
  return ScalarActivation(std::move(n));
}

ScalarActivation ScalarActivation::half_difference(const ScalarActivation& a1,
                                                   const ScalarActivation& a2) {
  auto n = make_combinator(ActKind::half_difference);
  n->children = {a1.node_, a2.node_};
  return ScalarActivation(std::move(n));
}

ScalarActivation ScalarActivation::reflected_compose(
    const ScalarActivation& a1, const ScalarActivation& a2) {
  auto n = make_combinator(ActKind::reflected_compose);
  n->children = {a1.node_, a2.node_};
  return ScalarActivation(std::move(n));
}

double ScalarActivation::eval(double x) const { return eval_node(*node_, x); }

double ScalarActivation::potential(double y) const {
  if (!node_->has_potential)
    throw std::logic_error("combinator activations have no stored potential");
  return potential_catalog(*node_, y);
}

bool ScalarActivation::has_potential() const { return node_->has_potential; }

Interval ScalarActivation::potential_domain() const { return node_->domain; }

namespace {

bool bounded_node(const Node& n) {
  switch (n.kind) {
    case ActKind::scaled:
      return bounded_node(*n.children[0]);
    case ActKind::convex_combination: {
      for (const auto& c : n.children)
        if (!bounded_node(*c)) return false;
      return true;
    }
    case ActKind::composed:
      // the range of the composition is bounded if either factor's is
      return bounded_node(*n.children[0]) || bounded_node(*n.children[1]);
    case ActKind::complement:
    case ActKind::half_difference:
    case ActKind::reflected_compose:
      return false;  // no closed rule; stay conservative
    default:
      return n.domain.bounded();
  }
}

}  // namespace

bool ScalarActivation::potential_domain_bounded() const {
  return bounded_node(*node_);
}

bool ScalarActivation::conjugate_full_domain() const {
  return node_->conjugate_full;
}

ActKind ScalarActivation::kind() const { return node_->kind; }

std::string ScalarActivation::key() const {
  if (node_->kind == ActKind::prelu) {
    std::ostringstream os;
    os << "prelu:" << node_->slope;
    return os.str();
  }
  return kind_name(node_->kind);
}

const ScalarActivation::KernelInfo* ScalarActivation::kernel() const {
  return node_->kern ? &*node_->kern : nullptr;
}

double prox_oracle(const ScalarActivation& a, double x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const Interval dom = a.potential_domain();
  // |prox(x)| <= |x| since the activation is nonexpansive and fixes 0, so
  // [-|x|, |x|] is a valid bracket; pad a little and clip to the domain.
  const double r = std::fabs(x) + 1.0;
  double lo = std::max(-r, dom.lo);
  double hi = std::min(r, dom.hi);
  if (!(lo <= hi))
    throw std::runtime_error("prox_oracle: empty bracketing interval");

  const auto objective = [&](double y) {
    const double phi = a.potential(y);
    return phi + (x - y) * (x - y) / 2.0;
  };

  // golden-section search; the objective is strictly convex on the domain
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = objective(d);
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace proxnet
