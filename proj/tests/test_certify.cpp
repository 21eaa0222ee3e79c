#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "proxnet/certify.hpp"

using proxnet::Matrix;
using proxnet::Network;
using proxnet::Vector;

namespace {

proxnet::Layer id_act_layer(Matrix w) {
  const int rows = static_cast<int>(w.rows());
  return {std::move(w), proxnet::Vector::Zero(rows),
          proxnet::ActivationOperator::separable(
              rows, proxnet::ScalarActivation::identity())};
}

// Closed-form theta: sum over all subsets {j_1 < ... < j_k} of {1..i-1} of
// the product of composite norms of the induced chain segments.  Independent
// of the recursion under test.
double theta_closed_form(const std::vector<Matrix>& weights, int i) {
  double total = 0.0;
  const int cuts = i - 1;
  for (std::uint64_t bits = 0; bits < (1ull << cuts); ++bits) {
    // segment boundaries: 0, the selected cut points, then i
    std::vector<int> bounds = {0};
    for (int c = 1; c <= cuts; ++c)
      if ((bits >> (c - 1)) & 1) bounds.push_back(c);
    bounds.push_back(i);
    double prod = 1.0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      // product W_{hi} * ... * W_{lo+1} over the segment (lo, hi]
      Matrix seg = weights[bounds[s]];
      for (int k = bounds[s] + 1; k < bounds[s + 1]; ++k)
        seg = weights[k] * seg;
      prod *= proxnet::spectral_norm(seg);
    }
    total += prod;
  }
  return total;
}

std::vector<Matrix> random_chain(std::mt19937_64& rng, int len, int max_dim) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<int> dims(len + 1);
  for (int& d : dims) d = 1 + static_cast<int>(rng() % max_dim);
  dims[len] = dims[0];  // close the chain
  std::vector<Matrix> chain;
  for (int i = 0; i < len; ++i) {
    Matrix w(dims[i + 1], dims[i]);
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) w(r, c) = unif(rng);
    chain.push_back(std::move(w));
  }
  return chain;
}

}  // namespace

TEST_CASE("theta recursion on pinned chains") {
  const Matrix id2 = Matrix::Identity(2, 2);
  CHECK(proxnet::theta_sequence({0.5 * id2}).back() == doctest::Approx(0.5));

  const auto theta2 = proxnet::theta_sequence({2.0 * id2, 0.5 * id2});
  REQUIRE(theta2.size() == 3);
  CHECK(theta2[0] == 1.0);
  CHECK(theta2[1] == doctest::Approx(2.0));
  CHECK(theta2[2] == doctest::Approx(2.0));  // ||W2 W1|| + theta1 ||W2||

  // a zero factor kills every later theta
  const auto theta0 = proxnet::theta_sequence({id2, Matrix::Zero(2, 2), id2});
  CHECK(theta0[1] == 1.0);
  CHECK(theta0[2] == 0.0);
  CHECK(theta0[3] == 0.0);
}

TEST_CASE("theta recursion matches the closed-form subset enumeration") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const int len = 1 + static_cast<int>(rng() % 3);  // up to 3 matrices
    const auto chain = random_chain(rng, len, 6);
    const auto theta = proxnet::theta_sequence(chain);
    for (int i = 1; i <= len; ++i) {
      const double oracle = theta_closed_form(chain, i);
      CHECK(theta[i] == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
}

TEST_CASE("admissible tuples obey the theta signal bound") {
  std::mt19937_64 rng(888);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int len = 1 + static_cast<int>(rng() % 3);
    const auto chain = random_chain(rng, len, 5);
    const auto theta = proxnet::theta_sequence(chain);
    for (int rep = 0; rep < 10; ++rep) {
      // construct an admissible tuple: ||x_0|| <= 1, then each block shrunk
      // below the norm of the chain combination of its predecessors
      std::vector<Vector> blocks;
      Vector x0(chain[0].cols());
      for (int k = 0; k < x0.size(); ++k) x0(k) = normal(rng);
      if (x0.norm() > 0.0) x0 *= unif01(rng) / x0.norm();
      blocks.push_back(x0);
      for (int i = 1; i <= len; ++i) {
        const Vector li = proxnet::chain_combination(chain, i, blocks);
        if (i == len) {
          // the bound applies to blocks 1..len with index i
          CHECK(li.norm() <= theta[i] * x0.norm() + 1e-9);
          break;
        }
        Vector xi = li;
        xi *= unif01(rng);  // any point with ||x_i|| <= ||L_i(...)||
        CHECK(xi.norm() <= theta[i] * x0.norm() + 1e-9);
        blocks.push_back(std::move(xi));
      }
    }
  }
}

TEST_CASE("smallest symmetric-part eigenvalue") {
  Matrix skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  CHECK(proxnet::mu_lower(skew) == doctest::Approx(0.0));
  CHECK(proxnet::mu_lower(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = -0.5;
  CHECK(proxnet::mu_lower(diag) == doctest::Approx(-0.5));
}

TEST_CASE("norm-bound sufficient condition on pinned chains") {
  const Matrix id = Matrix::Identity(2, 2);
  CHECK(proxnet::check_condition_iii({id}, 0.5));
  CHECK(proxnet::check_condition_iii({id}, 1.0));
  CHECK_FALSE(proxnet::check_condition_iii({3.0 * id}, 1.0));
  // once it passes at some alpha it keeps passing on the rest of the grid
  for (double alpha = 0.5; alpha <= 1.0 + 1e-9; alpha += 0.01)
    CHECK(proxnet::check_condition_iii({id}, alpha));
}

TEST_CASE("eta-search sufficient condition on pinned chains") {
  const Matrix id = Matrix::Identity(2, 2);
  const auto eta1 = proxnet::check_condition_iv({id}, 0.75, 100);
  REQUIRE(eta1.has_value());
  // analytic check at the eta that was found
  const double lhs = 0.75 * 1.0 + 0.25 *
                                       (proxnet::spectral_norm(
                                            id - *eta1 * id) -
                                        *eta1) *
                                       (1.0 - 1.0);
  CHECK(lhs <= 0.5 + 0.25 + 1e-12);

  CHECK(proxnet::check_condition_iv({0.1 * id}, 0.6).has_value());
  CHECK_THROWS_AS(proxnet::check_condition_iv({Matrix::Zero(2, 2)}, 0.75),
                  std::invalid_argument);
  CHECK_THROWS_AS(proxnet::check_condition_iv({id}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("network certification on pinned instances") {
  const Matrix id = Matrix::Identity(2, 2);
  SUBCASE("a single identity layer certifies at one half") {
    const Network net({id_act_layer(id)});
    const auto cert = proxnet::certify_network(net);
    REQUIRE(cert.alpha.has_value());
    CHECK(*cert.alpha == doctest::Approx(0.5));
    CHECK(cert.condition == proxnet::CertCondition::norm_bound);
    CHECK(cert.theta.front() == 1.0);
  }
  SUBCASE("two identity layers certify near two thirds") {
    // the composition of two firmly nonexpansive maps is 2/3-averaged,
    // and the certificate search must not report anything smaller
    const Network net({id_act_layer(id), id_act_layer(id)});
    const auto cert = proxnet::certify_network(net);
    REQUIRE(cert.alpha.has_value());
    CHECK(*cert.alpha >= 2.0 / 3.0 - 1e-9);
    CHECK(*cert.alpha <= 0.75 + 1e-9);
  }
  SUBCASE("a zero weight certifies at one half") {
    const Network net({id_act_layer(id), id_act_layer(Matrix::Zero(2, 2))});
    const auto cert = proxnet::certify_network(net);
    REQUIRE(cert.alpha.has_value());
    CHECK(*cert.alpha == 0.5);
    CHECK(cert.condition == proxnet::CertCondition::zero_factor);
  }
  SUBCASE("an expansive single layer is not certified") {
    const Network net({id_act_layer(3.0 * id)});
    const auto cert = proxnet::certify_network(net);
    CHECK_FALSE(cert.alpha.has_value());
    CHECK(cert.condition == proxnet::CertCondition::none);
  }
}

TEST_CASE("layerwise certification") {
  const Matrix id = Matrix::Identity(2, 2);
  SUBCASE("identity weight certifies at one half") {
    const Network net({id_act_layer(id)});
    const auto betas = proxnet::certify_layerwise(net);
    REQUIRE(betas.has_value());
    CHECK((*betas)[0] == doctest::Approx(0.5));
  }
  SUBCASE("contractive weight certifies near one half") {
    const Network net({id_act_layer(0.5 * id)});
    const auto betas = proxnet::certify_layerwise(net);
    REQUIRE(betas.has_value());
    // |2b - 1.5| + 0.5 <= 2b first holds at b = 0.5
    CHECK((*betas)[0] == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("expansive weight fails") {
    const Network net({id_act_layer(3.0 * id)});
    CHECK_FALSE(proxnet::certify_layerwise(net).has_value());
  }
}

TEST_CASE("sampled lower bound for the mixed operator norm") {
  const Matrix id = Matrix::Identity(2, 2);
  SUBCASE("identity weight at alpha one half sits on the boundary") {
    const auto est = proxnet::m_norm_lower_bound({id}, 0.5, 200, 1);
    CHECK(est.lower_bound == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("zero weights reduce to the affine term") {
    const double alpha = 0.8;
    const auto est =
        proxnet::m_norm_lower_bound({Matrix::Zero(2, 2)}, alpha, 200, 2);
    CHECK(est.lower_bound ==
          doctest::Approx((1.0 - alpha) / alpha).epsilon(1e-9));
  }
  SUBCASE("an expansive weight is refuted") {
    const auto est = proxnet::m_norm_lower_bound({3.0 * id}, 1.0, 200, 3);
    CHECK(est.lower_bound == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(est.lower_bound > 1.0);
  }
  SUBCASE("norm-bound certification keeps the sampled bound below one") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-0.3, 0.3);
    int certified = 0;
    for (int trial = 0; trial < 10; ++trial) {
      Matrix w(3, 3);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) w(r, c) = unif(rng);
      for (double alpha = 0.5; alpha <= 1.0 + 1e-9; alpha += 0.05) {
        if (proxnet::check_condition_iii({w}, alpha)) {
          ++certified;
          const auto est = proxnet::m_norm_lower_bound({w}, alpha, 500, 7);
          CHECK(est.lower_bound <= 1.0 + 1e-9);
        }
      }
    }
    CHECK(certified > 0);
  }
}

TEST_CASE("chain combinations compose the weight prefixes") {
  std::mt19937_64 rng(123);
  const auto chain = random_chain(rng, 3, 4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> blocks;
  for (int i = 0; i < 3; ++i) {
    Vector b(chain[static_cast<std::size_t>(i)].cols());
    for (int k = 0; k < b.size(); ++k) b(k) = normal(rng);
    blocks.push_back(std::move(b));
  }
  // direct evaluation of sum_k (W_i ... W_{k+1}) x_k for i = 3
  Vector direct = chain[2] * chain[1] * chain[0] * blocks[0] +
                  chain[2] * chain[1] * blocks[1] + chain[2] * blocks[2];
  const Vector got = proxnet::chain_combination(chain, 3, blocks);
  CHECK((got - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
}
