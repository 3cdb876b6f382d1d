#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mixlab/mixlab.hpp"
#include "oracle.hpp"

using namespace mixlab;

TEST_CASE("total variation matches the loop definition and its axioms") {
  CounterRng rng{11, 0};
  for (int k = 0; k < 50; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(9));
    Vector a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.next_unit();
      b(i) = rng.next_unit();
    }
    a /= a.sum();
    b /= b.sum();
    const double tv = total_variation(a, b);
    CHECK(tv == doctest::Approx(oracle::total_variation(a, b)).epsilon(1e-14));
    CHECK(tv == doctest::Approx(total_variation(b, a)).epsilon(1e-14));
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0 + 1e-15);
  }
  Vector a(2), b(3);
  a << 0.5, 0.5;
  b << 0.4, 0.3, 0.3;
  CHECK_THROWS_AS((void)total_variation(a, b), std::invalid_argument);
}

TEST_CASE("dobrushin coefficient matches pairwise enumeration") {
  CounterRng rng{12, 0};
  for (int k = 0; k < 40; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(7));
    const StochasticMatrix P = fixture::random_stochastic(n, rng);
    CHECK(dobrushin_coefficient(P) ==
          doctest::Approx(oracle::dobrushin(P.entries())).epsilon(1e-14));
  }
  // Rank one: all rows equal, coefficient zero.
  Matrix flat(3, 3);
  flat << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
  CHECK(dobrushin_coefficient(StochasticMatrix(flat)) == 0.0);
  CHECK(dobrushin_coefficient(StochasticMatrix::identity(4)) == 1.0);
}

TEST_CASE("dobrushin coefficient is submultiplicative over products") {
  CounterRng rng{13, 0};
  for (int k = 0; k < 100; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(7));
    const StochasticMatrix P = fixture::random_stochastic(n, rng);
    const StochasticMatrix Q = fixture::random_stochastic(n, rng);
    CHECK(dobrushin_coefficient(P * Q) <=
          dobrushin_coefficient(P) * dobrushin_coefficient(Q) + 1e-12);
  }
}

TEST_CASE("stochastic matrices reject malformed input") {
  Matrix bad_sum(2, 2);
  bad_sum << 0.5, 0.4, 0.5, 0.5;
  CHECK_THROWS_AS(StochasticMatrix{bad_sum}, std::invalid_argument);

  Matrix negative(2, 2);
  negative << 1.2, -0.2, 0.5, 0.5;
  CHECK_THROWS_AS(StochasticMatrix{negative}, std::invalid_argument);

  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(StochasticMatrix{rect}, std::invalid_argument);

  // Round-off sized negatives are clamped to zero instead of rejected.
  Matrix tiny(2, 2);
  tiny << 1.0 + 1e-13, -1e-13, 0.3, 0.7;
  const StochasticMatrix P(tiny);
  CHECK(P(0, 1) == 0.0);
}

TEST_CASE("laziness means every holding probability is at least one half") {
  Matrix lazy(2, 2);
  lazy << 0.5, 0.5, 0.9, 0.1;
  CHECK(!StochasticMatrix(lazy).is_lazy());
  lazy << 0.5, 0.5, 0.4, 0.6;
  CHECK(StochasticMatrix(lazy).is_lazy());
  CHECK(StochasticMatrix::identity(3).is_lazy());
}

TEST_CASE("matrix products match plain multiplication and stay stochastic") {
  CounterRng rng{14, 0};
  for (int k = 0; k < 30; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(7));
    const StochasticMatrix P = fixture::random_stochastic(n, rng);
    const StochasticMatrix Q = fixture::random_stochastic(n, rng);
    const StochasticMatrix R = P * Q;
    const Matrix naive = oracle::multiply(P.entries(), Q.entries());
    CHECK((R.entries() - naive).cwiseAbs().maxCoeff() <= 1e-14);
    for (Index x = 0; x < n; ++x)
      CHECK(std::abs(R.entries().row(x).sum() - 1.0) <= 1e-14);
  }
}

TEST_CASE("distributions validate, transport, and expose their minima") {
  Vector bad(3);
  bad << 0.5, 0.6, 0.1;
  CHECK_THROWS_AS(Distribution{bad}, std::invalid_argument);
  bad << 0.7, -0.2, 0.5;
  CHECK_THROWS_AS(Distribution{bad}, std::invalid_argument);

  const Distribution u = Distribution::uniform(4);
  CHECK(u.min_mass() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u.strictly_positive());
  const Distribution p = Distribution::point_mass(4, 2);
  CHECK(p(2) == 1.0);
  CHECK(!p.strictly_positive());

  CounterRng rng{15, 0};
  const StochasticMatrix P = fixture::random_stochastic(5, rng);
  Vector mass(5);
  mass << 0.1, 0.2, 0.3, 0.25, 0.15;
  const Distribution mu(mass);
  const Distribution nu = mu.advanced_by(P);
  Vector expected = Vector::Zero(5);
  for (Index x = 0; x < 5; ++x)
    for (Index y = 0; y < 5; ++y) expected(y) += mass(x) * P(x, y);
  CHECK((nu.mass() - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("chain sequences index kernels by absolute time") {
  CounterRng rng{16, 0};
  std::vector<StochasticMatrix> steps;
  for (int k = 0; k < 4; ++k) steps.push_back(fixture::random_stochastic(3, rng));
  const ChainSequence seq = ChainSequence::from_matrices(steps, 5);
  CHECK(seq.size() == 3);
  CHECK(seq.window_lo() == 5);
  CHECK(seq.window_hi() == 8);
  CHECK(seq.covers(5, 8));
  CHECK(seq.covers(4, 8));   // the product over (4, 8] needs only steps 5..8
  CHECK(!seq.covers(3, 8));  // step 4 is missing
  CHECK(!seq.covers(5, 9));  // step 9 is missing
  for (int k = 0; k < 4; ++k)
    CHECK((seq.matrix(5 + k).entries() - steps[static_cast<std::size_t>(k)].entries())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  CHECK_THROWS_AS((void)seq.matrix(9), std::out_of_range);
  CHECK_THROWS_AS((void)seq.matrix(4), std::out_of_range);

  const ChainSequence sampled = fixture::lazy_environment(4, 99);
  CHECK((sampled.matrix(-3).entries() - sampled.matrix(-3).entries()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((sampled.matrix(7).entries() - sampled.matrix(7).entries()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("window products compose and reduce to the identity") {
  const ChainSequence seq = fixture::lazy_environment(5, 21);
  CHECK((window_product(seq, 2, 2).entries() - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() ==
        0.0);
  for (Index x = 0; x < 5; ++x) {
    const Vector lhs = window_product(seq, -2, 6).row(x).transpose();
    const Vector rhs = oracle::law_from(seq, x, -2, 6);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);
  }
  const Matrix split =
      (window_product(seq, -2, 3) * window_product(seq, 3, 6)).entries();
  CHECK((window_product(seq, -2, 6).entries() - split).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("backward limits recover the stationary law of a constant chain") {
  CounterRng rng{17, 0};
  for (int k = 0; k < 20; ++k) {
    const Index n = 2 + static_cast<Index>(rng.next_below(15));
    const StochasticMatrix P = fixture::random_lazy(n, rng);
    const ChainSequence seq = fixture::constant_environment(P);
    const TargetResult res = target_distribution(seq, 0, 1e-12);
    CHECK(res.certificate.delta <= 1e-12);
    const Vector pi = oracle::stationary(P.entries());
    CHECK((res.pi.mass() - pi).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("backward limits refuse environments that never contract") {
  const ChainSequence frozen = fixture::constant_environment(StochasticMatrix::identity(3));
  CHECK_THROWS_AS((void)target_distribution(frozen, 0, 1e-9, 64), NoContractionError);

  Matrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const ChainSequence flip = fixture::constant_environment(StochasticMatrix(swap));
  try {
    (void)target_distribution(flip, 0, 1e-9, 16);
    CHECK(false);
  } catch (const NoContractionError& e) {
    CHECK(e.achieved() == 1.0);
    CHECK(e.lookback() <= 16);
  }

  // A finite explicit window limits how far back the search may reach.
  CounterRng rng{18, 0};
  std::vector<StochasticMatrix> steps;
  for (int k = 0; k < 3; ++k) steps.push_back(fixture::random_lazy(4, rng));
  const ChainSequence shallow = ChainSequence::from_matrices(steps, 1);
  CHECK_THROWS_AS((void)target_distribution(shallow, 3, 1e-14), NoContractionError);
  CHECK_THROWS_AS((void)target_distribution(shallow, 0, 1e-9), std::out_of_range);
}

TEST_CASE("target series advance the anchor and stay invariant") {
  const ChainSequence seq = fixture::lazy_environment(6, 31);
  const TargetSeries targets(seq, 0, 12, 1e-13);
  CHECK(targets.first_time() == 0);
  CHECK(targets.last_time() == 12);
  for (std::int64_t t : {3, 8, 12}) {
    const TargetResult fresh = target_distribution(seq, t, 1e-13);
    CHECK((targets.at(t).mass() - fresh.pi.mass()).cwiseAbs().maxCoeff() <= 1e-11);
  }
  CHECK(targets.certificate(5).lookback == targets.certificate(0).lookback + 5);
  CHECK(targets.certificate(5).delta == targets.certificate(0).delta);
  CHECK(targets.invariance_residual(seq, 2, 11) <= 1e-11);
  CHECK_THROWS_AS((void)targets.at(13), std::out_of_range);
  CHECK_THROWS_AS((void)targets.at(-1), std::out_of_range);
  CHECK_THROWS_AS(TargetSeries(seq, 4, 3), std::invalid_argument);
}

TEST_CASE("drift floors lie in the unit interval and flag vanishing mass") {
  const ChainSequence seq = fixture::lazy_environment(5, 32);
  const TargetSeries targets(seq, 0, 6, 1e-12);
  for (std::int64_t t = 1; t <= 6; ++t) {
    const double g = targets.drift_floor(t);
    CHECK(g > 0.0);
    CHECK(g <= 1.0);
    // Direct recomputation from the stored masses.
    double expect = 1.0;
    for (Index z = 0; z < 5; ++z)
      expect = std::min(expect, targets.at(t - 1)(z) / targets.at(t)(z));
    CHECK(g == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("distance to the target is monotone and sandwiches the coefficient") {
  const ChainSequence seq = fixture::lazy_environment(5, 33);
  const TargetSeries targets(seq, 0, 10, 1e-13);
  const std::vector<double> d = distance_trajectory(seq, targets, 0, 10);
  REQUIRE(d.size() == 11);
  for (std::size_t t = 1; t < d.size(); ++t) CHECK(d[t] <= d[t - 1] + 1e-12);
  for (std::int64_t t = 0; t <= 10; ++t) {
    const double dt = distance_to_target(seq, 0, t, targets);
    CHECK(dt == doctest::Approx(d[static_cast<std::size_t>(t)]).epsilon(1e-13));
    const double delta = dobrushin_coefficient(window_product(seq, 0, t));
    CHECK(dt <= delta + 1e-12);
    CHECK(delta <= 2.0 * dt + 1e-12);
  }
}

TEST_CASE("mixing time scans match a naive rescan of the trajectory") {
  const ChainSequence seq = fixture::lazy_environment(6, 34);
  const TargetSeries targets(seq, 0, 40, 1e-12);
  const double eps = 0.05;
  const std::optional<std::int64_t> t_mix = mixing_time(seq, targets, 0, eps, 40);
  REQUIRE(t_mix.has_value());
  const std::vector<double> d = distance_trajectory(seq, targets, 0, 40);
  std::int64_t naive = -1;
  for (std::int64_t t = 0; t <= 40; ++t)
    if (d[static_cast<std::size_t>(t)] <= eps) {
      naive = t;
      break;
    }
  CHECK(*t_mix == naive);
  CHECK(*t_mix > 0);

  // A horizon that stops before the threshold reports no mixing time.
  if (*t_mix > 1) {
    const TargetSeries short_targets(seq, 0, *t_mix - 1, 1e-12);
    CHECK(!mixing_time(seq, short_targets, 0, eps, *t_mix - 1).has_value());
  }

  // The coefficient dominates the distance, so its crossing cannot be earlier.
  const std::optional<std::int64_t> t_dob = mixing_time_dobrushin(seq, 0, eps, 40);
  REQUIRE(t_dob.has_value());
  CHECK(*t_dob >= *t_mix);
}

TEST_CASE("contractive step counting sees exactly the mixing kernels") {
  CounterRng rng{35, 0};
  const StochasticMatrix mixing = fixture::random_stochastic(4, rng);
  const StochasticMatrix frozen = StochasticMatrix::identity(4);
  const ChainSequence seq = ChainSequence::from_sampler(4, [&](std::int64_t t) {
    return t % 3 == 0 ? mixing : frozen;
  });
  // Times 0, 3, 6, 9 carry the mixing kernel inside [0, 10]: four of them.
  CHECK(count_contractive_steps(seq, 0, 10, 0.05) == 4);
  CHECK(count_contractive_steps(seq, 1, 2, 0.05) == 0);
  CHECK_THROWS_AS((void)count_contractive_steps(seq, 5, 4, 0.1), std::invalid_argument);
}
