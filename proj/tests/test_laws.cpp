#include <cmath>

#include "doctest.h"
#include "genea/laws.hpp"
#include "helpers.hpp"

using namespace genea;
using test::simpson;

TEST_CASE("branch depth law: pinned values") {
  const BranchDepthLaw law(1.0);
  CHECK(law.pdf(0.0) == doctest::Approx(2.0));
  CHECK(law.cdf(1.0) == doctest::Approx(1.0));
  CHECK(law.quantile(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(law.quantile(0.0) == doctest::Approx(0.0));
  CHECK(law.quantile(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(law.pdf(1.5), DomainError);
  CHECK_THROWS_AS(law.quantile(-0.1), DomainError);
  CHECK_THROWS_AS(BranchDepthLaw(0.0), ParameterError);
}

TEST_CASE("branch depth law: integral and inverse identities") {
  for (double t : {0.4, 1.0, 3.0}) {
    const BranchDepthLaw law(t);
    for (int i = 1; i <= 10; ++i) {
      const double tau = t * i / 10.0;
      const double integral = simpson([&](double x) { return law.pdf(x); }, 0.0, tau, 1000);
      CHECK(std::abs(integral - law.cdf(tau)) < 1e-6);
    }
    for (int i = 1; i < 1000; ++i) {
      const double u = i / 1000.0;
      CHECK(std::abs(law.cdf(law.quantile(u)) - u) < 1e-9);
    }
  }
}

TEST_CASE("population law: pinned values, normalization, criticality") {
  const PopulationLaw law(1.0);
  CHECK(law.pmf(0) == doctest::Approx(0.5));
  CHECK(law.pmf(1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(law.pmf(-1), DomainError);
  for (double t : {0.3, 1.0, 2.5}) {
    const PopulationLaw l(t);
    double total = l.pmf(0), mean = 0.0;
    for (int k = 1; k <= 400; ++k) {
      total += l.pmf(k);
      mean += k * l.pmf(k);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(l.cdf(400) == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("height survival and its population identity") {
  CHECK(height_survival(0.0) == doctest::Approx(1.0));
  CHECK(height_survival(1.0) == doctest::Approx(0.5));
  for (double tau : {0.2, 0.9, 3.0})
    CHECK(height_survival(tau) == doctest::Approx(1.0 - PopulationLaw(tau).pmf(0)).epsilon(1e-12));
  CHECK_THROWS_AS(height_survival(-0.5), DomainError);
}

TEST_CASE("extant count law ties to the population law") {
  const ExtantCountLaw law(1.0);
  CHECK(law.pmf(1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(law.pmf(0), DomainError);
  double total = 0.0;
  for (int k = 1; k <= 200; ++k) total += law.pmf(k);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  for (double t : {0.5, 1.0, 2.0}) {
    const ExtantCountLaw cond(t);
    const PopulationLaw pop(t);
    for (int k = 1; k <= 20; ++k)
      CHECK(cond.pmf(k) * height_survival(t) == doctest::Approx(pop.pmf(k)).epsilon(1e-12));
    for (double u : {0.05, 0.4, 0.95})
      CHECK(cond.cdf(cond.quantile(u)) >= u);
  }
}

TEST_CASE("progeny generating function and mark probability") {
  CHECK(progeny_pgf(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(progeny_pgf(1.0) == doctest::Approx(1.0));
  CHECK(progeny_pgf(0.0) == doctest::Approx(0.0));
  CHECK(mark_prob(0.04) == doctest::Approx(0.2).epsilon(1e-15));
  for (double p : {0.01, 0.25, 0.77})
    CHECK(mark_prob(p) == doctest::Approx(1.0 - progeny_pgf(1.0 - p)).epsilon(1e-12));
  CHECK_THROWS_AS(progeny_pgf(1.5), DomainError);
  CHECK_THROWS_AS(mark_prob(-0.1), DomainError);
}

TEST_CASE("continuum intensity: mass above a cut and quantile") {
  // total mass above depth 0.1 tends to 10 as the level grows
  CHECK(intensity::pi_mass_above(0.1, 1e6) == doctest::Approx(10.0).epsilon(1e-5));
  CHECK(intensity::pi_mass_above(0.1, 1.0) == doctest::Approx(9.0));
  const double numeric =
      simpson([](double x) { return intensity::pi_density(0.5, x); }, 0.1, 1.0, 4000);
  CHECK(numeric == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(intensity::pi_depth_quantile(0.5, 0.1, 1.0) == doctest::Approx(2.0 / 11.0).epsilon(1e-12));
  CHECK(intensity::pi_truncated_depth_cdf(0.1, 0.1, 1.0) == doctest::Approx(0.0));
  CHECK(intensity::pi_truncated_depth_cdf(1.0, 0.1, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(intensity::pi_mass_above(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(intensity::pi_mass_above(1.5, 1.0), ParameterError);
}

TEST_CASE("rescaled discrete intensity approaches 1/tau^2") {
  const double tau = 0.5;
  const double value = intensity::rescaled_discrete_density(tau, 1000000, 1000000.0);
  CHECK(std::abs(value * tau * tau - 1.0) < 1e-5);
  // and at moderate n it matches a direct finite-n computation
  const double direct = 100.0 * 100.0 / std::pow(1.0 + 100.0 * tau, 2) * 101.0 / 100.0;
  CHECK(intensity::rescaled_discrete_density(tau, 100, 100.0) ==
        doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(intensity::rescaled_discrete_density(2.0, 100, 100.0), DomainError);
}

TEST_CASE("attachment profile normalizes over heights at every depth") {
  for (double t_i : {0.3, 0.7, 1.0}) {
    for (int i = 1; i <= 100; ++i) {
      const double tau = t_i * i / 101.0;
      const double marginal =
          simpson([&](double h) { return intensity::subtree_discrete(tau, h, t_i); },
                  tau * 1e-9 + 1e-12, tau * (1.0 - 1e-9), 2000);
      CHECK(std::abs(marginal - 1.0) < 1e-6);
    }
  }
  CHECK_THROWS_AS(intensity::subtree_discrete(0.5, 0.6, 1.0), DomainError);
}

TEST_CASE("attachment rate integrates to the count mass") {
  for (double t_i : {0.3, 0.9, 2.0}) {
    const double numeric =
        simpson([](double tau) { return intensity::subtree_discrete_attach_rate(tau); }, 1e-12,
                t_i, 4000);
    CHECK(numeric == doctest::Approx(intensity::subtree_discrete_count_mass(t_i)).epsilon(1e-8));
  }
  CHECK(intensity::subtree_discrete_count_mass(0.9) ==
        doctest::Approx(0.9 - std::log(1.9)).epsilon(1e-12));
}

TEST_CASE("truncated continuum masses match quadrature") {
  const double xi_mass = intensity::subtree_continuum_mass(0.5, 0.1);
  CHECK(xi_mass == doctest::Approx(4.0 - std::log(5.0)).epsilon(1e-12));
  const double xi_numeric = simpson(
      [](double h) { return (0.5 - h) * intensity::subtree_continuum(0.5 * (1.0 - 1e-12), h, 0.5); },
      0.1, 0.5 - 1e-9, 4000);
  CHECK(xi_numeric == doctest::Approx(xi_mass).epsilon(1e-4));

  const double fs_mass = intensity::first_set_continuum_mass(1.0, 0.25, 0.1);
  CHECK(fs_mass == doctest::Approx(2.0 * (9.0 - std::log(10.0))).epsilon(1e-12));
  // quadrature over the truncated triangle with the printed 1/sqrt(p) factor
  const double fs_numeric =
      simpson([](double k) { return 2.0 * (1.0 - k) / (k * k); }, 0.1, 1.0 - 1e-9, 4000);
  CHECK(fs_numeric == doctest::Approx(fs_mass).epsilon(1e-4));

  CHECK(intensity::subtree_continuum_mass(0.05, 0.1) == 0.0);
  CHECK(intensity::first_set_continuum_mass(0.05, 0.25, 0.1) == 0.0);
}

TEST_CASE("first-set densities expose the printed normalization") {
  CHECK(intensity::first_set_continuum(0.3, 0.2, 1.0, 0.25) ==
        doctest::Approx(2.0 / (0.2 * 0.2)).epsilon(1e-12));
  CHECK(intensity::first_set_discrete(0.3, 0.2, 1.0, 0.25) ==
        doctest::Approx(2.0 / (1.2 * 1.2) * 1.3 / 0.3).epsilon(1e-12));
  CHECK_THROWS_AS(intensity::first_set_continuum(0.3, 0.8, 1.0, 0.25), DomainError);
  CHECK_THROWS_AS(intensity::first_set_discrete(1.2, 0.1, 1.0, 0.25), DomainError);
}

TEST_CASE("scalar law wrapper is consistent with the class") {
  const BranchDepthLaw law(2.0);
  const ScalarLaw sl = law.as_scalar_law();
  CHECK(sl.support_hi == doctest::Approx(2.0));
  for (double x : {0.1, 0.9, 1.7}) {
    CHECK(sl.pdf(x) == doctest::Approx(law.pdf(x)));
    CHECK(sl.cdf(x) == doctest::Approx(law.cdf(x)));
  }
  CHECK(sl.quantile(0.5) == doctest::Approx(law.quantile(0.5)));
}
