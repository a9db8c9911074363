#include "genea/laws.hpp"

#include <cmath>

namespace genea {

namespace {

void require_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("t must be finite and > 0");
}

}  // namespace

BranchDepthLaw::BranchDepthLaw(double t) : t_(t) { require_t(t); }

double BranchDepthLaw::pdf(double tau) const {
  if (tau < 0.0 || tau > t_) throw DomainError("branch depth outside [0, t]");
  return (1.0 + t_) / t_ / ((1.0 + tau) * (1.0 + tau));
}

double BranchDepthLaw::cdf(double tau) const {
  if (tau < 0.0 || tau > t_) throw DomainError("branch depth outside [0, t]");
  return (1.0 + t_) / t_ * tau / (1.0 + tau);
}

double BranchDepthLaw::quantile(double u) const {
  if (u < 0.0 || u > 1.0) throw DomainError("quantile argument outside [0,1]");
  return u * t_ / (1.0 + t_ - u * t_);
}

ScalarLaw BranchDepthLaw::as_scalar_law() const {
  const BranchDepthLaw law = *this;
  ScalarLaw sl;
  sl.pdf = [law](double x) { return law.pdf(x); };
  sl.cdf = [law](double x) { return law.cdf(x); };
  sl.quantile = [law](double u) { return law.quantile(u); };
  sl.support_lo = 0.0;
  sl.support_hi = t_;
  return sl;
}

PopulationLaw::PopulationLaw(double t) : t_(t) { require_t(t); }

double PopulationLaw::pmf(int k) const {
  if (k < 0) throw DomainError("population size must be >= 0");
  if (k == 0) return t_ / (1.0 + t_);
  return std::pow(t_, k - 1) / std::pow(1.0 + t_, k + 1);
}

double PopulationLaw::cdf(int k) const {
  if (k < 0) throw DomainError("population size must be >= 0");
  // t/(1+t) + (1/(1+t)) (1 - (t/(1+t))^k), geometric series in closed form
  const double r = t_ / (1.0 + t_);
  return r + (1.0 - std::pow(r, k)) / (1.0 + t_);
}

ExtantCountLaw::ExtantCountLaw(double t) : t_(t) { require_t(t); }

double ExtantCountLaw::pmf(int k) const {
  if (k < 1) throw DomainError("extant count must be >= 1");
  return std::pow(t_, k - 1) / std::pow(1.0 + t_, k);
}

double ExtantCountLaw::cdf(int k) const {
  if (k < 1) throw DomainError("extant count must be >= 1");
  return 1.0 - std::pow(t_ / (1.0 + t_), k);
}

int ExtantCountLaw::quantile(double u) const {
  if (u < 0.0 || u >= 1.0) throw DomainError("quantile argument outside [0,1)");
  if (u == 0.0) return 1;
  const double k = std::ceil(std::log1p(-u) / (std::log(t_) - std::log1p(t_)));
  return k < 1.0 ? 1 : static_cast<int>(k);
}

double height_survival(double tau) {
  if (tau < 0.0) throw DomainError("height must be >= 0");
  return 1.0 / (1.0 + tau);
}

double progeny_pgf(double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("pgf argument outside [0,1]");
  return 1.0 - std::sqrt(1.0 - x);
}

double mark_prob(double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("mark probability outside [0,1]");
  return std::sqrt(p);
}

namespace intensity {

double pi_density(double ell, double tau) {
  if (ell < 0.0 || ell > 1.0) throw DomainError("index coordinate outside [0,1]");
  if (!(tau > 0.0)) throw DomainError("depth must be > 0");
  return 1.0 / (tau * tau);
}

double rescaled_discrete_density(double tau, int n, double t_n) {
  if (n < 1) throw ParameterError("n must be >= 1");
  require_t(t_n);
  if (!(tau > 0.0) || !(tau < t_n / n)) throw DomainError("rescaled depth outside (0, t_n/n)");
  const double nn = static_cast<double>(n);
  const double d = 1.0 + nn * tau;
  return nn * nn / (d * d) * (1.0 + t_n) / t_n;
}

double subtree_discrete(double tau, double h, double t_i) {
  if (!(t_i > 0.0)) throw ParameterError("branch depth must be > 0");
  if (!(tau > 0.0) || !(tau < t_i)) throw DomainError("attach depth outside (0, t_i)");
  if (!(h > 0.0) || !(h < tau)) throw DomainError("subtree height outside (0, attach depth)");
  return 1.0 / ((1.0 + h) * (1.0 + h)) * (1.0 + tau) / tau;
}

double subtree_discrete_attach_rate(double tau) {
  if (!(tau > 0.0)) throw DomainError("attach depth must be > 0");
  return tau / (1.0 + tau);
}

double subtree_discrete_count_mass(double t_i) {
  if (!(t_i > 0.0)) throw ParameterError("branch depth must be > 0");
  return t_i - std::log1p(t_i);
}

double subtree_continuum(double tau, double h, double t_ell) {
  if (!(t_ell > 0.0)) throw ParameterError("main depth must be > 0");
  if (!(tau > 0.0) || !(tau < t_ell)) throw DomainError("attach depth outside (0, t_ell)");
  if (!(h > 0.0) || !(h < tau)) throw DomainError("subtree height outside (0, attach depth)");
  return 1.0 / (h * h);
}

double first_set_discrete(double tau, double kappa, double h, double p) {
  if (!(h > 0.0)) throw ParameterError("spine height must be > 0");
  if (!(p > 0.0) || p > 1.0) throw DomainError("sampling chance outside (0,1]");
  if (!(tau > 0.0) || !(tau < h)) throw DomainError("attach level outside (0, h)");
  if (!(kappa > 0.0) || !(kappa < h - tau)) throw DomainError("subtree height outside (0, h - tau)");
  return 1.0 / std::sqrt(p) / ((1.0 + kappa) * (1.0 + kappa)) * (1.0 + tau) / tau;
}

double first_set_continuum(double tau, double kappa, double h, double p) {
  if (!(h > 0.0)) throw ParameterError("spine height must be > 0");
  if (!(p > 0.0)) throw DomainError("sampling rate must be > 0");
  if (!(tau > 0.0) || !(tau < h)) throw DomainError("attach level outside (0, h)");
  if (!(kappa > 0.0) || !(kappa < h - tau)) throw DomainError("subtree height outside (0, h - tau)");
  return 1.0 / (std::sqrt(p) * kappa * kappa);
}

double pi_mass_above(double delta, double t) {
  require_t(t);
  if (!(delta > 0.0) || !(delta < t)) throw ParameterError("delta must lie in (0, t)");
  return 1.0 / delta - 1.0 / t;
}

double pi_depth_quantile(double u, double delta, double t) {
  if (u < 0.0 || u > 1.0) throw DomainError("quantile argument outside [0,1]");
  return 1.0 / (1.0 / delta - u * pi_mass_above(delta, t));
}

double pi_truncated_depth_cdf(double tau, double delta, double t) {
  if (tau < delta || tau > t) throw DomainError("depth outside [delta, t]");
  return (1.0 / delta - 1.0 / tau) / pi_mass_above(delta, t);
}

double subtree_continuum_mass(double t_ell, double kappa_min) {
  if (!(t_ell > 0.0)) throw ParameterError("main depth must be > 0");
  if (!(kappa_min > 0.0)) throw ParameterError("kappa_min must be > 0");
  if (t_ell <= kappa_min) return 0.0;
  return (t_ell - kappa_min) / kappa_min - std::log(t_ell / kappa_min);
}

double first_set_continuum_mass(double h, double p, double kappa_min) {
  if (!(h > 0.0)) throw ParameterError("spine height must be > 0");
  if (!(p > 0.0)) throw ParameterError("sampling rate must be > 0");
  if (!(kappa_min > 0.0)) throw ParameterError("kappa_min must be > 0");
  if (h <= kappa_min) return 0.0;
  return ((h - kappa_min) / kappa_min - std::log(h / kappa_min)) / std::sqrt(p);
}

}  // namespace intensity

}  // namespace genea
