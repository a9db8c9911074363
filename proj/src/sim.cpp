#include "genea/sim.hpp"

namespace genea {

PlanarTree condition_on_count(double t, int n, ConditionMethod method, RandomStream& rng,
                              std::uint64_t max_attempts) {
  if (!(t > 0.0)) throw ParameterError("horizon t must be > 0");
  if (n < 1) throw ParameterError("population size n must be >= 1");
  if (method == ConditionMethod::ExcursionConcat)
    return tree_from_contour(sample_conditioned_contour(t, n, rng, max_attempts), t);

  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    ContourPath path = sample_contour_truncated(t, rng);
    if (static_cast<int>(crossings(path, t).up.size()) == n) return tree_from_contour(path, t);
  }
  throw ResourceError("conditioning rejection cap exceeded", max_attempts);
}

}  // namespace genea
