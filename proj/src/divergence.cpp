#include "divergence.hpp"

namespace fdivlib {

double divergence_term(const Generator& g, double p, double q) {
  if (q > 0.0) {
    if (p == 0.0) return q * g.f_at_zero.as_double();
    return q * g.eval_fn(p / q);
  }
  if (p == 0.0) return 0.0;  // lambda-null coordinate
  return p * g.f_prime_at_infinity.as_double();
}

double divergence_unchecked(const Generator& g, const double* p,
                            const double* q, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += divergence_term(g, p[j], q[j]);
  return acc;
}

ExtReal divergence(const Generator& g, const DiscretePair& pair) {
  pair.validate();
  return ExtReal(divergence_unchecked(g, pair.p.data(), pair.q.data(),
                                      pair.size()));
}

}  // namespace fdivlib
