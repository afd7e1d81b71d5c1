#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ext_real.hpp"

namespace fdivlib {

/// Point mass in the curvature measure of a convex generator: the second
/// derivative, taken in the distributional sense, carries `mass` at
/// `location`.  Piecewise-linear generators are described entirely by atoms.
struct Atom {
  double location;
  double mass;
};

/// Convex generator f : (0, inf) -> R with f(1) = 0, together with the
/// analytic side data the rest of the library needs: the boundary limits
/// f(0+) and f'(inf) (either may be +inf), the absolutely continuous part of
/// the curvature (second_derivative, null when absent) and its atoms.
///
/// The `symmetric` flag records that the representative itself satisfies
/// f(x) = x f(1/x) exactly; several closed forms are valid only under that
/// identity.
struct Generator {
  std::string name;                                ///< display name, e.g. "power(3)"
  std::string key;                                 ///< registry key
  std::vector<double> params;                      ///< registry parameters
  std::function<double(double)> eval_fn;           ///< f(x) for x > 0
  ExtReal f_at_zero;                               ///< lim_{x -> 0+} f(x)
  ExtReal f_prime_at_infinity;                     ///< lim_{x -> inf} f(x)/x
  std::function<double(double)> second_derivative; ///< f''(x), null if purely atomic
  std::vector<Atom> atoms;                         ///< curvature point masses
  bool symmetric = false;

  /// f(x); requires x > 0.
  double eval(double x) const;

  /// Largest value the divergence can take: f(0+) + f'(inf).
  /// Attained exactly by mutually singular distributions.
  ExtReal max_divergence_value() const { return f_at_zero + f_prime_at_infinity; }

  /// True when the divergence is bounded (max_divergence_value finite).
  bool is_finite_divergence() const { return max_divergence_value().is_finite(); }

  /// True for generators whose curvature is a single atom with no smooth
  /// part -- the elementary piecewise-linear family (and total variation,
  /// which differs from a member of it by an affine shift).
  bool is_primitive_shaped() const {
    return !second_derivative && atoms.size() == 1;
  }
};

/// Construct a registry generator.
///
/// Keys: "kl", "tv", "hellinger", "chi2", "triangular", "capacitory" take no
/// parameters; "power" takes one parameter l > 1; "primitive" takes one
/// parameter s > 0.  Throws std::invalid_argument for unknown keys or bad
/// parameters.
Generator make_generator(const std::string& key,
                         const std::vector<double>& params = {});

/// Registry keys accepted by make_generator, in a fixed order.
const std::vector<std::string>& registry_keys();

/// Construct a named custom generator from a declarative JSON document:
///
///   { "name": "my_power",            // required, the display name
///     "base": "power",               // required, a registry key
///     "params": [2.5],               // optional, base-family parameters
///     "symmetric": false }           // optional, default false
///
/// Custom generators re-parametrize registry families; tabulated values are
/// not accepted because every generator must carry closed-form limits.  A
/// declared symmetry is verified by sampling |f(x) - x f(1/x)| and rejected
/// if the identity fails.  Throws std::invalid_argument on malformed input.
Generator make_generator_from_json(const std::string& json_text);

}  // namespace fdivlib
