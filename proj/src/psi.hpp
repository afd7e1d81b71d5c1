#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pair.hpp"

namespace fdivlib {

/// The piecewise-linear concave curve psi(s) = sum_j min(p_j, q_j s).
///
/// psi is nondecreasing, concave, 1-Lipschitz, with 0 <= psi(s) <= min(1, s).
/// Its kinks sit at the distinct likelihood ratios p_j / q_j (coordinates
/// with q_j = 0 contribute a "ratio infinity" p-mass that caps
/// psi(inf) = 1 - P{q = 0}).  Every f-divergence of the underlying pair is a
/// mixture of the gaps min(1, s) - psi(s) against the curvature of f, which
/// is what makes this curve the right cross-validation object.
class PsiCurve {
 public:
  static PsiCurve from_pair(const DiscretePair& pair);

  /// psi(s); requires s >= 0.  Exact for the piecewise-linear form.
  double eval(double s) const;

  /// Left derivative at s > 0: the q-mass of {j : p_j >= s q_j}.
  double left_slope(double s) const;
  /// Right derivative at s >= 0: the q-mass of {j : p_j > s q_j}.
  double right_slope(double s) const;

  /// Distinct finite ratios p_j/q_j in increasing order (may start at 0).
  const std::vector<double>& knots() const { return knots_; }

  /// P{q = 0}: p-mass sitting at ratio infinity.
  double mass_at_infinity() const { return p_inf_; }

  /// lim_{s -> inf} psi(s) = 1 - P{q = 0}.
  double value_at_infinity() const { return 1.0 - p_inf_; }

  /// CSV rows "s,psi" over the knots merged with a uniform grid of
  /// `grid_points` samples on [0, max(1, last knot)].
  std::string to_csv(std::size_t grid_points) const;

 private:
  std::vector<double> knots_;   // distinct finite ratios, increasing
  std::vector<double> p_mass_;  // p-mass at each knot
  std::vector<double> q_mass_;  // q-mass at each knot
  std::vector<double> cum_p_;   // cum_p_[k] = sum_{i<=k} p_mass_[i]
  std::vector<double> suf_q_;   // suf_q_[k] = sum_{i>k} q_mass_[i]
  double p_inf_ = 0.0;          // p-mass with q_j = 0

  // index of last knot <= s, or -1
  int last_knot_at_or_below(double s) const;
};

/// Construct psi for a pair.  Validates the pair.
PsiCurve psi(const DiscretePair& pair);

/// min(1, s) - psi(s): the elementary piecewise-linear divergence with
/// curvature concentrated at s.  At s = 1 this is the total variation
/// distance.  Requires s > 0.
double primitive_divergence(const DiscretePair& pair, double s);

}  // namespace fdivlib
