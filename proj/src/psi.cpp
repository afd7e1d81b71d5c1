#include "psi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fdivlib {

namespace {
// Ratios equal within relative 1e-12 are treated as one knot, so that
// floating-point ties cannot create zero-length segments downstream.
bool same_ratio(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, a, b});
}
}  // namespace

PsiCurve PsiCurve::from_pair(const DiscretePair& pair) {
  pair.validate();
  struct Entry {
    double ratio, p, q;
  };
  std::vector<Entry> entries;
  entries.reserve(pair.size());
  PsiCurve c;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    double p = pair.p[j], q = pair.q[j];
    if (p == 0.0 && q == 0.0) continue;  // lambda-null coordinate
    if (q == 0.0) {
      c.p_inf_ += p;  // ratio infinity
      continue;
    }
    entries.push_back({p / q, p, q});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.ratio < b.ratio; });
  for (const Entry& e : entries) {
    if (!c.knots_.empty() && same_ratio(c.knots_.back(), e.ratio)) {
      c.p_mass_.back() += e.p;
      c.q_mass_.back() += e.q;
    } else {
      c.knots_.push_back(e.ratio);
      c.p_mass_.push_back(e.p);
      c.q_mass_.push_back(e.q);
    }
  }
  const std::size_t k = c.knots_.size();
  c.cum_p_.resize(k);
  c.suf_q_.resize(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += c.p_mass_[i];
    c.cum_p_[i] = acc;
  }
  acc = 0.0;
  for (std::size_t i = k; i-- > 0;) {
    c.suf_q_[i] = acc;
    acc += c.q_mass_[i];
  }
  return c;
}

int PsiCurve::last_knot_at_or_below(double s) const {
  // upper_bound gives the first knot > s
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  return static_cast<int>(it - knots_.begin()) - 1;
}

double PsiCurve::eval(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("psi: argument must be >= 0");
  int k = last_knot_at_or_below(s);
  // p-mass of ratios <= s, plus s times q-mass of ratios > s
  double total_q_above = (k < 0) ? (suf_q_.empty() ? 0.0 : suf_q_[0] + q_mass_[0])
                                 : suf_q_[static_cast<std::size_t>(k)];
  double cum = (k < 0) ? 0.0 : cum_p_[static_cast<std::size_t>(k)];
  return cum + s * total_q_above;
}

double PsiCurve::right_slope(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("psi: argument must be >= 0");
  int k = last_knot_at_or_below(s);
  if (k < 0) return suf_q_.empty() ? 0.0 : suf_q_[0] + q_mass_[0];
  return suf_q_[static_cast<std::size_t>(k)];
}

double PsiCurve::left_slope(double s) const {
  if (!(s > 0.0)) throw std::domain_error("left slope needs s > 0");
  // q-mass of {ratio >= s}: like right_slope but knots equal to s included
  auto it = std::lower_bound(knots_.begin(), knots_.end(), s);
  int k = static_cast<int>(it - knots_.begin()) - 1;  // last knot < s
  if (k < 0) return suf_q_.empty() ? 0.0 : suf_q_[0] + q_mass_[0];
  return suf_q_[static_cast<std::size_t>(k)];
}

std::string PsiCurve::to_csv(std::size_t grid_points) const {
  double hi = 1.0;
  if (!knots_.empty()) hi = std::max(hi, knots_.back());
  std::vector<double> xs = knots_;
  if (grid_points >= 2) {
    for (std::size_t i = 0; i < grid_points; ++i)
      xs.push_back(hi * static_cast<double>(i) /
                   static_cast<double>(grid_points - 1));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::string out = "s,psi\n";
  char buf[80];
  for (double s : xs) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s, eval(s));
    out += buf;
  }
  return out;
}

PsiCurve psi(const DiscretePair& pair) { return PsiCurve::from_pair(pair); }

double primitive_divergence(const DiscretePair& pair, double s) {
  if (!(s > 0.0))
    throw std::domain_error("primitive divergence: s must be positive");
  pair.validate();
  double acc = 0.0;
  for (std::size_t j = 0; j < pair.size(); ++j)
    acc += std::min(pair.p[j], pair.q[j] * s);
  return std::min(1.0, s) - acc;
}

}  // namespace fdivlib
