#include "joint_range.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "divergence.hpp"

namespace fdivlib {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

/// SplitMix64: tiny, seedable, reproducible across platforms.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform on (0, 1] (strictly positive, safe under log).
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Uniform sample from the probability simplex via exponential spacings.
std::vector<double> simplex_sample(SplitMix64& rng, std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = -std::log(rng.uniform_pos());
    sum += v[j];
  }
  for (std::size_t j = 0; j < n; ++j) v[j] /= sum;
  return v;
}

/// With probability 1/4, zero one coordinate and renormalize (boundary
/// strata carry the extreme joint-range points).  All random draws happen
/// unconditionally so the stream layout is fixed.
void maybe_zero_coordinate(SplitMix64& rng, std::vector<double>& v) {
  const double flip = rng.uniform01();
  const std::size_t idx = static_cast<std::size_t>(rng.next() % v.size());
  if (flip >= 0.25) return;
  const double removed = v[idx];
  const double rest = 1.0 - removed;
  if (rest < 1e-9) return;  // nearly all mass on idx: keep the sample as-is
  v[idx] = 0.0;
  for (double& x : v) x /= rest;
}

bool point_less(const RangePoint& a, const RangePoint& b) {
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double x = a.values[i].as_double();
    const double y = b.values[i].as_double();
    if (x != y) return x < y;
  }
  if (a.source.p != b.source.p)
    return std::lexicographical_compare(a.source.p.begin(), a.source.p.end(),
                                        b.source.p.begin(), b.source.p.end());
  return std::lexicographical_compare(a.source.q.begin(), a.source.q.end(),
                                      b.source.q.begin(), b.source.q.end());
}

RangePoint make_point(const std::vector<Generator>& gs, DiscretePair pair) {
  RangePoint pt;
  pt.values.reserve(gs.size());
  for (const auto& g : gs)
    pt.values.push_back(
        ExtReal(divergence_unchecked(g, pair.p.data(), pair.q.data(),
                                     pair.size())));
  pt.source = std::move(pair);
  return pt;
}

std::string format_value(ExtReal v) {
  if (v.is_infinite()) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v.finite_value());
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RangeCloud sample_joint_range(const std::vector<Generator>& gs, std::size_t n,
                              std::size_t count, std::uint64_t seed) {
  if (gs.empty()) throw std::invalid_argument("need at least one generator");
  if (n < 2) throw std::invalid_argument("support size must be at least 2");
  if (count < 1) throw std::invalid_argument("sample count must be positive");

  RangeCloud cloud;
  cloud.generators = gs;
  cloud.n_used = n;
  cloud.seed = seed;
  cloud.requested_count = count;
  cloud.points.reserve(count + 2);

  // Fixed-size chunks with per-chunk derived seeds: the sampled set depends
  // only on (seed, count, n), never on how chunks are assigned to workers.
  constexpr std::size_t kChunk = 1024;
  const std::size_t n_chunks = (count + kChunk - 1) / kChunk;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(count, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<double> p = simplex_sample(rng, n);
      std::vector<double> q = simplex_sample(rng, n);
      maybe_zero_coordinate(rng, p);
      maybe_zero_coordinate(rng, q);
      cloud.points.push_back(make_point(gs, DiscretePair(p, q)));
    }
  }

  // Deterministic corner pairs: the all-zero point and, from a mutually
  // singular pair, the componentwise maximum.
  {
    std::vector<double> u(n, 1.0 / static_cast<double>(n));
    cloud.points.push_back(make_point(gs, DiscretePair(u, u)));
    std::vector<double> p(n, 0.0), q(n, 0.0);
    p[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
      q[j] = 1.0 / static_cast<double>(n - 1);
    cloud.points.push_back(make_point(gs, DiscretePair(p, q)));
  }

  std::sort(cloud.points.begin(), cloud.points.end(), point_less);
  return cloud;
}

EnvelopeReport envelope_check(const RangeCloud& cloud,
                              std::size_t objective_index,
                              const SolverOptions& opts) {
  if (cloud.generators.size() != 2)
    throw std::invalid_argument(
        "envelope check is defined for two-generator clouds only");
  if (objective_index > 1)
    throw std::invalid_argument("objective index must be 0 or 1");
  const std::size_t ci = 1 - objective_index;
  const Generator& obj = cloud.generators[objective_index];
  const Generator& con = cloud.generators[ci];

  EnvelopeReport rep;
  rep.tolerance = 10.0 * opts.objective_tol;

  // Abscissa range: from 0 to the largest finite constraint coordinate.
  double hi = 0.0;
  bool any_finite = false;
  for (const auto& pt : cloud.points) {
    if (pt.values[ci].is_finite()) {
      hi = std::max(hi, pt.values[ci].finite_value());
      any_finite = true;
    }
  }
  if (!any_finite || cloud.points.empty()) return rep;
  if (hi <= 0.0) hi = 1.0;

  constexpr int kAbscissae = 20;
  for (int k = 0; k < kAbscissae; ++k) {
    const double t =
        hi * static_cast<double>(k) / static_cast<double>(kAbscissae - 1);
    rep.grid.push_back(t);

    ConstraintSpec up;
    up.generator = con;
    up.bound = ExtReal(t);
    up.at_least = false;
    rep.upper.push_back(solve_A(obj, {up}, opts).value.as_double());

    ConstraintSpec lo;
    lo.generator = con;
    lo.bound = ExtReal(t);
    lo.at_least = true;
    rep.lower.push_back(solve_B(obj, {lo}, opts).value.as_double());
  }

  auto interp = [&](const std::vector<double>& env, double x) {
    const double lox = rep.grid.front(), hix = rep.grid.back();
    x = std::min(hix, std::max(lox, x));
    const double w = (hix - lox) / static_cast<double>(kAbscissae - 1);
    std::size_t k = w > 0.0 ? static_cast<std::size_t>((x - lox) / w)
                            : std::size_t{0};
    if (k + 1 >= static_cast<std::size_t>(kAbscissae)) k = kAbscissae - 2;
    const double x0 = rep.grid[k], x1 = rep.grid[k + 1];
    const double y0 = env[k], y1 = env[k + 1];
    if (std::isinf(y0) || std::isinf(y1)) return kInfD;
    if (x1 == x0) return y0;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  };

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& pt = cloud.points[i];
    if (pt.values[ci].is_infinite()) {
      ++rep.points_skipped;
      continue;
    }
    ++rep.points_checked;
    const double x = pt.values[ci].finite_value();
    const double y = pt.values[objective_index].as_double();
    const double lo = interp(rep.lower, x);
    const double up = interp(rep.upper, x);

    double excess = 0.0;
    if (!std::isinf(lo) && y < lo - rep.tolerance)
      excess = std::max(excess, (lo - rep.tolerance) - y);
    if (!std::isinf(up)) {
      if (std::isinf(y))
        excess = kInfD;
      else if (y > up + rep.tolerance)
        excess = std::max(excess, y - (up + rep.tolerance));
    }
    if (excess > 0.0) {
      EnvelopeViolation v;
      v.point_index = i;
      v.x = x;
      v.y = y;
      v.lower = lo;
      v.upper = up;
      v.excess = excess;
      rep.violations.push_back(v);
    }
  }
  return rep;
}

std::string cloud_to_csv(const RangeCloud& cloud) {
  std::string out;
  const std::size_t m = cloud.generators.size();
  const std::size_t n = cloud.n_used;
  for (std::size_t i = 0; i < m; ++i) {
    out += "d" + std::to_string(i + 1);
    out += ',';
  }
  for (std::size_t j = 0; j < n; ++j) out += "p" + std::to_string(j + 1) + ",";
  for (std::size_t j = 0; j < n; ++j) {
    out += "q" + std::to_string(j + 1);
    out += (j + 1 < n) ? "," : "";
  }
  out += '\n';
  for (const auto& pt : cloud.points) {
    for (std::size_t i = 0; i < m; ++i) {
      out += format_value(pt.values[i]);
      out += ',';
    }
    for (std::size_t j = 0; j < n; ++j) {
      out += format_double(pt.source.p[j]);
      out += ',';
    }
    for (std::size_t j = 0; j < n; ++j) {
      out += format_double(pt.source.q[j]);
      if (j + 1 < n) out += ',';
    }
    out += '\n';
  }
  return out;
}

}  // namespace fdivlib
