#include "solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>

#include "errors.hpp"

namespace fdivlib {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal_within_tol:
      return "optimal-within-tol";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxEvaluators = 8;  // objective + up to 7 constraints

/// Feasibility window per constraint: sum must land in [lo, hi].
struct Window {
  double lo = -kInf;
  double hi = kInf;
};

std::vector<Window> feasibility_windows(
    const std::vector<ConstraintSpec>& constraints, double tol) {
  std::vector<Window> w(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const double b = constraints[i].bound.as_double();
    if (constraints[i].at_least)
      w[i].lo = b - tol;
    else
      w[i].hi = b + tol;
  }
  return w;
}

double linear_value(const LinearObjective& lin, const double* p,
                    const double* q, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    acc += lin.sigma[j] * (p[j] - lin.s * q[j]);
  return acc;
}

double objective_value(const LatticeObjective& obj, const double* p,
                       const double* q, std::size_t n) {
  if (obj.gen) return divergence_unchecked(*obj.gen, p, q, n);
  return linear_value(*obj.lin, p, q, n);
}

/// (value, p, q) ordering with deterministic lexicographic tie-break.
bool beats(bool minimize, double v1, const std::vector<double>& p1,
           const std::vector<double>& q1, double v2,
           const std::vector<double>& p2, const std::vector<double>& q2) {
  if (v1 != v2) return minimize ? (v1 < v2) : (v1 > v2);
  if (p1 != p2)
    return std::lexicographical_compare(p1.begin(), p1.end(), p2.begin(),
                                        p2.end());
  return std::lexicographical_compare(q1.begin(), q1.end(), q2.begin(),
                                      q2.end());
}

/// Enumerate nonnegative integer n-vectors summing to N, nonincreasing
/// within each index segment, appending each to `out`.
void enumerate_compositions(std::size_t n, int N, const SortedSegments& segs,
                            std::vector<std::uint16_t>& out) {
  std::vector<int> seg_prev(n, -1);  // index whose value caps this position
  for (const auto& [b, e] : segs)
    for (std::size_t j = b + 1; j < e && j < n; ++j)
      seg_prev[j] = static_cast<int>(j - 1);

  std::vector<int> a(n, 0);
  auto rec = [&](auto&& self, std::size_t j, int rem) -> void {
    int cap = (seg_prev[j] >= 0) ? a[seg_prev[j]] : N;
    if (j + 1 == n) {
      if (rem <= cap) {
        a[j] = rem;
        for (std::size_t t = 0; t < n; ++t)
          out.push_back(static_cast<std::uint16_t>(a[t]));
      }
      return;
    }
    int v_hi = std::min(cap, rem);
    for (int v = 0; v <= v_hi; ++v) {
      a[j] = v;
      self(self, j + 1, rem - v);
    }
  };
  rec(rec, 0, N);
}

struct CoarseTables {
  int N = 0;
  std::vector<double> values;                // values[a] = a / N
  std::vector<std::vector<double>> tables;   // per generator evaluator
  std::vector<const Generator*> table_gens;  // aligned with `tables`
};

/// Basin fingerprint of a lattice point: 4 bits per coordinate encoding
/// whether p_j and q_j are zero and the sign of p_j - q_j.  Points with
/// different fingerprints usually sit in different local basins of the
/// constrained problem (different boundary faces / crossing structure).
std::uint64_t support_signature(const std::uint16_t* pv, const std::uint16_t* qv,
                                std::size_t n) {
  std::uint64_t sig = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t c = 0;
    if (pv[j] > 0) c |= 1u;
    if (qv[j] > 0) c |= 2u;
    if (pv[j] > qv[j])
      c |= 4u;
    else if (pv[j] < qv[j])
      c |= 8u;
    sig |= c << (4 * j);
  }
  return sig;
}

/// Small fixed-capacity set of incumbents, at most one per signature,
/// keeping the best-by-`beats` representative of each and evicting the
/// worst signature when full.  The retained set after a scan equals the
/// top-`cap` distinct signatures by their best value: once `cap` entries
/// are at least as good as a candidate, that candidate's signature can
/// never re-enter with a worse point, so greedy eviction loses nothing.
struct BasinSet {
  std::size_t cap = 1;
  std::vector<std::uint64_t> sigs;
  std::vector<Incumbent> incs;

  bool full() const { return sigs.size() >= cap; }

  std::size_t worst_index(bool minimize) const {
    std::size_t w = 0;
    for (std::size_t i = 1; i < incs.size(); ++i)
      if (beats(minimize, incs[w].value, incs[w].p, incs[w].q, incs[i].value,
                incs[i].p, incs[i].q))
        w = i;
    return w;
  }

  void offer(bool minimize, std::uint64_t sig, double v, std::vector<double> p,
             std::vector<double> q) {
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      if (sigs[i] == sig) {
        if (beats(minimize, v, p, q, incs[i].value, incs[i].p, incs[i].q)) {
          incs[i].value = v;
          incs[i].p = std::move(p);
          incs[i].q = std::move(q);
        }
        return;
      }
    }
    Incumbent inc;
    inc.found = true;
    inc.value = v;
    inc.p = std::move(p);
    inc.q = std::move(q);
    if (!full()) {
      sigs.push_back(sig);
      incs.push_back(std::move(inc));
      return;
    }
    const std::size_t w = worst_index(minimize);
    if (beats(minimize, inc.value, inc.p, inc.q, incs[w].value, incs[w].p,
              incs[w].q)) {
      sigs[w] = sig;
      incs[w] = std::move(inc);
    }
  }
};

CoarseTables build_tables(const LatticeObjective& obj,
                          const std::vector<ConstraintSpec>& constraints,
                          int N) {
  CoarseTables T;
  T.N = N;
  T.values.resize(N + 1);
  for (int a = 0; a <= N; ++a)
    T.values[a] = static_cast<double>(a) / static_cast<double>(N);

  auto add = [&](const Generator* g) {
    std::vector<double> t(static_cast<std::size_t>(N + 1) * (N + 1));
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b)
        t[static_cast<std::size_t>(a) * (N + 1) + b] =
            divergence_term(*g, T.values[a], T.values[b]);
    T.tables.push_back(std::move(t));
    T.table_gens.push_back(g);
  };

  if (obj.gen) add(obj.gen);
  for (const auto& c : constraints) add(&c.generator);
  return T;
}

}  // namespace

std::vector<Incumbent> coarse_scan(const LatticeObjective& obj,
                                   const std::vector<ConstraintSpec>& constraints,
                                   bool minimize, std::size_t n, int N,
                                   const SortedSegments& segments,
                                   std::size_t keep, const SolverOptions& opts,
                                   Diagnostics& diag) {
  const std::size_t m = constraints.size();
  const bool gen_obj = (obj.gen != nullptr);
  if (keep == 0) keep = 1;

  CoarseTables T = build_tables(obj, constraints, N);
  const std::size_t stride = static_cast<std::size_t>(N) + 1;

  std::vector<std::uint16_t> p_list, q_list;
  enumerate_compositions(n, N, segments, p_list);
  enumerate_compositions(n, N, {}, q_list);
  const std::size_t np = p_list.size() / n;
  const std::size_t nq = q_list.size() / n;

  const std::vector<Window> win =
      feasibility_windows(constraints, opts.feasibility_tol);

  // Fixed-size chunking over p indices keeps results independent of the
  // worker count: chunk results merge in index order.
  const std::size_t chunk_size = 64;
  const std::size_t n_chunks = (np + chunk_size - 1) / chunk_size;
  std::vector<BasinSet> chunk_sets(n_chunks);
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<std::uint64_t> eval_count{0};

  auto worker = [&]() {
    std::vector<double> pd(n), qd(n);
    std::uint64_t local_evals = 0;
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) break;
      BasinSet basins;
      basins.cap = keep;
      // Value of the worst retained entry; meaningful once the set is full.
      double worst_v = minimize ? kInf : -kInf;
      const std::size_t p_begin = c * chunk_size;
      const std::size_t p_end = std::min(np, p_begin + chunk_size);
      for (std::size_t ip = p_begin; ip < p_end; ++ip) {
        const std::uint16_t* pv = &p_list[ip * n];
        // Row bases for this p, one per tabulated evaluator and coordinate.
        std::array<const double*, kMaxEvaluators> rows[8];
        const std::size_t n_tab = T.tables.size();
        for (std::size_t e = 0; e < n_tab; ++e)
          for (std::size_t j = 0; j < n; ++j)
            rows[j][e] = T.tables[e].data() + static_cast<std::size_t>(pv[j]) * stride;

        for (std::size_t iq = 0; iq < nq; ++iq) {
          const std::uint16_t* qv = &q_list[iq * n];
          ++local_evals;

          // Constraints first (short-circuit on violation).
          bool ok = true;
          const std::size_t c0 = gen_obj ? 1 : 0;
          for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += rows[j][c0 + i][qv[j]];
            if (!(s >= win[i].lo) || !(s <= win[i].hi)) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;

          double v;
          if (gen_obj) {
            v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v += rows[j][0][qv[j]];
          } else {
            v = 0.0;
            for (std::size_t j = 0; j < n; ++j)
              v += obj.lin->sigma[j] *
                   (T.values[pv[j]] - obj.lin->s * T.values[qv[j]]);
          }

          // Cheap pre-filter: once the set is full, a value strictly worse
          // than the worst retained one can affect nothing (its signature's
          // retained best, if any, is at least as good as that worst entry).
          if (basins.full() && (minimize ? (v > worst_v) : (v < worst_v)))
            continue;

          for (std::size_t j = 0; j < n; ++j) {
            pd[j] = T.values[pv[j]];
            qd[j] = T.values[qv[j]];
          }
          basins.offer(minimize, support_signature(pv, qv, n), v, pd, qd);
          if (basins.full())
            worst_v = basins.incs[basins.worst_index(minimize)].value;
        }
      }
      chunk_sets[c] = std::move(basins);
    }
    eval_count.fetch_add(local_evals);
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Merge in chunk index order (deterministic regardless of worker count).
  BasinSet merged;
  merged.cap = keep;
  for (BasinSet& cs : chunk_sets)
    for (std::size_t i = 0; i < cs.sigs.size(); ++i)
      merged.offer(minimize, cs.sigs[i], cs.incs[i].value,
                   std::move(cs.incs[i].p), std::move(cs.incs[i].q));

  std::sort(merged.incs.begin(), merged.incs.end(),
            [minimize](const Incumbent& a, const Incumbent& b) {
              return beats(minimize, a.value, a.p, a.q, b.value, b.p, b.q);
            });
  diag.evaluations += eval_count.load();
  return std::move(merged.incs);
}

namespace {

/// Candidate coordinate values: 11 points spanning [c-w, c+w] clipped to
/// [0, 1] (exact 0/1 appear via clipping), deduplicated.
std::vector<double> candidates_around(double c, double w) {
  std::vector<double> v;
  v.reserve(11);
  for (int k = 0; k <= 10; ++k) {
    double x = c - w + static_cast<double>(k) * (w / 5.0);
    x = std::min(1.0, std::max(0.0, x));
    if (v.empty() || x > v.back()) v.push_back(x);
  }
  return v;
}

struct RefineContext {
  const LatticeObjective* obj;
  const std::vector<ConstraintSpec>* constraints;
  std::vector<Window> win;
  bool minimize;
  std::size_t n, m;
  bool gen_obj;

  std::vector<std::vector<double>> cp, cq;  // candidates per free coordinate
  // term_cache[e][j][ia * cq[j].size() + ib] for tabulated evaluators
  std::vector<std::vector<std::vector<double>>> cache;

  std::vector<double> cur_p, cur_q;  // scratch holding the path
  Incumbent best;
  std::uint64_t evals = 0;

  const Generator* evaluator_gen(std::size_t e) const {
    // e = 0 is the objective when generator-backed; constraints follow.
    if (gen_obj) return e == 0 ? obj->gen : &(*constraints)[e - 1].generator;
    return &(*constraints)[e].generator;
  }
  std::size_t n_eval() const { return (gen_obj ? 1 : 0) + m; }

  void dfs(std::size_t j, double sum_p, double sum_q,
           std::array<double, kMaxEvaluators> partial) {
    if (j + 1 == n) {
      double rem_p = 1.0 - sum_p;
      double rem_q = 1.0 - sum_q;
      if (rem_p < -1e-13 || rem_q < -1e-13) return;
      rem_p = std::max(0.0, rem_p);
      rem_q = std::max(0.0, rem_q);
      cur_p[j] = rem_p;
      cur_q[j] = rem_q;
      ++evals;

      const std::size_t ne = n_eval();
      for (std::size_t e = 0; e < ne; ++e)
        partial[e] += divergence_term(*evaluator_gen(e), rem_p, rem_q);

      const std::size_t c0 = gen_obj ? 1 : 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double s = partial[c0 + i];
        if (!(s >= win[i].lo) || !(s <= win[i].hi)) return;
      }

      double v;
      if (gen_obj) {
        v = partial[0];
      } else {
        v = linear_value(*obj->lin, cur_p.data(), cur_q.data(), n);
      }
      if (!best.found ||
          beats(minimize, v, cur_p, cur_q, best.value, best.p, best.q)) {
        best.found = true;
        best.value = v;
        best.p = cur_p;
        best.q = cur_q;
      }
      return;
    }

    const auto& cpj = cp[j];
    const auto& cqj = cq[j];
    for (std::size_t ia = 0; ia < cpj.size(); ++ia) {
      if (sum_p + cpj[ia] > 1.0 + 1e-12) break;  // candidates ascend
      for (std::size_t ib = 0; ib < cqj.size(); ++ib) {
        if (sum_q + cqj[ib] > 1.0 + 1e-12) break;
        auto next = partial;
        const std::size_t ne = n_eval();
        for (std::size_t e = 0; e < ne; ++e)
          next[e] += cache[e][j][ia * cqj.size() + ib];
        cur_p[j] = cpj[ia];
        cur_q[j] = cqj[ib];
        dfs(j + 1, sum_p + cpj[ia], sum_q + cqj[ib], next);
      }
    }
  }
};

void refine_round(const LatticeObjective& obj,
                  const std::vector<ConstraintSpec>& constraints,
                  bool minimize, Incumbent& inc, double w,
                  const SolverOptions& opts, Diagnostics& diag) {
  const std::size_t n = inc.p.size();
  RefineContext ctx;
  ctx.obj = &obj;
  ctx.constraints = &constraints;
  ctx.win = feasibility_windows(constraints, opts.feasibility_tol);
  ctx.minimize = minimize;
  ctx.n = n;
  ctx.m = constraints.size();
  ctx.gen_obj = (obj.gen != nullptr);
  ctx.cur_p.resize(n);
  ctx.cur_q.resize(n);

  for (std::size_t j = 0; j + 1 < n; ++j) {
    ctx.cp.push_back(candidates_around(inc.p[j], w));
    ctx.cq.push_back(candidates_around(inc.q[j], w));
  }

  const std::size_t ne = ctx.n_eval();
  ctx.cache.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    ctx.cache[e].resize(n - 1);
    const Generator* g = ctx.evaluator_gen(e);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      auto& cell = ctx.cache[e][j];
      const auto& cpj = ctx.cp[j];
      const auto& cqj = ctx.cq[j];
      cell.resize(cpj.size() * cqj.size());
      for (std::size_t ia = 0; ia < cpj.size(); ++ia)
        for (std::size_t ib = 0; ib < cqj.size(); ++ib)
          cell[ia * cqj.size() + ib] = divergence_term(*g, cpj[ia], cqj[ib]);
    }
  }

  // Seed with the incumbent so a round can never regress.
  ctx.best = inc;
  ctx.best.found = true;

  std::array<double, kMaxEvaluators> zero{};
  ctx.dfs(0, 0.0, 0.0, zero);

  diag.evaluations += ctx.evals;
  inc = ctx.best;
}

void polish(const LatticeObjective& obj,
            const std::vector<ConstraintSpec>& constraints, bool minimize,
            Incumbent& inc, double initial_step, const SolverOptions& opts,
            Diagnostics& diag) {
  const std::size_t n = inc.p.size();
  const std::size_t m = constraints.size();
  const std::vector<Window> win =
      feasibility_windows(constraints, opts.feasibility_tol);

  auto evaluate = [&](const std::vector<double>& p,
                      const std::vector<double>& q, double& out) -> bool {
    for (std::size_t i = 0; i < m; ++i) {
      double s = divergence_unchecked(constraints[i].generator, p.data(),
                                      q.data(), n);
      if (!(s >= win[i].lo) || !(s <= win[i].hi)) return false;
    }
    out = objective_value(obj, p.data(), q.data(), n);
    return true;
  };

  double step = initial_step;
  int sweeps = 0;
  std::vector<double> tp(n), tq(n);
  while (step > 1e-10 && sweeps < 300) {
    ++sweeps;
    bool improved = false;
    // Moves are mass transfers between two coordinates of one vector, so
    // every candidate stays on the simplex.  Transfers between arbitrary
    // pairs (not just into a designated slack coordinate) let the descent
    // adjust ratio structure without leaving the feasible set.
    for (int which = 0; which < 2; ++which) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (k == j) continue;
          const std::vector<double>& src = which == 0 ? inc.p : inc.q;
          if (src[k] <= 0.0) continue;
          // Take `step` from coordinate k, or everything it has when less
          // remains (landing exactly on the boundary face).
          const double amount = std::min(step, src[k]);
          if (src[j] + amount > 1.0) continue;
          tp = inc.p;
          tq = inc.q;
          auto& x = which == 0 ? tp : tq;
          x[j] += amount;
          x[k] -= amount;
          if (x[k] < step) {  // snap a sub-step residue onto the boundary
            x[j] += x[k];
            x[k] = 0.0;
          }
          double v;
          ++diag.evaluations;
          if (!evaluate(tp, tq, v)) continue;
          const bool strictly_better =
              minimize ? (v < inc.value) : (v > inc.value);
          if (strictly_better) {
            inc.p = tp;
            inc.q = tq;
            inc.value = v;
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  diag.polish_sweeps += sweeps;
}

/// Repeat box rounds at a fixed width until the value stalls.  One round
/// moves each free coordinate by at most w, so when the optimum lies along
/// an active-constraint ridge several box lengths away, a single round per
/// width strands the incumbent; repeating at the same width walks the full
/// distance before the width shrinks.
constexpr int kMaxRepeatsPerWidth = 25;

void refine_width_adaptive(const LatticeObjective& obj,
                           const std::vector<ConstraintSpec>& constraints,
                           bool minimize, Incumbent& inc, double w,
                           const SolverOptions& opts, Diagnostics& diag) {
  for (int rep = 0; rep < kMaxRepeatsPerWidth; ++rep) {
    const double before = inc.value;
    refine_round(obj, constraints, minimize, inc, w, opts, diag);
    ++diag.refine_rounds_used;
    const double gain = minimize ? before - inc.value : inc.value - before;
    if (!(gain > 1e-12 * std::max(1.0, std::fabs(inc.value)))) break;
  }
}

/// Width levels start_round .. refine_rounds-1 (factor 0.1 apart), each run
/// adaptively, followed by the coordinate-transfer polish.
void run_schedule(const LatticeObjective& obj,
                  const std::vector<ConstraintSpec>& constraints, bool minimize,
                  Incumbent& inc, int start_round, const SolverOptions& opts,
                  Diagnostics& diag) {
  double w = opts.grid_step;
  for (int r = 0; r < start_round && r < opts.refine_rounds; ++r) w *= 0.1;
  for (int r = start_round; r < opts.refine_rounds; ++r) {
    refine_width_adaptive(obj, constraints, minimize, inc, w, opts, diag);
    w *= 0.1;
  }
  polish(obj, constraints, minimize, inc, (w / 0.1) / 5.0, opts, diag);
}

}  // namespace

void refine_and_polish(const LatticeObjective& obj,
                       const std::vector<ConstraintSpec>& constraints,
                       bool minimize, Incumbent& inc,
                       const SolverOptions& opts, Diagnostics& diag) {
  run_schedule(obj, constraints, minimize, inc, 0, opts, diag);
}

BoundResult lattice_optimize(const LatticeObjective& obj,
                             const std::vector<ConstraintSpec>& constraints,
                             bool minimize, std::size_t n,
                             const SortedSegments& segments,
                             const SolverOptions& opts) {
  if (n < 2)
    throw std::invalid_argument("support size must be at least 2");
  if (n > 6)
    throw std::invalid_argument(
        "support size beyond 6 is outside the engine's documented range "
        "(lattice cost grows exponentially)");
  if (!(opts.grid_step > 0.0 && opts.grid_step <= 0.5))
    throw std::invalid_argument("grid_step must lie in (0, 0.5]");

  BoundResult res;
  res.n_used = n;

  for (const auto& c : constraints) {
    if (c.bound.is_finite() && c.bound.finite_value() < 0.0)
      throw std::invalid_argument("constraint bounds must be nonnegative");
    if (c.at_least &&
        c.bound > c.generator.max_divergence_value() + ExtReal(opts.feasibility_tol)) {
      res.status = SolveStatus::infeasible;
      res.diagnostics.note =
          "at-least bound exceeds the largest attainable value of '" +
          c.generator.name + "'";
      res.argpair = DiscretePair(std::vector<double>(n, 1.0 / n),
                                 std::vector<double>(n, 1.0 / n));
      return res;
    }
  }

  int N = static_cast<int>(std::lround(1.0 / opts.grid_step));
  if (N < 2) N = 2;
  if (n == 5) N = std::min(N, 20);
  if (n == 6) N = std::min(N, 12);
  if (n >= 5)
    res.diagnostics.note = "coarse lattice reduced to step 1/" +
                           std::to_string(N) + " for support size " +
                           std::to_string(n) + "; ";

  // How many structurally distinct coarse candidates to refine, and how
  // many survive past the first width level.  Larger supports pay more per
  // refinement round, so the breadth narrows with n.
  const std::size_t keep = n <= 4 ? 8 : (n == 5 ? 4 : 3);
  const std::size_t survivors = n <= 4 ? 3 : 2;

  std::vector<Incumbent> incs = coarse_scan(obj, constraints, minimize, n, N,
                                            segments, keep, opts,
                                            res.diagnostics);
  if (incs.empty()) {
    res.status = SolveStatus::infeasible;
    res.diagnostics.note += "no feasible lattice point";
    res.argpair = DiscretePair(std::vector<double>(n, 1.0 / n),
                               std::vector<double>(n, 1.0 / n));
    return res;
  }

  if (!minimize && std::isinf(incs.front().value)) {
    // A feasible pair drives the objective to +inf; refinement is moot.
    res.status = SolveStatus::unbounded;
    res.value = ExtReal::infinity();
    res.argpair = DiscretePair(incs.front().p, incs.front().q);
    return res;
  }

  const auto better = [minimize](const Incumbent& a, const Incumbent& b) {
    return beats(minimize, a.value, a.p, a.q, b.value, b.p, b.q);
  };

  if (opts.refine_rounds > 0) {
    // First width level for every retained basin, then the full remaining
    // schedule for the best few: refining each basin independently is what
    // rescues the search when the single best coarse point sits in a basin
    // whose true optimum is inferior.
    for (Incumbent& inc : incs)
      refine_width_adaptive(obj, constraints, minimize, inc, opts.grid_step,
                            opts, res.diagnostics);
    std::sort(incs.begin(), incs.end(), better);
    if (incs.size() > survivors) incs.resize(survivors);
    for (Incumbent& inc : incs)
      run_schedule(obj, constraints, minimize, inc, 1, opts, res.diagnostics);
  } else {
    for (Incumbent& inc : incs)
      run_schedule(obj, constraints, minimize, inc, 0, opts, res.diagnostics);
  }
  std::sort(incs.begin(), incs.end(), better);
  Incumbent inc = incs.front();

  if (!minimize && std::isinf(inc.value)) {
    // Refinement uncovered a feasible pair with infinite objective.
    res.status = SolveStatus::unbounded;
    res.value = ExtReal::infinity();
    res.argpair = DiscretePair(inc.p, inc.q);
    return res;
  }

  res.value = std::isinf(inc.value) ? ExtReal::infinity() : ExtReal(inc.value);
  res.argpair = DiscretePair(inc.p, inc.q);
  res.status = SolveStatus::optimal_within_tol;

  // Independent residual re-evaluation for the diagnostics block.
  if (res.value.is_finite()) {
    const double direct =
        objective_value(obj, res.argpair.p.data(), res.argpair.q.data(), n);
    res.diagnostics.objective_residual = std::fabs(direct - inc.value);
  }
  for (const auto& c : constraints) {
    const double d = divergence_unchecked(c.generator, res.argpair.p.data(),
                                          res.argpair.q.data(), n);
    double viol = 0.0;
    if (c.bound.is_finite()) {
      viol = c.at_least ? std::max(0.0, c.bound.finite_value() - d)
                        : std::max(0.0, d - c.bound.finite_value());
      if (std::isinf(d) && c.at_least) viol = 0.0;
    } else if (c.at_least) {
      viol = std::isinf(d) ? 0.0 : kInf;
    }
    res.diagnostics.max_constraint_violation =
        std::max(res.diagnostics.max_constraint_violation, viol);
  }
  return res;
}

}  // namespace detail

BoundResult solve_finite_dim(const Generator& objective,
                             const std::vector<ConstraintSpec>& constraints,
                             bool minimize, std::size_t n,
                             const SolverOptions& opts) {
  for (const auto& c : constraints) {
    if (c.at_least != minimize)
      throw std::invalid_argument(
          "constraint directions must match the problem sense (at-most for "
          "max, at-least for min); mixed sets are not supported");
  }
  detail::LatticeObjective obj;
  obj.gen = &objective;
  // Divergences are invariant under simultaneous coordinate permutations,
  // so p may be assumed nonincreasing across the whole index range.
  detail::SortedSegments segs = {{0, n}};
  return detail::lattice_optimize(obj, constraints, minimize, n, segs, opts);
}

BoundResult solve_A(const Generator& objective,
                    const std::vector<ConstraintSpec>& constraints,
                    const SolverOptions& opts) {
  std::vector<ConstraintSpec> kept;
  std::size_t dropped = 0;
  for (const auto& c : constraints) {
    if (c.at_least)
      throw std::invalid_argument(
          "upper-bound problems take at-most constraints only");
    if (c.bound.is_infinite()) {
      ++dropped;  // inactive constraint
      continue;
    }
    kept.push_back(c);
  }
  const std::size_t n = kept.size() + 2;
  BoundResult res = solve_finite_dim(objective, kept, false, n, opts);
  res.n_used = n;
  res.diagnostics.constraints_dropped += dropped;
  if (dropped > 0)
    res.diagnostics.note += "dropped " + std::to_string(dropped) +
                            " unbounded-limit constraint(s); ";
  return res;
}

BoundResult solve_B(const Generator& objective,
                    const std::vector<ConstraintSpec>& constraints,
                    const SolverOptions& opts) {
  for (const auto& c : constraints) {
    if (!c.at_least)
      throw std::invalid_argument(
          "lower-bound problems take at-least constraints only");
  }

  std::vector<ConstraintSpec> kept;
  std::size_t dropped = 0;
  const bool finite_obj = objective.is_finite_divergence();
  if (finite_obj && !opts.disable_constraint_dropping) {
    for (const auto& c : constraints) {
      if (c.generator.is_finite_divergence())
        kept.push_back(c);
      else
        ++dropped;
    }
  } else {
    kept = constraints;
  }

  if (kept.empty()) {
    // Every constraint is satisfiable at negligible objective cost (or none
    // were given): the infimum is exactly 0, attained in the limit p = q.
    BoundResult res;
    res.value = 0.0;
    res.argpair = DiscretePair({0.5, 0.5}, {0.5, 0.5});
    res.n_used = 2;
    res.status = SolveStatus::optimal_within_tol;
    res.diagnostics.fast_path = true;
    res.diagnostics.constraints_dropped = dropped;
    res.diagnostics.note =
        dropped > 0
            ? "all constraints have unbounded generators and the objective "
              "is bounded; infimum is 0 at p = q"
            : "no constraints; infimum is 0 at p = q";
    return res;
  }

  if (!finite_obj) {
    for (const auto& c : kept) {
      if (!c.generator.is_finite_divergence())
        throw unsupported_case(
            "minimizing an unbounded divergence subject to an unbounded "
            "constraint divergence has no finite-support reduction; "
            "refusing to guess");
    }
  }

  bool all_primitive = true;
  for (const auto& c : kept)
    if (!c.generator.is_primitive_shaped()) all_primitive = false;

  const std::size_t n = kept.size() + (all_primitive ? 1 : 2);
  BoundResult res = solve_finite_dim(objective, kept, true,
                                     std::max<std::size_t>(n, 2), opts);
  res.n_used = std::max<std::size_t>(n, 2);
  res.diagnostics.constraints_dropped += dropped;
  if (dropped > 0)
    res.diagnostics.note +=
        "dropped " + std::to_string(dropped) +
        " constraint(s) with unbounded generators (bounded objective); ";
  if (all_primitive)
    res.diagnostics.note +=
        "piecewise-linear constraints: support size m+1 suffices; ";
  return res;
}

}  // namespace fdivlib
