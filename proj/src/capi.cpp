#include "fdiv/fdiv.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "closed_forms.hpp"
#include "convex.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "generator.hpp"
#include "joint_range.hpp"
#include "pair.hpp"
#include "psi.hpp"
#include "representation.hpp"
#include "solver.hpp"
#include "verify.hpp"

struct fdiv_generator {
  fdivlib::Generator impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown"; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double* dup_array(const std::vector<double>& v) {
  double* out = static_cast<double*>(std::malloc(v.size() * sizeof(double)));
  if (!out && !v.empty()) throw std::bad_alloc();
  std::memcpy(out, v.data(), v.size() * sizeof(double));
  return out;
}

template <typename F>
fdiv_status wrap(F&& body) noexcept {
  try {
    body();
    return FDIV_OK;
  } catch (const fdivlib::unsupported_generator& e) {
    set_error(e.what());
    return FDIV_ERR_UNSUPPORTED_GENERATOR;
  } catch (const fdivlib::unsupported_case& e) {
    set_error(e.what());
    return FDIV_ERR_UNSUPPORTED_CASE;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return FDIV_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return FDIV_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    set_error(e.what());
    return FDIV_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return FDIV_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return FDIV_ERR_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

fdivlib::SolverOptions to_options(const fdiv_options* o) {
  fdivlib::SolverOptions s;  // defaults
  if (!o) return s;
  if (o->grid_step > 0.0) s.grid_step = o->grid_step;
  if (o->refine_rounds >= 0) s.refine_rounds = o->refine_rounds;
  if (o->objective_tol > 0.0) s.objective_tol = o->objective_tol;
  if (o->feasibility_tol > 0.0) s.feasibility_tol = o->feasibility_tol;
  if (o->threads > 0) s.threads = o->threads;
  s.disable_constraint_dropping = o->disable_constraint_dropping != 0;
  s.debug_drop_half_factor = o->debug_drop_half_factor != 0;
  return s;
}

std::vector<fdivlib::ConstraintSpec> to_constraints(
    const fdiv_constraint* constraints, size_t m) {
  require(m == 0 || constraints != nullptr, "constraint array is null");
  std::vector<fdivlib::ConstraintSpec> out;
  out.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    require(constraints[i].generator != nullptr,
            "constraint generator is null");
    fdivlib::ConstraintSpec c;
    c.generator = constraints[i].generator->impl;
    c.bound = fdivlib::ExtReal(constraints[i].bound);  // rejects NaN / -inf
    c.at_least = constraints[i].at_least != 0;
    out.push_back(std::move(c));
  }
  return out;
}

fdivlib::DiscretePair to_pair(const double* p, const double* q, size_t n) {
  require(p != nullptr && q != nullptr, "probability vector is null");
  require(n >= 1, "support size must be at least 1");
  return fdivlib::DiscretePair(std::vector<double>(p, p + n),
                            std::vector<double>(q, q + n));
}

int to_c_status(fdivlib::SolveStatus s) {
  switch (s) {
    case fdivlib::SolveStatus::optimal_within_tol:
      return FDIV_SOLVE_OPTIMAL;
    case fdivlib::SolveStatus::infeasible:
      return FDIV_SOLVE_INFEASIBLE;
    case fdivlib::SolveStatus::unbounded:
      return FDIV_SOLVE_UNBOUNDED;
  }
  return FDIV_SOLVE_OPTIMAL;
}

void fill_result(const fdivlib::BoundResult& r, fdiv_bound_result* out) {
  out->value = r.value.as_double();
  out->status = to_c_status(r.status);
  out->n_used = r.n_used;
  out->argpair_p = dup_array(r.argpair.p);
  out->argpair_q = dup_array(r.argpair.q);
  out->evaluations = r.diagnostics.evaluations;
  out->refine_rounds_used = r.diagnostics.refine_rounds_used;
  out->polish_sweeps = r.diagnostics.polish_sweeps;
  out->objective_residual = r.diagnostics.objective_residual;
  out->max_constraint_violation = r.diagnostics.max_constraint_violation;
  out->constraints_dropped = r.diagnostics.constraints_dropped;
  out->fast_path = r.diagnostics.fast_path ? 1 : 0;
  out->note = r.diagnostics.note.empty() ? nullptr
                                         : dup_string(r.diagnostics.note);
}

std::string format_check_line(const fdivlib::CheckResult& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s | max residual %.6g | tolerance %.6g",
                c.passed ? "PASS" : "FAIL", c.name.c_str(), c.max_residual,
                c.tolerance);
  std::string line = buf;
  if (!c.detail.empty()) line += " | " + c.detail;
  return line;
}

}  // namespace

extern "C" {

const char* fdiv_last_error(void) { return g_last_error.c_str(); }

const char* fdiv_version(void) { return "1.0.0"; }

void fdiv_string_free(char* s) { std::free(s); }

fdiv_status fdiv_generator_create(const char* key, const double* params,
                                  size_t n_params, fdiv_generator** out) {
  return wrap([&] {
    require(key != nullptr, "registry key is null");
    require(out != nullptr, "output pointer is null");
    require(n_params == 0 || params != nullptr,
            "parameter array is null with nonzero count");
    std::vector<double> ps(params, params + n_params);
    auto* g = new fdiv_generator{fdivlib::make_generator(key, ps)};
    *out = g;
  });
}

fdiv_status fdiv_generator_create_from_json(const char* json_text,
                                            fdiv_generator** out) {
  return wrap([&] {
    require(json_text != nullptr, "JSON text is null");
    require(out != nullptr, "output pointer is null");
    auto* g = new fdiv_generator{fdivlib::make_generator_from_json(json_text)};
    *out = g;
  });
}

void fdiv_generator_destroy(fdiv_generator* g) { delete g; }

fdiv_status fdiv_generator_name(const fdiv_generator* g, char** out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = dup_string(g->impl.name);
  });
}

fdiv_status fdiv_registry_keys(char** out) {
  return wrap([&] {
    require(out != nullptr, "output pointer is null");
    std::string joined;
    for (const auto& k : fdivlib::registry_keys()) {
      if (!joined.empty()) joined += ',';
      joined += k;
    }
    *out = dup_string(joined);
  });
}

fdiv_status fdiv_generator_max_value(const fdiv_generator* g, double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = g->impl.max_divergence_value().as_double();
  });
}

int fdiv_generator_is_symmetric(const fdiv_generator* g) {
  return (g && g->impl.symmetric) ? 1 : 0;
}

int fdiv_generator_is_finite(const fdiv_generator* g) {
  return (g && g->impl.is_finite_divergence()) ? 1 : 0;
}

fdiv_status fdiv_divergence(const fdiv_generator* g, const double* p,
                            const double* q, size_t n, double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = fdivlib::divergence(g->impl, to_pair(p, q, n)).as_double();
  });
}

fdiv_status fdiv_primitive_divergence(const double* p, const double* q,
                                      size_t n, double s, double* out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = fdivlib::primitive_divergence(to_pair(p, q, n), s);
  });
}

fdiv_status fdiv_psi_csv(const double* p, const double* q, size_t n,
                         size_t grid_points, char** out_csv) {
  return wrap([&] {
    require(out_csv != nullptr, "null argument");
    const fdivlib::PsiCurve curve = fdivlib::psi(to_pair(p, q, n));
    *out_csv = dup_string(curve.to_csv(grid_points));
  });
}

fdiv_status fdiv_integral_representation(const fdiv_generator* g,
                                         const double* p, const double* q,
                                         size_t n, double abs_tol,
                                         double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const fdivlib::PsiCurve curve = fdivlib::psi(to_pair(p, q, n));
    const double tol = abs_tol > 0.0 ? abs_tol : 1e-9;
    *out = fdivlib::integral_representation(g->impl, curve, tol).as_double();
  });
}

fdiv_status fdiv_merge_bins(const double* p, const double* q, size_t n,
                            size_t j, double* out_p, double* out_q) {
  return wrap([&] {
    require(out_p != nullptr && out_q != nullptr, "null argument");
    const fdivlib::DiscretePair merged =
        fdivlib::merge_bins(to_pair(p, q, n), j);
    std::memcpy(out_p, merged.p.data(), merged.p.size() * sizeof(double));
    std::memcpy(out_q, merged.q.data(), merged.q.size() * sizeof(double));
  });
}

void fdiv_options_init(fdiv_options* o) {
  if (!o) return;
  fdivlib::SolverOptions d;
  o->grid_step = d.grid_step;
  o->refine_rounds = d.refine_rounds;
  o->objective_tol = d.objective_tol;
  o->feasibility_tol = d.feasibility_tol;
  o->threads = d.threads;
  o->disable_constraint_dropping = 0;
  o->debug_drop_half_factor = 0;
}

void fdiv_bound_result_free(fdiv_bound_result* r) {
  if (!r) return;
  std::free(r->argpair_p);
  std::free(r->argpair_q);
  std::free(r->note);
  r->argpair_p = nullptr;
  r->argpair_q = nullptr;
  r->note = nullptr;
}

fdiv_status fdiv_solve_finite_dim(const fdiv_generator* objective,
                                  const fdiv_constraint* constraints,
                                  size_t m, int minimize, size_t n,
                                  const fdiv_options* opts,
                                  fdiv_bound_result* out) {
  return wrap([&] {
    require(objective != nullptr && out != nullptr, "null argument");
    fill_result(fdivlib::solve_finite_dim(objective->impl,
                                       to_constraints(constraints, m),
                                       minimize != 0, n, to_options(opts)),
                out);
  });
}

fdiv_status fdiv_solve_upper(const fdiv_generator* objective,
                             const fdiv_constraint* constraints, size_t m,
                             const fdiv_options* opts,
                             fdiv_bound_result* out) {
  return wrap([&] {
    require(objective != nullptr && out != nullptr, "null argument");
    fill_result(fdivlib::solve_A(objective->impl, to_constraints(constraints, m),
                              to_options(opts)),
                out);
  });
}

fdiv_status fdiv_solve_lower(const fdiv_generator* objective,
                             const fdiv_constraint* constraints, size_t m,
                             const fdiv_options* opts,
                             fdiv_bound_result* out) {
  return wrap([&] {
    require(objective != nullptr && out != nullptr, "null argument");
    fill_result(fdivlib::solve_B(objective->impl, to_constraints(constraints, m),
                              to_options(opts)),
                out);
  });
}

fdiv_status fdiv_sign_pattern_count(size_t m, size_t* out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = m + 3;
  });
}

fdiv_status fdiv_sign_pattern(size_t m, size_t k, int* sigma_out) {
  return wrap([&] {
    require(sigma_out != nullptr, "null argument");
    require(k < m + 3, "pattern index out of range");
    const auto patterns = fdivlib::sign_patterns(m);
    const auto& sigma = patterns[k].sigma;
    for (size_t j = 0; j < sigma.size(); ++j) sigma_out[j] = sigma[j];
  });
}

fdiv_status fdiv_solve_conopt(const int* sigma, size_t len, double s,
                              const fdiv_constraint* constraints, size_t m,
                              const fdiv_options* opts, double* out) {
  return wrap([&] {
    require(sigma != nullptr && out != nullptr, "null argument");
    fdivlib::SignPattern sp;
    sp.sigma.assign(sigma, sigma + len);
    *out = fdivlib::solve_conopt(sp, s, to_constraints(constraints, m),
                              to_options(opts));
  });
}

fdiv_status fdiv_solve_primitive_convex(double s,
                                        const fdiv_constraint* constraints,
                                        size_t m, const fdiv_options* opts,
                                        fdiv_bound_result* out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    fill_result(fdivlib::solve_A_primitive_convex(
                    s, to_constraints(constraints, m), to_options(opts)),
                out);
  });
}

fdiv_status fdiv_improvement_over_pointwise_min(double H, double K,
                                                const fdiv_options* opts,
                                                double* out5) {
  return wrap([&] {
    require(out5 != nullptr, "null argument");
    const fdivlib::ImprovementResult r =
        fdivlib::improvement_over_pointwise_min(H, K, to_options(opts));
    out5[0] = r.improvement;
    out5[1] = r.raw;
    out5[2] = r.single_h;
    out5[3] = r.single_k;
    out5[4] = r.joint;
  });
}

fdiv_status fdiv_closed_form_b_tv(const fdiv_generator* g, double V,
                                  double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = fdivlib::gilardoni_b_tv(g->impl, V).value.as_double();
  });
}

fdiv_status fdiv_closed_form_b_tv_symmetric(const fdiv_generator* g, double V,
                                            double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = fdivlib::symmetric_b_tv(g->impl, V);
  });
}

fdiv_status fdiv_closed_form_b_kink(const fdiv_generator* g, double s,
                                    double D, double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = fdivlib::primitive_constraint_b(g->impl, s, D).value.as_double();
  });
}

fdiv_status fdiv_closed_form_a_tv(const fdiv_generator* g, double V,
                                  double* out) {
  return wrap([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = fdivlib::tv_constraint_a(g->impl, V).as_double();
  });
}

fdiv_status fdiv_closed_form_a_chi2(const fdiv_generator* f1, double D,
                                    double* out) {
  return wrap([&] {
    require(f1 != nullptr && out != nullptr, "null argument");
    *out = fdivlib::chi2_a(f1->impl, D);
  });
}

fdiv_status fdiv_closed_form_a_power_chi2(double l, double D, double* out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = fdivlib::power_chi2_a(l, D);
  });
}

fdiv_status fdiv_pinsker_reference(double V, double* out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = fdivlib::pinsker_reference(V);
  });
}

fdiv_status fdiv_topsoe_bounds(double delta, double* lower, double* upper) {
  return wrap([&] {
    require(lower != nullptr && upper != nullptr, "null argument");
    const auto [lo, hi] = fdivlib::topsoe_bounds(delta);
    *lower = lo;
    *upper = hi;
  });
}

fdiv_status fdiv_sample_joint_range_csv(const fdiv_generator* const* generators,
                                        size_t m, size_t n, size_t count,
                                        unsigned long long seed,
                                        char** out_csv) {
  return wrap([&] {
    require(generators != nullptr && out_csv != nullptr, "null argument");
    std::vector<fdivlib::Generator> gs;
    gs.reserve(m);
    for (size_t i = 0; i < m; ++i) {
      require(generators[i] != nullptr, "generator handle is null");
      gs.push_back(generators[i]->impl);
    }
    const fdivlib::RangeCloud cloud =
        fdivlib::sample_joint_range(gs, n, count, seed);
    *out_csv = dup_string(fdivlib::cloud_to_csv(cloud));
  });
}

fdiv_status fdiv_envelope_check(const fdiv_generator* const* generators,
                                size_t n, size_t count,
                                unsigned long long seed,
                                size_t objective_index,
                                const fdiv_options* opts,
                                size_t* out_violations, size_t* out_checked,
                                char** out_report) {
  return wrap([&] {
    require(generators != nullptr, "null argument");
    require(generators[0] != nullptr && generators[1] != nullptr,
            "generator handle is null");
    std::vector<fdivlib::Generator> gs = {generators[0]->impl,
                                       generators[1]->impl};
    const fdivlib::RangeCloud cloud =
        fdivlib::sample_joint_range(gs, n, count, seed);
    const fdivlib::EnvelopeReport rep =
        fdivlib::envelope_check(cloud, objective_index, to_options(opts));
    if (out_violations) *out_violations = rep.violations.size();
    if (out_checked) *out_checked = rep.points_checked;
    if (out_report) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "checked %zu points (%zu skipped), %zu violations, "
                    "tolerance %.6g",
                    rep.points_checked, rep.points_skipped,
                    rep.violations.size(), rep.tolerance);
      std::string text = buf;
      const size_t shown =
          rep.violations.size() < 10 ? rep.violations.size() : size_t{10};
      for (size_t i = 0; i < shown; ++i) {
        const auto& v = rep.violations[i];
        std::snprintf(buf, sizeof buf,
                      "\nviolation at point %zu: x=%.9g y=%.9g "
                      "envelope=[%.9g, %.9g] excess=%.3g",
                      v.point_index, v.x, v.y, v.lower, v.upper, v.excess);
        text += buf;
      }
      *out_report = dup_string(text);
    }
  });
}

fdiv_status fdiv_run_verification(const fdiv_options* opts,
                                  int corrupt_half_factor, char** out_report,
                                  int* all_passed) {
  return wrap([&] {
    fdivlib::VerifyOptions vo;
    vo.solver = to_options(opts);
    vo.corrupt_half_factor = corrupt_half_factor != 0;
    const auto checks = fdivlib::run_verification(vo);
    bool ok = true;
    std::string text;
    for (const auto& c : checks) {
      if (!c.passed) ok = false;
      if (!text.empty()) text += '\n';
      text += format_check_line(c);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (out_report) *out_report = dup_string(text);
  });
}

}  // extern "C"
