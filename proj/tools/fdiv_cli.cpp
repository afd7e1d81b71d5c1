// fdiv: command-line surface over the f-divergence bounds library.
//
// Subcommands:
//   bound        one sharp upper/lower bound as a JSON (or CSV) record
//   curve        1-d sweep of a constraint bound -> CSV/JSON rows
//   surface      2-d sweep of two constraint bounds, with the improvement
//                of the joint bound over the pointwise single-constraint
//                minimum -> CSV/JSON rows
//   joint-range  seeded deterministic sample of the joint divergence range
//                -> CSV cloud (optionally checked against the envelopes)
//   verify       oracle-agreement self-check suite
//
// Exit codes: 0 success, 1 parse/usage error, 2 infeasible constraint set,
// 3 unsupported problem class.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdiv/fdiv.h"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

struct CliError {
  int exit_code;
  std::string message;
};

void check_status(fdiv_status st, const std::string& context) {
  if (st == FDIV_OK) return;
  int code = 1;
  if (st == FDIV_ERR_UNSUPPORTED_CASE || st == FDIV_ERR_UNSUPPORTED_GENERATOR)
    code = 3;
  std::string msg = fdiv_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw CliError{code, msg};
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  fdiv_string_free(s);
  return out;
}

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json json_number(double v) {
  if (std::isinf(v) && v > 0) return ordered_json("inf");
  if (std::isnan(v)) return ordered_json("nan");
  return ordered_json(v);
}

/* ------------------------------------------------------------------ */
/* Token parsing                                                       */

struct GenSpec {
  std::string key;
  std::vector<double> params;
  std::string token;  // original text, for error messages
};

struct ConstraintTok {
  GenSpec gen;
  bool at_least = false;
  bool swept = false;   // bound given as "@" (filled in by a sweep axis)
  double bound = 0.0;   // when not swept; +inf allowed via "inf"
};

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

double parse_decimal(const std::string& text, const std::string& token) {
  if (text.empty())
    throw CliError{1, "parse error in '" + token + "': missing number"};
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw CliError{1, "parse error in '" + token + "': bad number '" + text +
                          "'"};
  return v;
}

/// key[(p1,p2,...)] — e.g. "kl", "power(3)", "primitive(0.5)".
GenSpec parse_generator_token(const std::string& raw) {
  const std::string s = strip_spaces(raw);
  GenSpec g;
  g.token = raw;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    g.key = s;
  } else {
    if (s.back() != ')')
      throw CliError{1, "parse error in '" + raw + "': missing ')'"};
    g.key = s.substr(0, open);
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      const auto comma = inner.find(',', pos);
      const std::string item = comma == std::string::npos
                                   ? inner.substr(pos)
                                   : inner.substr(pos, comma - pos);
      g.params.push_back(parse_decimal(item, raw));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (g.key.empty())
    throw CliError{1, "parse error in '" + raw + "': empty generator key"};
  return g;
}

/// key[(params)] ("<="|">=") (decimal|"inf"|"@"), whitespace-insensitive.
ConstraintTok parse_constraint_token(const std::string& raw) {
  const std::string s = strip_spaces(raw);
  ConstraintTok c;
  auto le = s.find("<=");
  auto ge = s.find(">=");
  std::size_t at;
  if (le != std::string::npos && (ge == std::string::npos || le < ge)) {
    c.at_least = false;
    at = le;
  } else if (ge != std::string::npos) {
    c.at_least = true;
    at = ge;
  } else {
    throw CliError{1, "parse error in '" + raw + "': expected '<=' or '>='"};
  }
  c.gen = parse_generator_token(s.substr(0, at));
  c.gen.token = raw;
  const std::string rhs = s.substr(at + 2);
  if (rhs == "@") {
    c.swept = true;
  } else if (rhs == "inf") {
    c.bound = std::numeric_limits<double>::infinity();
  } else {
    c.bound = parse_decimal(rhs, raw);
  }
  return c;
}

struct SweepAxis {
  double start = 0.0, stop = 0.0;
  int steps = 1;
};

SweepAxis parse_sweep(const std::string& raw) {
  const std::string s = strip_spaces(raw);
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos
                                          : s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CliError{1, "parse error in '" + raw + "': expected start:stop:steps"};
  SweepAxis ax;
  ax.start = parse_decimal(s.substr(0, c1), raw);
  ax.stop = parse_decimal(s.substr(c1 + 1, c2 - c1 - 1), raw);
  const double st = parse_decimal(s.substr(c2 + 1), raw);
  ax.steps = static_cast<int>(st);
  if (ax.steps < 1 || ax.steps != st || ax.steps > 1000000)
    throw CliError{1, "parse error in '" + raw + "': steps must be a positive "
                      "integer"};
  return ax;
}

std::vector<double> axis_values(const SweepAxis& ax) {
  std::vector<double> v;
  v.reserve(ax.steps);
  if (ax.steps == 1) {
    v.push_back(ax.start);
    return v;
  }
  for (int k = 0; k < ax.steps; ++k)
    v.push_back(ax.start +
                (ax.stop - ax.start) * static_cast<double>(k) /
                    static_cast<double>(ax.steps - 1));
  return v;
}

/* ------------------------------------------------------------------ */
/* Handles and options                                                 */

struct Gen {
  fdiv_generator* h = nullptr;
  Gen() = default;
  explicit Gen(const GenSpec& s) {
    const fdiv_status st = fdiv_generator_create(
        s.key.c_str(), s.params.empty() ? nullptr : s.params.data(),
        s.params.size(), &h);
    if (st != FDIV_OK)
      throw CliError{1, "parse error in '" + s.token +
                            "': " + fdiv_last_error()};
  }
  Gen(Gen&& o) noexcept : h(o.h) { o.h = nullptr; }
  Gen& operator=(Gen&& o) noexcept {
    if (this != &o) {
      fdiv_generator_destroy(h);
      h = o.h;
      o.h = nullptr;
    }
    return *this;
  }
  Gen(const Gen&) = delete;
  Gen& operator=(const Gen&) = delete;
  ~Gen() { fdiv_generator_destroy(h); }
};

struct CommonOpts {
  double tol = -1.0;
  double grid_step = -1.0;
  int refine_rounds = -1;
  int threads = -1;
  std::size_t support_size = 0;  // 0: automatic (m+2 / reductions)
  std::string out_path;
  std::string format;  // "", "csv", "json"
  bool disable_dropping = false;
  std::vector<std::string> load_files;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_support = true) {
  cmd->add_option("--tol", o.tol, "objective tolerance (default 1e-3)");
  cmd->add_option("--grid-step", o.grid_step,
                  "coarse lattice step (default 0.02)");
  cmd->add_option("--refine-rounds", o.refine_rounds,
                  "box refinement rounds (default 4)");
  cmd->add_option("--threads", o.threads, "solver worker threads (default 1)");
  if (with_support)
    cmd->add_option("--support-size", o.support_size,
                    "override the automatic support size");
  cmd->add_option("--load", o.load_files,
                  "load custom generator definitions from a JSON file "
                  "(repeatable); the file's 'name' becomes a usable key");
  cmd->add_option("--out", o.out_path, "write output to this file");
  cmd->add_option("--format", o.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--disable-constraint-dropping", o.disable_dropping,
                "debug: keep constraints the reductions would drop");
}

/// Owns every generator handle a subcommand creates; resolves custom names
/// loaded from declarative files before falling back to the registry.
struct GenPool {
  std::vector<std::unique_ptr<Gen>> owned;
  std::map<std::string, fdiv_generator*> custom;
  std::map<std::string, std::string> custom_keys;  // name -> source file

  void load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CliError{1, "cannot open generator file '" + path + "'"};
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    fdiv_generator* h = nullptr;
    const fdiv_status st = fdiv_generator_create_from_json(text.c_str(), &h);
    if (st != FDIV_OK)
      throw CliError{1, "parse error in '" + path +
                            "': " + fdiv_last_error()};
    owned.push_back(std::make_unique<Gen>());
    owned.back()->h = h;
    char* name = nullptr;
    check_status(fdiv_generator_name(h, &name), "generator name");
    const std::string key = take_string(name);
    custom[key] = h;
    custom_keys[key] = path;
  }

  void load_all(const CommonOpts& o) {
    for (const auto& p : o.load_files) load(p);
  }

  fdiv_generator* make(const GenSpec& s) {
    const auto it = custom.find(s.key);
    if (it != custom.end()) {
      if (!s.params.empty())
        throw CliError{1, "parse error in '" + s.token +
                              "': custom generator '" + s.key +
                              "' takes no parameters"};
      return it->second;
    }
    owned.push_back(std::make_unique<Gen>(s));
    return owned.back()->h;
  }
};

fdiv_options to_options(const CommonOpts& o) {
  fdiv_options fo;
  fdiv_options_init(&fo);
  if (o.tol > 0) fo.objective_tol = o.tol;
  if (o.grid_step > 0) fo.grid_step = o.grid_step;
  if (o.refine_rounds >= 0) fo.refine_rounds = o.refine_rounds;
  if (o.threads > 0) fo.threads = o.threads;
  fo.disable_constraint_dropping = o.disable_dropping ? 1 : 0;
  return fo;
}

void write_output(const CommonOpts& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw CliError{1, "cannot open output file '" + o.out_path + "'"};
  f << text;
}

/* ------------------------------------------------------------------ */
/* Result plumbing                                                     */

struct Result {
  fdiv_bound_result r{};
  ~Result() { fdiv_bound_result_free(&r); }
};

const char* status_name(int s) {
  switch (s) {
    case FDIV_SOLVE_OPTIMAL:
      return "optimal-within-tol";
    case FDIV_SOLVE_INFEASIBLE:
      return "infeasible";
    case FDIV_SOLVE_UNBOUNDED:
      return "unbounded";
  }
  return "unknown";
}

ordered_json result_to_json(const fdiv_bound_result& r) {
  ordered_json j;
  j["value"] = json_number(r.value);
  j["status"] = status_name(r.status);
  j["n_used"] = r.n_used;
  ordered_json p = ordered_json::array(), q = ordered_json::array();
  for (std::size_t i = 0; i < r.n_used; ++i) {
    p.push_back(r.argpair_p[i]);
    q.push_back(r.argpair_q[i]);
  }
  j["argpair"] = ordered_json{{"p", p}, {"q", q}};
  j["diagnostics"] = ordered_json{
      {"evaluations", r.evaluations},
      {"refine_rounds_used", r.refine_rounds_used},
      {"polish_sweeps", r.polish_sweeps},
      {"objective_residual", json_number(r.objective_residual)},
      {"max_constraint_violation", json_number(r.max_constraint_violation)},
      {"constraints_dropped", r.constraints_dropped},
      {"fast_path", r.fast_path != 0},
      {"note", r.note ? r.note : ""}};
  return j;
}

/// Solve with automatic support size (the sharp reductions) or an explicit
/// override.
void solve_auto(const fdiv_generator* obj,
                const std::vector<fdiv_constraint>& cons, bool minimize,
                std::size_t support_size, const fdiv_options& fo,
                fdiv_bound_result* out) {
  fdiv_status st;
  if (support_size > 0) {
    st = fdiv_solve_finite_dim(obj, cons.data(), cons.size(),
                               minimize ? 1 : 0, support_size, &fo, out);
  } else if (minimize) {
    st = fdiv_solve_lower(obj, cons.data(), cons.size(), &fo, out);
  } else {
    st = fdiv_solve_upper(obj, cons.data(), cons.size(), &fo, out);
  }
  check_status(st, "solve failed");
}

/* ------------------------------------------------------------------ */
/* Overlays (closed-form reference columns for `curve`)                */

/// Resolves the generic overlay name "closed_form" to the concrete
/// closed-form family that matches the job, so curve invocations can ask
/// for "the known formula" without naming it.
std::string resolve_overlay(const std::string& name, bool minimize,
                            const std::string& objective_key,
                            const std::string& constraint_key) {
  if (name != "closed_form") return name;
  if (!minimize && objective_key == "tv" && constraint_key == "hellinger")
    return "tv-under-hellinger";
  if (!minimize && objective_key == "capacitory" &&
      constraint_key == "triangular")
    return "topsoe-upper";
  if (minimize && objective_key == "capacitory" &&
      constraint_key == "triangular")
    return "topsoe-lower";
  if (!minimize && constraint_key == "tv") return "a-tv";
  if (minimize && constraint_key == "tv") return "b-tv";
  if (!minimize && objective_key == "chi2") return "a-chi2";
  throw CliError{1, "no closed_form overlay is known for objective '" +
                        objective_key + "' under constraint '" +
                        constraint_key +
                        "'; name one explicitly (see --help)"};
}

struct OverlayFn {
  std::string name;
  // Evaluates the overlay at sweep value x; may return +inf.
  double operator()(double x) const {
    double v = 0.0, lo = 0.0, hi = 0.0;
    fdiv_status st = FDIV_OK;
    if (name == "a-tv")
      st = fdiv_closed_form_a_tv(objective, x, &v);
    else if (name == "b-tv")
      st = fdiv_closed_form_b_tv(objective, x, &v);
    else if (name == "b-tv-symmetric")
      st = fdiv_closed_form_b_tv_symmetric(objective, x, &v);
    else if (name == "a-chi2")
      st = fdiv_closed_form_a_chi2(constraint_gen, x, &v);
    else if (name == "pinsker")
      st = fdiv_pinsker_reference(x, &v);
    else if (name == "topsoe-upper") {
      st = fdiv_topsoe_bounds(x, &lo, &hi);
      v = hi;
    } else if (name == "topsoe-lower") {
      st = fdiv_topsoe_bounds(x, &lo, &hi);
      v = lo;
    } else if (name == "tv-under-hellinger") {
      v = std::sqrt(2.0 * x) * std::sqrt(1.0 - x / 2.0);
    } else {
      throw CliError{1, "unknown overlay '" + name + "'"};
    }
    check_status(st, "overlay '" + name + "'");
    return v;
  }
  const fdiv_generator* objective = nullptr;
  const fdiv_generator* constraint_gen = nullptr;
};

/* ------------------------------------------------------------------ */
/* Subcommand bodies                                                   */

int run_bound(const std::string& objective_tok,
              const std::vector<std::string>& constraint_toks, bool minimize,
              const CommonOpts& common) {
  GenPool pool;
  pool.load_all(common);
  const fdiv_generator* obj = pool.make(parse_generator_token(objective_tok));
  std::vector<fdiv_constraint> cons;
  for (const auto& tok : constraint_toks) {
    ConstraintTok c = parse_constraint_token(tok);
    if (c.swept)
      throw CliError{1, "parse error in '" + tok +
                            "': '@' sweeps are for curve/surface"};
    cons.push_back(
        fdiv_constraint{pool.make(c.gen), c.bound, c.at_least ? 1 : 0});
  }
  const fdiv_options fo = to_options(common);
  Result res;
  solve_auto(obj, cons, minimize, common.support_size, fo, &res.r);

  if (common.format == "csv") {
    std::string text = "value,status,n_used\n";
    text += fmt17(res.r.value);
    text += ',';
    text += status_name(res.r.status);
    text += ',' + std::to_string(res.r.n_used) + '\n';
    write_output(common, text);
  } else {
    write_output(common, result_to_json(res.r).dump(2) + "\n");
  }
  return res.r.status == FDIV_SOLVE_INFEASIBLE ? 2 : 0;
}

int run_curve(const std::string& objective_tok,
              const std::vector<std::string>& constraint_toks, bool minimize,
              const std::string& sweep_tok, const std::string& overlay_name,
              const CommonOpts& common) {
  GenPool pool;
  pool.load_all(common);
  const GenSpec obj_spec = parse_generator_token(objective_tok);
  const fdiv_generator* obj = pool.make(obj_spec);
  std::vector<fdiv_constraint> cons;
  int swept_index = -1;
  std::string swept_key;
  for (const auto& tok : constraint_toks) {
    ConstraintTok c = parse_constraint_token(tok);
    if (c.swept) {
      if (swept_index >= 0)
        throw CliError{1, "curve takes exactly one '@' constraint"};
      swept_index = static_cast<int>(cons.size());
      swept_key = c.gen.key;
    }
    cons.push_back(
        fdiv_constraint{pool.make(c.gen), c.bound, c.at_least ? 1 : 0});
  }
  if (swept_index < 0)
    throw CliError{1, "curve needs one constraint with bound '@'"};

  const std::vector<double> xs = axis_values(parse_sweep(sweep_tok));
  const fdiv_options fo = to_options(common);

  std::optional<OverlayFn> overlay;
  if (!overlay_name.empty())
    overlay = OverlayFn{
        resolve_overlay(overlay_name, minimize, obj_spec.key, swept_key), obj,
        cons[static_cast<std::size_t>(swept_index)].generator};

  ordered_json rows = ordered_json::array();
  std::string csv = overlay ? "x,value,overlay\n" : "x,value\n";
  int exit_code = 0;
  for (double x : xs) {
    cons[static_cast<std::size_t>(swept_index)].bound = x;
    Result res;
    solve_auto(obj, cons, minimize, common.support_size, fo, &res.r);
    double value = res.r.value;
    if (res.r.status == FDIV_SOLVE_INFEASIBLE) {
      value = std::numeric_limits<double>::quiet_NaN();
      exit_code = 2;
    }
    double ov = 0.0;
    if (overlay) ov = (*overlay)(x);
    csv += fmt17(x) + "," + fmt17(value);
    if (overlay) csv += "," + fmt17(ov);
    csv += '\n';
    ordered_json row{{"x", x}, {"value", json_number(value)}};
    row["status"] = status_name(res.r.status);
    if (overlay) row["overlay"] = json_number(ov);
    rows.push_back(row);
  }
  write_output(common,
               common.format == "json" ? rows.dump(2) + "\n" : csv);
  return exit_code;
}

int run_surface(const std::string& objective_tok,
                const std::vector<std::string>& constraint_toks,
                const std::vector<std::string>& sweep_toks,
                const CommonOpts& common) {
  GenPool pool;
  pool.load_all(common);
  GenSpec obj_spec = parse_generator_token(objective_tok);
  const fdiv_generator* obj = pool.make(obj_spec);
  if (constraint_toks.size() != 2 || sweep_toks.size() != 2)
    throw CliError{1, "surface needs exactly two '@' constraints and two "
                      "--sweep axes"};
  std::vector<fdiv_constraint> cons;
  for (const auto& tok : constraint_toks) {
    ConstraintTok c = parse_constraint_token(tok);
    if (!c.swept || c.at_least)
      throw CliError{1, "parse error in '" + tok +
                            "': surface constraints must be 'key<=@'"};
    cons.push_back(fdiv_constraint{pool.make(c.gen), 0.0, 0});
  }
  const std::vector<double> xs = axis_values(parse_sweep(sweep_toks[0]));
  const std::vector<double> ys = axis_values(parse_sweep(sweep_toks[1]));
  const fdiv_options fo = to_options(common);

  // The piecewise-linear objectives route through the exact convex
  // decomposition (fast and sharp); everything else uses the grid engine.
  const bool convex_path =
      common.support_size == 0 &&
      (obj_spec.key == "tv" || obj_spec.key == "primitive");
  const double s_threshold =
      obj_spec.key == "primitive" ? obj_spec.params.at(0) : 1.0;

  auto solve_cells = [&](std::vector<fdiv_constraint>& cs,
                         fdiv_bound_result* out) {
    if (convex_path) {
      check_status(fdiv_solve_primitive_convex(s_threshold, cs.data(),
                                               cs.size(), &fo, out),
                   "solve failed");
    } else {
      solve_auto(obj, cs, /*minimize=*/false, common.support_size, fo, out);
    }
  };

  // Single-constraint bounds, cached per axis value.
  std::map<double, double> single_x, single_y;
  auto single = [&](std::size_t which, double bound) -> double {
    auto& cache = which == 0 ? single_x : single_y;
    const auto it = cache.find(bound);
    if (it != cache.end()) return it->second;
    std::vector<fdiv_constraint> one = {cons[which]};
    one[0].bound = bound;
    Result r;
    solve_cells(one, &r.r);
    cache.emplace(bound, r.r.value);
    return r.r.value;
  };

  std::string csv = "x,y,value,improvement\n";
  ordered_json rows = ordered_json::array();
  for (double x : xs) {
    for (double y : ys) {
      cons[0].bound = x;
      cons[1].bound = y;
      std::vector<fdiv_constraint> both = cons;
      Result res;
      solve_cells(both, &res.r);
      const double joint = res.r.value;
      const double pointwise = std::min(single(0, x), single(1, y));
      const double improvement =
          (std::isinf(pointwise) && std::isinf(joint)) ? 0.0
                                                       : pointwise - joint;
      csv += fmt17(x) + "," + fmt17(y) + "," + fmt17(joint) + "," +
             fmt17(improvement) + '\n';
      rows.push_back(ordered_json{{"x", x},
                                  {"y", y},
                                  {"value", json_number(joint)},
                                  {"improvement", json_number(improvement)}});
    }
  }
  write_output(common, common.format == "json" ? rows.dump(2) + "\n" : csv);
  return 0;
}

int run_joint_range(const std::vector<std::string>& generator_toks,
                    std::size_t count, unsigned long long seed, bool do_check,
                    std::size_t objective_index, const CommonOpts& common) {
  if (generator_toks.empty())
    throw CliError{1, "joint-range needs at least one --generator"};
  GenPool pool;
  pool.load_all(common);
  std::vector<const fdiv_generator*> gs;
  for (const auto& tok : generator_toks)
    gs.push_back(pool.make(parse_generator_token(tok)));
  const std::size_t n =
      common.support_size > 0 ? common.support_size : gs.size() + 2;

  char* csv = nullptr;
  check_status(fdiv_sample_joint_range_csv(gs.data(), gs.size(), n, count,
                                           seed, &csv),
               "sampling failed");
  write_output(common, take_string(csv));

  if (do_check) {
    if (gs.size() != 2)
      throw CliError{1, "--check needs exactly two generators"};
    const fdiv_options fo = to_options(common);
    std::size_t violations = 0, checked = 0;
    char* report = nullptr;
    check_status(fdiv_envelope_check(gs.data(), n, count, seed,
                                     objective_index, &fo, &violations,
                                     &checked, &report),
                 "envelope check failed");
    std::cerr << take_string(report) << "\n";
  }
  return 0;
}

int run_verify(bool corrupt, const CommonOpts& common) {
  const fdiv_options fo = to_options(common);
  char* report = nullptr;
  int all_passed = 0;
  check_status(
      fdiv_run_verification(&fo, corrupt ? 1 : 0, &report, &all_passed),
      "verification failed to run");
  const std::string text = take_string(report);
  if (common.format == "json") {
    ordered_json j{{"report", text}, {"all_passed", all_passed != 0}};
    write_output(common, j.dump(2) + "\n");
  } else {
    write_output(common, text + "\n");
  }
  return all_passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sharp bounds between f-divergences: single bounds, trade-off curves "
      "and surfaces, joint-range samples, and self-verification"};
  app.require_subcommand(1);

  // bound
  auto* bound = app.add_subcommand("bound", "solve one sharp bound");
  std::string b_objective;
  std::vector<std::string> b_constraints;
  bool b_max = false, b_min = false;
  CommonOpts b_common;
  bound->add_option("--objective", b_objective, "objective generator key")
      ->required();
  bound->add_option("--constraint", b_constraints,
                    "constraint 'key[(params)]<=v' or '...>=v'");
  bound->add_flag("--max", b_max, "maximize (at-most constraints)");
  bound->add_flag("--min", b_min, "minimize (at-least constraints)");
  add_common(bound, b_common);

  // curve
  auto* curve = app.add_subcommand("curve", "sweep one constraint bound");
  std::string c_objective, c_sweep, c_overlay;
  std::vector<std::string> c_constraints;
  bool c_max = false, c_min = false;
  CommonOpts c_common;
  curve->add_option("--objective", c_objective, "objective generator key")
      ->required();
  curve->add_option("--constraint", c_constraints,
                    "constraints; exactly one with bound '@' is swept");
  curve->add_option("--sweep", c_sweep, "start:stop:steps for the '@' bound")
      ->required();
  curve->add_option("--overlay", c_overlay,
                    "closed-form overlay column: a-tv, b-tv, b-tv-symmetric, "
                    "a-chi2, pinsker, topsoe-upper, topsoe-lower, "
                    "tv-under-hellinger");
  curve->add_flag("--max", c_max, "maximize (at-most constraints)");
  curve->add_flag("--min", c_min, "minimize (at-least constraints)");
  add_common(curve, c_common);

  // surface
  auto* surface =
      app.add_subcommand("surface", "sweep two constraint bounds");
  std::string s_objective;
  std::vector<std::string> s_constraints, s_sweeps;
  CommonOpts s_common;
  surface->add_option("--objective", s_objective, "objective generator key")
      ->required();
  surface->add_option("--constraint", s_constraints,
                      "two at-most constraints with bound '@'");
  surface->add_option("--sweep", s_sweeps,
                      "two axes start:stop:steps, in constraint order");
  add_common(surface, s_common);

  // joint-range
  auto* jr = app.add_subcommand("joint-range",
                                "sample the joint divergence range");
  std::vector<std::string> j_generators;
  std::size_t j_count = 1000;
  unsigned long long j_seed = 1;
  bool j_check = false;
  std::size_t j_obj_index = 1;
  CommonOpts j_common;
  jr->add_option("--generator", j_generators, "generator key (repeatable)")
      ->required();
  jr->add_option("--count", j_count, "number of sampled pairs (default 1000)");
  jr->add_option("--seed", j_seed, "sampler seed (default 1)");
  jr->add_flag("--check", j_check,
               "check the cloud against the sharp envelopes (two generators)");
  jr->add_option("--objective-index", j_obj_index,
                 "cloud coordinate treated as the objective by --check");
  add_common(jr, j_common);

  // verify
  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  bool v_corrupt = false;
  CommonOpts v_common;
  verify->add_flag("--corrupt-half-factor", v_corrupt,
                   "negative control: corrupt the convex recombination so "
                   "the agreement check must fail");
  add_common(verify, v_common, /*with_support=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bound->parsed()) {
      if (b_max == b_min)
        throw CliError{1, "bound needs exactly one of --max / --min"};
      return run_bound(b_objective, b_constraints, b_min, b_common);
    }
    if (curve->parsed()) {
      if (c_max == c_min)
        throw CliError{1, "curve needs exactly one of --max / --min"};
      return run_curve(c_objective, c_constraints, c_min, c_sweep, c_overlay,
                       c_common);
    }
    if (surface->parsed())
      return run_surface(s_objective, s_constraints, s_sweeps, s_common);
    if (jr->parsed())
      return run_joint_range(j_generators, j_count, j_seed, j_check,
                             j_obj_index, j_common);
    if (verify->parsed()) return run_verify(v_corrupt, v_common);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
