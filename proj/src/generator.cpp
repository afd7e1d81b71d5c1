#include "generator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace fdivlib {

namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

const double kLog2 = std::log(2.0);

}  // namespace

double Generator::eval(double x) const {
  if (!(x > 0.0))
    throw std::domain_error("generator eval: argument must be positive");
  return eval_fn(x);
}

const std::vector<std::string>& registry_keys() {
  static const std::vector<std::string> keys = {
      "kl",    "tv",         "hellinger",  "chi2",
      "power", "triangular", "capacitory", "primitive"};
  return keys;
}

Generator make_generator(const std::string& key,
                         const std::vector<double>& params) {
  auto require_params = [&](size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("generator '" + key + "' expects " +
                                  std::to_string(n) + " parameter(s), got " +
                                  std::to_string(params.size()));
  };

  Generator g;
  g.key = key;
  g.params = params;
  g.name = key;

  if (key == "kl") {
    require_params(0);
    g.eval_fn = [](double x) { return x * std::log(x); };
    g.f_at_zero = 0.0;
    g.f_prime_at_infinity = ExtReal::infinity();
    g.second_derivative = [](double x) { return 1.0 / x; };
    g.symmetric = false;
  } else if (key == "tv") {
    require_params(0);
    g.eval_fn = [](double x) { return 0.5 * std::fabs(x - 1.0); };
    g.f_at_zero = 0.5;
    g.f_prime_at_infinity = 0.5;
    g.second_derivative = nullptr;
    g.atoms = {{1.0, 1.0}};
    g.symmetric = true;
  } else if (key == "hellinger") {
    require_params(0);
    g.eval_fn = [](double x) {
      double d = std::sqrt(x) - 1.0;
      return 0.5 * d * d;
    };
    g.f_at_zero = 0.5;
    g.f_prime_at_infinity = 0.5;
    g.second_derivative = [](double x) { return 0.25 * std::pow(x, -1.5); };
    g.symmetric = true;
  } else if (key == "chi2") {
    require_params(0);
    g.eval_fn = [](double x) { return x * x - 1.0; };
    g.f_at_zero = -1.0;
    g.f_prime_at_infinity = ExtReal::infinity();
    g.second_derivative = [](double) { return 2.0; };
    g.symmetric = false;
  } else if (key == "triangular") {
    require_params(0);
    g.eval_fn = [](double x) {
      double d = x - 1.0;
      return d * d / (x + 1.0);
    };
    g.f_at_zero = 1.0;
    g.f_prime_at_infinity = 1.0;
    g.second_derivative = [](double x) {
      double s = x + 1.0;
      return 8.0 / (s * s * s);
    };
    g.symmetric = true;
  } else if (key == "power") {
    require_params(1);
    double l = params[0];
    if (!(l > 1.0) || !std::isfinite(l))
      throw std::invalid_argument("power generator requires exponent > 1");
    g.name = "power(" + format_param(l) + ")";
    g.eval_fn = [l](double x) { return std::pow(x, l) - 1.0; };
    g.f_at_zero = -1.0;
    g.f_prime_at_infinity = ExtReal::infinity();
    g.second_derivative = [l](double x) {
      return l * (l - 1.0) * std::pow(x, l - 2.0);
    };
    g.symmetric = false;
  } else if (key == "capacitory") {
    require_params(0);
    // Symmetric representative: x log x - (x+1) log(x+1) + (x+1) log 2.
    // It differs from x log x - (x+1) log((x+1)/2) only in writing the
    // logarithm out; the grouping below keeps cancellation mild for large x.
    g.eval_fn = [](double x) {
      return x * std::log(x) - (x + 1.0) * std::log(x + 1.0) +
             (x + 1.0) * kLog2;
    };
    g.f_at_zero = kLog2;
    g.f_prime_at_infinity = kLog2;
    g.second_derivative = [](double x) { return 1.0 / (x * (x + 1.0)); };
    g.symmetric = true;
  } else if (key == "primitive") {
    require_params(1);
    double s = params[0];
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("primitive generator requires s > 0");
    g.name = "primitive(" + format_param(s) + ")";
    g.eval_fn = [s](double x) { return std::min(1.0, s) - std::min(x, s); };
    g.f_at_zero = std::min(1.0, s);
    g.f_prime_at_infinity = 0.0;
    g.second_derivative = nullptr;
    g.atoms = {{s, 1.0}};
    g.symmetric = false;
  } else {
    std::string known;
    for (const auto& k : registry_keys()) {
      if (!known.empty()) known += ", ";
      known += k;
    }
    throw std::invalid_argument("unknown generator '" + key +
                                "' (known: " + known + ")");
  }
  return g;
}

Generator make_generator_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("custom generator: bad JSON: ") +
                                e.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("custom generator: expected a JSON object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw std::invalid_argument(
        "custom generator: required string field 'name' missing");
  if (!doc.contains("base") || !doc["base"].is_string())
    throw std::invalid_argument(
        "custom generator: required string field 'base' missing "
        "(tabulated values are not accepted; closed-form limits come from a "
        "registry base family)");
  std::vector<double> params;
  if (doc.contains("params")) {
    if (!doc["params"].is_array())
      throw std::invalid_argument(
          "custom generator: 'params' must be an array of numbers");
    for (const auto& v : doc["params"]) {
      if (!v.is_number())
        throw std::invalid_argument(
            "custom generator: 'params' must be an array of numbers");
      params.push_back(v.get<double>());
    }
  }
  for (const auto& item : doc.items()) {
    const std::string& k = item.key();
    if (k != "name" && k != "base" && k != "params" && k != "symmetric" &&
        k != "description")
      throw std::invalid_argument("custom generator: unknown field '" + k +
                                  "'");
  }

  Generator g = make_generator(doc["base"].get<std::string>(), params);
  g.name = doc["name"].get<std::string>();
  if (g.name.empty())
    throw std::invalid_argument("custom generator: 'name' must be non-empty");

  // Symmetry is an opt-in declaration, verified by sampling; undeclared
  // custom generators are treated as non-symmetric.
  bool declared_symmetric = false;
  if (doc.contains("symmetric")) {
    if (!doc["symmetric"].is_boolean())
      throw std::invalid_argument(
          "custom generator: 'symmetric' must be a boolean");
    declared_symmetric = doc["symmetric"].get<bool>();
  }
  if (declared_symmetric) {
    for (double x : {0.11, 0.37, 0.5, 0.9, 1.3, 2.0, 3.7, 9.0, 40.0}) {
      const double fx = g.eval(x);
      const double mirror = x * g.eval(1.0 / x);
      if (std::fabs(fx - mirror) > 1e-10 * (1.0 + std::fabs(fx)))
        throw std::invalid_argument(
            "custom generator '" + g.name +
            "': declared symmetric but f(x) != x f(1/x) at x = " +
            format_param(x));
    }
  }
  g.symmetric = declared_symmetric;
  return g;
}

}  // namespace fdivlib
