#include "pair.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace fdivlib {

namespace {
constexpr double kSumTolerance = 1e-12;

void check_vector(const std::vector<double>& v, const char* label) {
  double sum = 0.0;
  for (double x : v) {
    if (std::isnan(x) || x < 0.0)
      throw std::domain_error(std::string(label) +
                              " has a negative or NaN entry");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance)
    throw std::domain_error(std::string(label) +
                            " does not sum to 1 within 1e-12 (sum = " +
                            std::to_string(sum) + ")");
}
}  // namespace

DiscretePair::DiscretePair(std::vector<double> p_, std::vector<double> q_)
    : p(std::move(p_)), q(std::move(q_)) {}

void DiscretePair::validate() const {
  if (p.size() != q.size())
    throw std::invalid_argument("pair vectors differ in length");
  if (p.empty()) throw std::invalid_argument("pair must have n >= 1");
  check_vector(p, "p");
  check_vector(q, "q");
}

DiscretePair merge_bins(const DiscretePair& pair, std::size_t j) {
  const std::size_t n = pair.size();
  if (n < 2 || j + 1 >= n)
    throw std::invalid_argument("merge_bins: index out of range");
  DiscretePair out;
  out.p.reserve(n - 1);
  out.q.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) {
      out.p.push_back(pair.p[j] + pair.p[j + 1]);
      out.q.push_back(pair.q[j] + pair.q[j + 1]);
      ++i;  // skip j+1
    } else {
      out.p.push_back(pair.p[i]);
      out.q.push_back(pair.q[i]);
    }
  }
  return out;
}

std::string pair_to_json(const DiscretePair& pair) {
  nlohmann::json j = nlohmann::json::array({pair.p, pair.q});
  return j.dump();
}

DiscretePair pair_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array())
    throw std::invalid_argument(
        "pair JSON must be an array of two arrays [[p...],[q...]]");
  DiscretePair pair;
  pair.p = j[0].get<std::vector<double>>();
  pair.q = j[1].get<std::vector<double>>();
  pair.validate();
  return pair;
}

}  // namespace fdivlib
