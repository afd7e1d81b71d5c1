#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fdivlib {

/// A pair of probability vectors (p, q) on the finite set {1, ..., n}.
/// Entries are nonnegative and each vector sums to 1 within 1e-12.
struct DiscretePair {
  std::vector<double> p;
  std::vector<double> q;

  DiscretePair() = default;
  DiscretePair(std::vector<double> p_, std::vector<double> q_);

  std::size_t size() const { return p.size(); }

  /// Throws std::domain_error when an entry is negative/NaN or a vector
  /// does not sum to 1 within 1e-12; std::invalid_argument on structural
  /// problems (length mismatch, empty vectors).
  void validate() const;
};

/// Merge adjacent coordinates j and j+1 (0-based, j in [0, n-2]) in both
/// vectors, returning the (n-1)-point pair.  Merging never increases any
/// f-divergence, with equality when p_j/q_j = p_{j+1}/q_{j+1}.
DiscretePair merge_bins(const DiscretePair& pair, std::size_t j);

/// JSON serialization as an array of two arrays: [[p...],[q...]].
std::string pair_to_json(const DiscretePair& pair);
DiscretePair pair_from_json(const std::string& text);

}  // namespace fdivlib
