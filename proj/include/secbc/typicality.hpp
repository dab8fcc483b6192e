#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "secbc/pmf.hpp"
#include "secbc/sequence.hpp"

namespace secbc {

/// Symbol-frequency table of one or more aligned sequences.
struct EmpiricalType {
  std::vector<Alphabet> axes;
  std::vector<std::uint32_t> counts;  // dense, same layout as a JointPmf
  std::size_t n = 0;

  JointPmf normalized() const;
};

EmpiricalType empirical_type(const std::vector<const Sequence*>& sequences,
                             const std::vector<Alphabet>& axes);

struct TypicalityParams {
  double epsilon;
  JointPmf reference;

  TypicalityParams(double eps, JointPmf ref);
};

/// Robust letter typicality: every cell count obeys |c/n - P| <= eps * P,
/// which forces c = 0 wherever P = 0.
bool is_eps_typical(const std::vector<const Sequence*>& sequences,
                    const TypicalityParams& params);

/// Precomputed per-cell count bounds for the hot typicality checks.
class TypicalWindow {
 public:
  TypicalWindow() = default;
  TypicalWindow(const JointPmf& reference, std::size_t n, double epsilon);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t cell_count() const { return lo_.size(); }

  bool contains(std::span<const std::uint32_t> counts) const {
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      const double c = static_cast<double>(counts[i]);
      if (c < lo_[i] || c > hi_[i]) return false;
    }
    return true;
  }

  /// Count window of one cell as an integer range (empty if none).
  std::pair<std::uint32_t, std::uint32_t> cell_range(std::size_t flat) const;
  bool cell_allows(std::size_t flat, std::uint32_t c) const {
    const double v = static_cast<double>(c);
    return v >= lo_[flat] && v <= hi_[flat];
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> lo_, hi_;
};

/// Pairwise joint-typicality test used by covering and decoding loops.
bool pair_typical(const Sequence& a, const Sequence& b, const TypicalWindow& window,
                  std::size_t qb);

/// Result of exhaustively checking the product-law lower bound
///   Q^n(y2 | v2) >= 2^{-n (H(Y2|V2) + I(V1;V2) + delta)}
/// over every eps-typical (v2, y2) pair, against the reference joint over
/// (V1, V2, Y2). Also cross-checks the empirical-type product identity for
/// Q^n on every enumerated pair.
struct QnBoundReport {
  std::uint64_t pairs_enumerated = 0;
  std::uint64_t typical_pairs = 0;
  std::uint64_t violations = 0;
  double min_margin_log2 = 0.0;  // min over typical pairs; 0 if none
  double used_delta = 0.0;
  double bound_exponent = 0.0;  // H(Y2|V2) + I(V1;V2) + delta
  std::uint64_t infinite_divergences = 0;
  double max_type_identity_rel_err = 0.0;
  double max_entropy_gap = 0.0;  // worst |H(Pe_V2Y2) - H(Pe_V2) - H(Y2|V2)|
  std::optional<std::uint64_t> first_violation_rank;
};

/// Default slack for the bound check:
///   eps * (H(Y2|V2) + I(V1;V2)) + 2 eps * log2(|Y2| |V1| |V2|).
/// The check accepts any user override.
double default_delta(const JointPmf& joint_v1v2y2, double epsilon);

/// Exhaustive check at blocklength n. `joint` must carry axes (V1, V2, Y2).
/// Throws CapExceeded if |V2|^n * |Y2|^n exceeds `pair_cap`.
QnBoundReport qn_lower_bound_check(const JointPmf& joint_v1v2y2, std::size_t n,
                                   double epsilon,
                                   std::optional<double> delta_override = {},
                                   std::uint64_t pair_cap = 10'000'000);

/// Single-threaded reference implementation (kept for testing the kernel).
QnBoundReport qn_lower_bound_check_serial(const JointPmf& joint_v1v2y2,
                                          std::size_t n, double epsilon,
                                          std::optional<double> delta_override = {},
                                          std::uint64_t pair_cap = 10'000'000);

}  // namespace secbc
