#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "secbc/channel.hpp"
#include "secbc/rate_region.hpp"
#include "secbc/rng.hpp"
#include "secbc/sequence.hpp"
#include "secbc/typicality.hpp"

namespace secbc {

/// ceil(2^{n r}) with a guard against float excess on exact powers.
std::uint64_t count_from_rate(std::size_t n, double rate);

/// Blocklength, rates, typicality chain and seed of one code construction.
/// Index counts follow ceil(2^{n R}), so every positive rate yields at least
/// one message.
struct CodeParams {
  std::size_t n = 1;
  RatePoint rates;
  double eps = 0.1;    // covering typicality
  double eps1 = 0.2;   // input-selection typicality
  double eps2 = 0.3;   // decoding typicality
  std::uint64_t seed = 1;

  std::uint64_t m1 = 1, m2 = 1;  // message counts
  std::uint64_t j1 = 1, j2 = 1;  // randomization counts
  std::uint64_t k = 1;           // covering candidates per (m, s)

  static CodeParams from_rates(std::size_t n, const RatePoint& rates, double eps,
                               double eps1, double eps2, std::uint64_t seed);
  static CodeParams from_counts(std::size_t n, std::uint64_t m1, std::uint64_t j1,
                                std::uint64_t m2, std::uint64_t j2, std::uint64_t k,
                                double eps, double eps1, double eps2,
                                std::uint64_t seed);

  void validate() const;
};

inline constexpr std::uint64_t kDefaultCodebookLetterCap = 1ull << 26;

/// Materialized codeword banks v_t(m, s, k), each letter drawn i.i.d. from
/// the scheme's per-letter marginal. Reproducible from the seed.
class Codebook {
 public:
  Codebook() = default;

  const CodeParams& params() const { return params_; }

  std::span<const std::uint8_t> v1(std::uint64_t m, std::uint64_t s,
                                   std::uint64_t k) const {
    return word(side1_, m, s, k, params_.j1);
  }
  std::span<const std::uint8_t> v2(std::uint64_t m, std::uint64_t s,
                                   std::uint64_t k) const {
    return word(side2_, m, s, k, params_.j2);
  }

  Sequence v1_copy(std::uint64_t m, std::uint64_t s, std::uint64_t k) const {
    const auto w = v1(m, s, k);
    return Sequence(w.begin(), w.end());
  }
  Sequence v2_copy(std::uint64_t m, std::uint64_t s, std::uint64_t k) const {
    const auto w = v2(m, s, k);
    return Sequence(w.begin(), w.end());
  }

  const std::vector<std::uint8_t>& raw1() const { return side1_; }
  const std::vector<std::uint8_t>& raw2() const { return side2_; }

  friend Codebook generate_codebook(const AuxScheme&, const CodeParams&,
                                    std::uint64_t);

 private:
  std::span<const std::uint8_t> word(const std::vector<std::uint8_t>& bank,
                                     std::uint64_t m, std::uint64_t s,
                                     std::uint64_t k, std::uint64_t j) const {
    const std::uint64_t idx = ((m * j + s) * params_.k + k) * params_.n;
    return {bank.data() + idx, params_.n};
  }

  CodeParams params_;
  std::vector<std::uint8_t> side1_, side2_;
};

/// Draws the full banks; throws CapExceeded when (m j k n) letters on either
/// side exceed the cap.
Codebook generate_codebook(const AuxScheme& scheme, const CodeParams& params,
                           std::uint64_t letter_cap = kDefaultCodebookLetterCap);

struct CoveringChoice {
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  bool fallback = false;  // true only when no jointly typical pair exists
};

/// Deterministic covering selection: the lexicographically smallest (k1, k2)
/// whose codeword pair is jointly typical for the scheme's (V1, V2) law;
/// (first, first) with the fallback flag set when none qualifies.
CoveringChoice select_covering_pair(const Codebook& cb, const AuxScheme& scheme,
                                    std::uint64_t m1, std::uint64_t s1,
                                    std::uint64_t m2, std::uint64_t s2,
                                    double epsilon);

struct TransmitRecord {
  std::uint64_t m1 = 0, m2 = 0;
  std::uint64_t s1 = 0, s2 = 0;
  CoveringChoice covering;
  Sequence x;
  bool x_fallback = false;  // typicality retries exhausted, unrestricted draw
};

inline constexpr int kInputSelectRetries = 64;

/// Per-letter input draw from P(x | v1, v2), retried up to
/// kInputSelectRetries times until (v1, v2, x) is jointly eps1-typical;
/// after that an unrestricted draw is taken and flagged.
Sequence draw_input_word(const AuxScheme& scheme, const Sequence& v1,
                         const Sequence& v2, double eps1, RngStream& rng,
                         bool& fallback);

/// Randomized encoding of (m1, m2): uniform (s1, s2), covering selection,
/// then a per-letter input draw retried against the (V1, V2, X) typical set.
TransmitRecord encode(const Codebook& cb, const AuxScheme& scheme,
                      std::uint64_t m1, std::uint64_t m2, RngStream& rng);

enum class DecodeStatus { kDecoded, kNoCandidate, kAmbiguous };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kNoCandidate;
  std::uint64_t m = 0;
  std::uint64_t s = 0;
};

/// Typicality window for receiver t's decoder, built from the induced
/// single-letter joint P(V_t, Y_t).
TypicalWindow decoder_window(const BroadcastChannel& ch, const AuxScheme& scheme,
                             int receiver, std::size_t n, double eps2);

/// Exhaustive typicality decoding: the unique (m, s) such that some k makes
/// (v_t(m,s,k), y) jointly typical; zero and multiple candidates are distinct
/// failures.
DecodeResult decode(const Codebook& cb, int receiver, const Sequence& y,
                    const TypicalWindow& window);

// ---------------------------------------------------------------------------
// Covering-failure estimation.

enum class CoveringMode { kAuto, kExplicit, kAnalytic };

struct CoveringEstimate {
  double fallback_fraction = 0.0;
  double ci_halfwidth = 0.0;          // 95% binomial
  std::uint64_t encodings = 0;
  std::uint64_t k = 0;                // bank size per side
  double pair_typical_prob = 0.0;     // one independent pair
  double expected_typical_pairs = 0.0;  // k^2 * pair_typical_prob
  CoveringMode mode_used = CoveringMode::kExplicit;
};

/// Exact probability that an independently drawn (v1, v2) pair of length n is
/// jointly eps-typical for `pair_law`, by enumerating joint count tables.
double pair_typical_prob_exact(const JointPmf& pair_law, std::size_t n,
                               double epsilon);

/// Fraction of encodings whose covering search finds no jointly typical pair.
/// Each encoding uses a fresh (m, s) index pair, i.e. fresh banks. Banks small
/// enough to scan are simulated outright; above the cap the count of typical
/// pairs among the k^2 candidates is treated as Poisson with its exact mean
/// (the per-encoding failure probability becomes exp(-mean); the no-cover
/// direction additionally satisfies the exact bound P >= 1 - mean).
CoveringEstimate estimate_covering_fallback(const AuxScheme& scheme, std::size_t n,
                                            double rco, double epsilon,
                                            std::uint64_t encodings,
                                            std::uint64_t seed,
                                            CoveringMode mode = CoveringMode::kAuto,
                                            std::uint64_t scan_cap = 1ull << 24);

/// Single-threaded reference implementation (kept for testing).
CoveringEstimate estimate_covering_fallback_serial(
    const AuxScheme& scheme, std::size_t n, double rco, double epsilon,
    std::uint64_t encodings, std::uint64_t seed,
    CoveringMode mode = CoveringMode::kAuto, std::uint64_t scan_cap = 1ull << 24);

}  // namespace secbc
