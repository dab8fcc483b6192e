#pragma once

#include <cstdint>
#include <vector>

#include "secbc/codec.hpp"

namespace secbc {

enum class SecrecyMode { kExact, kMonteCarlo };

/// Conditional secrecy accounting against a fixed side-2 codeword v2bar:
///   effective = D( P_{W1, Y2 | v2bar} || P_{W1} Q^n_{Y2 | v2bar} )
///   leakage   = I( W1 ; Y2^n | v2bar )
///   stealth   = D( P_{Y2 | v2bar} || Q^n_{Y2 | v2bar} )
/// In exact mode effective = leakage + stealth up to float residue.
struct SecrecyReport {
  double effective = 0.0;
  double leakage = 0.0;
  double stealth = 0.0;
  SecrecyMode mode = SecrecyMode::kExact;
  std::size_t n = 0;
  std::uint64_t m1_count = 0, j1_count = 0;
  std::uint64_t m2 = 0, s2 = 0, k2 = 0;
  double min_mass_bound = 0.0;     // -n log2(min positive entry of Q)
  double residual_identity = 0.0;  // |effective - leakage - stealth|
  double residual_chain = 0.0;     // |effective - E_m D(P_{Y2|m} || Q^n)|
  std::uint64_t covering_fallbacks = 0;  // restricted k1 searches that failed
  std::uint64_t samples = 0;             // Monte Carlo only
  double mc_stderr = 0.0;                // Monte Carlo only
};

inline constexpr std::uint64_t kDefaultSecrecyTermCap = 10'000'000;

/// Exact enumeration of |Y2|^n * M1 * J1 terms. The message-1 codeword for
/// (m1, s1) is the lexicographically first k1 whose pair with v2bar is
/// jointly eps-typical (k1 = first index on failure, counted). Throws
/// CapExceeded above the term cap.
SecrecyReport effective_secrecy_exact(const Codebook& cb, const AuxScheme& scheme,
                                      const BroadcastChannel& ch, std::uint64_t m2,
                                      std::uint64_t s2, std::uint64_t k2 = 0,
                                      std::uint64_t term_cap = kDefaultSecrecyTermCap);

/// Single-threaded reference implementation built on the generic probability
/// tables instead of the chunked kernel (kept for testing).
SecrecyReport effective_secrecy_exact_serial(
    const Codebook& cb, const AuxScheme& scheme, const BroadcastChannel& ch,
    std::uint64_t m2, std::uint64_t s2, std::uint64_t k2 = 0,
    std::uint64_t term_cap = kDefaultSecrecyTermCap);

/// Plug-in sampling estimate for blocklengths beyond the exact cap: the
/// mixture over s1 is summed exactly per sampled sequence and Q^n is a
/// closed-form product, so only the outer expectation is sampled.
SecrecyReport effective_secrecy_monte_carlo(const Codebook& cb,
                                            const AuxScheme& scheme,
                                            const BroadcastChannel& ch,
                                            std::uint64_t m2, std::uint64_t s2,
                                            std::uint64_t k2,
                                            std::uint64_t samples,
                                            std::uint64_t seed);

/// Exact reports averaged over the whole (m2, s2) ensemble at a pinned k2,
/// plus the unconditional leakage I(W1; Y2^n | W2) of the mixture, which the
/// averaged effective secrecy upper-bounds.
struct AveragedSecrecy {
  double avg_effective = 0.0;
  double avg_leakage = 0.0;
  double avg_stealth = 0.0;
  double i_w1_y2_given_w2 = 0.0;
  std::uint64_t reports = 0;
};

AveragedSecrecy averaged_secrecy_report(const Codebook& cb, const AuxScheme& scheme,
                                        const BroadcastChannel& ch,
                                        std::uint64_t k2 = 0,
                                        std::uint64_t term_cap = kDefaultSecrecyTermCap);

/// Both halves of the enumerable upper-bound surrogate
///   sum_{v1} P^n(v1) sum_{y2} P^n(y2|v1,v2bar) log2( P^n(y2|v1,v2bar)
///                                                    / (J1 Q^n) + 1 )
/// split by typicality: `typical_sum` keeps pair-typical v1 with
/// triple-typical y2, `atypical_sum` keeps pair-typical v1 with the rest.
/// `full_surrogate` drops all typicality restrictions.
struct SurrogateSplit {
  double typical_sum = 0.0;
  double atypical_sum = 0.0;
  double full_surrogate = 0.0;
  std::uint64_t pair_typical_words = 0;
  std::uint64_t j1_count = 0;
  std::size_t n = 0;
};

SurrogateSplit jensen_surrogate_split(const AuxScheme& scheme,
                                      const BroadcastChannel& ch,
                                      const Sequence& v2bar, std::uint64_t j1,
                                      double epsilon,
                                      std::uint64_t term_cap = kDefaultSecrecyTermCap);

/// Exact expectation, over every possible draw of the M1*J1 codeword bank,
/// of E_m[ D(P_{Y2 | v2bar, m} || Q^n) ]. Exponential in M1*J1; tiny
/// instances only. The Jensen surrogate upper-bounds this quantity.
double exact_ensemble_divergence(const AuxScheme& scheme, const BroadcastChannel& ch,
                                 const Sequence& v2bar, std::uint64_t m1_count,
                                 std::uint64_t j1, std::uint64_t tuple_cap = 1u << 20);

struct SweepRow {
  double r1p = 0.0;
  std::uint64_t j1 = 0;
  double mean_effective = 0.0;
  double std_effective = 0.0;
  double mean_leakage = 0.0;
  std::uint64_t draws = 0;
};

/// Mean exact effective secrecy per randomization rate, averaged over
/// independently drawn codebooks (message count and side-2 indices fixed).
std::vector<SweepRow> leakage_rate_sweep(
    const BroadcastChannel& ch, const AuxScheme& scheme, std::size_t n,
    const std::vector<double>& r1p_grid, std::uint64_t m1_count,
    std::uint64_t draws, std::uint64_t seed, double eps, double eps1, double eps2,
    std::uint64_t term_cap = kDefaultSecrecyTermCap);

}  // namespace secbc
