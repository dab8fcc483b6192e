#pragma once

#include <cstdint>

#include "secbc/codec.hpp"

namespace secbc {

enum class SimMode { kAuto, kExplicit, kEnsemble };

struct ErrorEstimate {
  double pe1 = 0.0, pe2 = 0.0;
  double ci1 = 0.0, ci2 = 0.0;  // 95% binomial half-widths
  std::uint64_t trials = 0;
  double covering_fallback_fraction = 0.0;
  double x_fallback_fraction = 0.0;
  SimMode mode_used = SimMode::kExplicit;
};

/// Probability that one independently drawn length-n word (i.i.d. from the
/// scheme's V_t marginal) lands jointly typical with the fixed output word y.
/// Exact, via a per-output-letter multinomial box sum; this is the matching
/// probability of any single wrong codeword at the decoder.
double wrong_candidate_match_prob(const Pmf& v_marginal, const TypicalWindow& window,
                                  std::size_t qy, const Sequence& y);

/// Monte-Carlo message error rates for both receivers.
///
/// Explicit mode draws one codebook from params.seed and runs the literal
/// encode/transmit/decode pipeline per trial. When the codebook exceeds the
/// letter cap, the ensemble mode redraws the transmitted (m, s) banks each
/// trial, simulates covering, input selection and the channel outright, and
/// handles the remaining (m', s') candidate banks exactly through their
/// match probability: per receiver it checks the true banks directly and
/// samples the wrong-candidate outcome from (1 - q)^{count} laws, which is
/// the random-coding ensemble average of the literal decoder.
ErrorEstimate estimate_error(const BroadcastChannel& ch, const AuxScheme& scheme,
                             const CodeParams& params, std::uint64_t trials,
                             SimMode mode = SimMode::kAuto,
                             std::uint64_t letter_cap = kDefaultCodebookLetterCap);

/// Single-threaded reference implementation (kept for testing).
ErrorEstimate estimate_error_serial(
    const BroadcastChannel& ch, const AuxScheme& scheme, const CodeParams& params,
    std::uint64_t trials, SimMode mode = SimMode::kAuto,
    std::uint64_t letter_cap = kDefaultCodebookLetterCap);

}  // namespace secbc
