#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "secbc/pmf.hpp"
#include "secbc/rng.hpp"

namespace secbc {

/// A length-n word of symbol indices over some alphabet.
using Sequence = std::vector<std::uint8_t>;

/// n-fold product of a per-letter law: memoryless sequences, probabilities in
/// log space so blocklengths beyond ~50 do not underflow.
class SequenceLaw {
 public:
  SequenceLaw(Pmf base, std::size_t n);
  SequenceLaw(CondPmf base, std::size_t n);

  std::size_t n() const { return n_; }
  bool conditional() const { return std::holds_alternative<CondPmf>(base_); }
  const Pmf& base_pmf() const { return std::get<Pmf>(base_); }
  const CondPmf& base_cond() const { return std::get<CondPmf>(base_); }

  /// log2 probability of a sequence (unconditional law).
  double log2_prob(const Sequence& seq) const;

  /// log2 probability of an output sequence given aligned conditioning
  /// sequences, one per conditioning axis.
  double log2_prob(const Sequence& out,
                   const std::vector<const Sequence*>& given) const;

  /// i.i.d.-per-letter sample (unconditional law).
  Sequence sample(RngStream& rng) const;

  /// Per-letter sample from the conditional rows selected by the aligned
  /// conditioning sequences.
  Sequence sample(const std::vector<const Sequence*>& given, RngStream& rng) const;

 private:
  std::variant<Pmf, CondPmf> base_;
  std::size_t n_ = 0;
  std::vector<CumulativeSampler> row_samplers_;  // one per conditioning tuple
};

/// Deterministic sequence whose empirical type is as close as possible to the
/// pmf (largest-remainder rounding; symbols emitted in alphabet order).
Sequence representative_sequence(const Pmf& p, std::size_t n);

/// Lexicographic counter over all length-n sequences with q symbols.
class SequenceCounter {
 public:
  SequenceCounter(std::size_t q, std::size_t n) : q_(q), seq_(n, 0), done_(n == 0) {}

  static std::uint64_t count(std::size_t q, std::size_t n) {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < n; ++i) c *= q;
    return c;
  }

  const Sequence& value() const { return seq_; }
  bool done() const { return done_; }

  void advance() {
    for (std::size_t i = seq_.size(); i-- > 0;) {
      if (++seq_[i] < q_) return;
      seq_[i] = 0;
    }
    done_ = true;
  }

  /// Sequence for a given lexicographic rank (most significant letter first).
  static Sequence at(std::size_t q, std::size_t n, std::uint64_t rank) {
    Sequence s(n, 0);
    for (std::size_t i = n; i-- > 0;) {
      s[i] = static_cast<std::uint8_t>(rank % q);
      rank /= q;
    }
    return s;
  }

 private:
  std::size_t q_;
  Sequence seq_;
  bool done_;
};

}  // namespace secbc
