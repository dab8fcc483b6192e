#include "secbc/secrecy.hpp"

#include <cmath>
#include <stdexcept>

#include "secbc/errors.hpp"
#include "secbc/info.hpp"
#include "secbc/parallel.hpp"

namespace secbc {
namespace {

struct LetterTables {
  std::size_t n = 0, qv1 = 0, qv2 = 0, qy2 = 0;
  std::vector<double> w2;    // P(y2 | v1, v2): [(v1 qv2 + v2) qy2 + y2]
  std::vector<double> qtab;  // Q(y2 | v2): [v2 qy2 + y2]
  Pmf v1_marginal;
  JointPmf pair_law;  // P(V1, V2)

  LetterTables(const AuxScheme& scheme, const BroadcastChannel& ch, std::size_t n_)
      : n(n_),
        qv1(scheme.v1_marginal().size()),
        qv2(scheme.v2_marginal().size()),
        qy2(ch.out2().size()),
        w2(y2_letter_channel(ch, scheme).table()),
        qtab(stealth_reference(ch, scheme).table()),
        v1_marginal(scheme.v1_marginal()),
        pair_law(scheme.v1v2_marginal()) {}

  double w(std::uint8_t v1, std::uint8_t v2, std::uint8_t y2) const {
    return w2[(static_cast<std::size_t>(v1) * qv2 + v2) * qy2 + y2];
  }
  double q(std::uint8_t v2, std::uint8_t y2) const {
    return qtab[static_cast<std::size_t>(v2) * qy2 + y2];
  }
};

struct ConditionalBank {
  Sequence v2bar;
  std::vector<Sequence> words;  // selected v1 word per (m1 j1 + s1)
  std::uint64_t fallbacks = 0;
  std::uint64_t m1c = 0, j1c = 0;
};

/// Covering restricted to the fixed v2bar: the smallest k1 whose pair with
/// v2bar is jointly typical, first index (flagged) when none is.
ConditionalBank select_bank(const Codebook& cb, const AuxScheme& scheme,
                            std::uint64_t m2, std::uint64_t s2, std::uint64_t k2) {
  const CodeParams& p = cb.params();
  if (m2 >= p.m2 || s2 >= p.j2 || k2 >= p.k) {
    throw std::out_of_range("secrecy: side-2 index out of range");
  }
  ConditionalBank bank;
  bank.v2bar = cb.v2_copy(m2, s2, k2);
  bank.m1c = p.m1;
  bank.j1c = p.j1;
  const JointPmf pair_law = scheme.v1v2_marginal();
  const TypicalWindow window(pair_law, p.n, p.eps);
  const std::size_t qv2 = pair_law.axis(1).size();
  bank.words.reserve(p.m1 * p.j1);
  for (std::uint64_t m1 = 0; m1 < p.m1; ++m1) {
    for (std::uint64_t s1 = 0; s1 < p.j1; ++s1) {
      std::uint64_t chosen = 0;
      bool found = false;
      for (std::uint64_t k1 = 0; k1 < p.k && !found; ++k1) {
        const Sequence w = cb.v1_copy(m1, s1, k1);
        if (pair_typical(w, bank.v2bar, window, qv2)) {
          chosen = k1;
          found = true;
        }
      }
      if (!found) bank.fallbacks += 1;
      bank.words.push_back(cb.v1_copy(m1, s1, chosen));
    }
  }
  return bank;
}

std::uint64_t checked_word_count(const LetterTables& t, std::uint64_t m1c,
                                 std::uint64_t j1c, std::uint64_t term_cap) {
  const double words = std::pow(static_cast<double>(t.qy2), static_cast<double>(t.n));
  const double terms = words * static_cast<double>(m1c) * static_cast<double>(j1c);
  if (terms > static_cast<double>(term_cap)) {
    throw CapExceeded("secrecy: |Y2|^n M1 J1 = " + std::to_string(terms) +
                      " exceeds cap; use the Monte Carlo estimator");
  }
  return SequenceCounter::count(t.qy2, t.n);
}

double table_min_mass_bound(const LetterTables& t) {
  double best = 1.0;
  for (double v : t.qtab) {
    if (v > 0.0 && v < best) best = v;
  }
  return -static_cast<double>(t.n) * std::log2(best);
}

struct ExactPartial {
  double eff = 0.0, leak = 0.0, stealth = 0.0;
  std::vector<double> dm;  // per-message divergence accumulators
  std::uint64_t infinities = 0;
};

/// Accumulates the three divergences over y2 ranks [begin, end).
void exact_scan(const LetterTables& t, const ConditionalBank& bank,
                std::uint64_t begin, std::uint64_t end, ExactPartial& part) {
  const std::size_t n = t.n;
  const double inv_m1 = 1.0 / static_cast<double>(bank.m1c);
  const double inv_m1j1 = inv_m1 / static_cast<double>(bank.j1c);
  part.dm.assign(bank.m1c, 0.0);
  Sequence y2(n);
  std::vector<double> pm(bank.m1c);
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    std::uint64_t rest = rank;
    for (std::size_t i = n; i-- > 0;) {
      y2[i] = static_cast<std::uint8_t>(rest % t.qy2);
      rest /= t.qy2;
    }
    double qn = 1.0;
    for (std::size_t i = 0; i < n; ++i) qn *= t.q(bank.v2bar[i], y2[i]);

    double py2 = 0.0;
    for (std::uint64_t m1 = 0; m1 < bank.m1c; ++m1) {
      double sum = 0.0;
      for (std::uint64_t s1 = 0; s1 < bank.j1c; ++s1) {
        const Sequence& w = bank.words[m1 * bank.j1c + s1];
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          prod *= t.w(w[i], bank.v2bar[i], y2[i]);
          if (prod == 0.0) break;
        }
        sum += prod;
      }
      pm[m1] = sum * inv_m1j1;
      py2 += pm[m1];
    }
    if (py2 <= 0.0) continue;
    if (qn <= 0.0) {
      part.infinities += 1;
      continue;
    }
    for (std::uint64_t m1 = 0; m1 < bank.m1c; ++m1) {
      const double p = pm[m1];
      if (p <= 0.0) continue;
      part.eff += p * std::log2(p / (inv_m1 * qn));
      part.leak += p * std::log2(p / (inv_m1 * py2));
      const double cond = p * static_cast<double>(bank.m1c);
      part.dm[m1] += cond * std::log2(cond / qn);
    }
    part.stealth += py2 * std::log2(py2 / qn);
  }
}

SecrecyReport finish_exact(const LetterTables& t, const ConditionalBank& bank,
                           const std::vector<ExactPartial>& parts, std::uint64_t m2,
                           std::uint64_t s2, std::uint64_t k2) {
  SecrecyReport r;
  r.mode = SecrecyMode::kExact;
  r.n = t.n;
  r.m1_count = bank.m1c;
  r.j1_count = bank.j1c;
  r.m2 = m2;
  r.s2 = s2;
  r.k2 = k2;
  r.covering_fallbacks = bank.fallbacks;
  r.min_mass_bound = table_min_mass_bound(t);

  std::vector<double> dm(bank.m1c, 0.0);
  std::uint64_t infinities = 0;
  for (const auto& part : parts) {
    r.effective += part.eff;
    r.leakage += part.leak;
    r.stealth += part.stealth;
    infinities += part.infinities;
    for (std::uint64_t m = 0; m < bank.m1c; ++m) dm[m] += part.dm[m];
  }
  if (infinities > 0) {
    throw std::domain_error("secrecy: output with positive mass but zero reference");
  }
  if (r.leakage < 0.0 && r.leakage > -1e-12) r.leakage = 0.0;
  if (r.stealth < 0.0 && r.stealth > -1e-12) r.stealth = 0.0;
  double chain = 0.0;
  for (std::uint64_t m = 0; m < bank.m1c; ++m) {
    chain += dm[m] / static_cast<double>(bank.m1c);
  }
  r.residual_identity = std::fabs(r.effective - r.leakage - r.stealth);
  r.residual_chain = std::fabs(r.effective - chain);
  return r;
}

}  // namespace

SecrecyReport effective_secrecy_exact(const Codebook& cb, const AuxScheme& scheme,
                                      const BroadcastChannel& ch, std::uint64_t m2,
                                      std::uint64_t s2, std::uint64_t k2,
                                      std::uint64_t term_cap) {
  const LetterTables t(scheme, ch, cb.params().n);
  const ConditionalBank bank = select_bank(cb, scheme, m2, s2, k2);
  const std::uint64_t words = checked_word_count(t, bank.m1c, bank.j1c, term_cap);

  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(words, 64));
  std::vector<ExactPartial> parts(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t begin = words * c / chunks;
    const std::uint64_t end = words * (c + 1) / chunks;
    exact_scan(t, bank, begin, end, parts[c]);
  });
  return finish_exact(t, bank, parts, m2, s2, k2);
}

SecrecyReport effective_secrecy_exact_serial(const Codebook& cb,
                                             const AuxScheme& scheme,
                                             const BroadcastChannel& ch,
                                             std::uint64_t m2, std::uint64_t s2,
                                             std::uint64_t k2,
                                             std::uint64_t term_cap) {
  // Reference path: materializes the whole P(m1, y2) table, then reads the
  // three quantities off it with entropy identities where possible.
  const LetterTables t(scheme, ch, cb.params().n);
  const ConditionalBank bank = select_bank(cb, scheme, m2, s2, k2);
  const std::uint64_t words = checked_word_count(t, bank.m1c, bank.j1c, term_cap);

  const double inv_m1j1 =
      1.0 / (static_cast<double>(bank.m1c) * static_cast<double>(bank.j1c));
  std::vector<double> joint(bank.m1c * words, 0.0);
  std::vector<double> qn(words, 1.0);
  Sequence y2(t.n);
  for (std::uint64_t rank = 0; rank < words; ++rank) {
    std::uint64_t rest = rank;
    for (std::size_t i = t.n; i-- > 0;) {
      y2[i] = static_cast<std::uint8_t>(rest % t.qy2);
      rest /= t.qy2;
    }
    for (std::size_t i = 0; i < t.n; ++i) qn[rank] *= t.q(bank.v2bar[i], y2[i]);
    for (std::uint64_t m1 = 0; m1 < bank.m1c; ++m1) {
      double sum = 0.0;
      for (std::uint64_t s1 = 0; s1 < bank.j1c; ++s1) {
        const Sequence& w = bank.words[m1 * bank.j1c + s1];
        double prod = 1.0;
        for (std::size_t i = 0; i < t.n; ++i) prod *= t.w(w[i], bank.v2bar[i], y2[i]);
        sum += prod;
      }
      joint[m1 * words + rank] = sum * inv_m1j1;
    }
  }

  SecrecyReport r;
  r.mode = SecrecyMode::kExact;
  r.n = t.n;
  r.m1_count = bank.m1c;
  r.j1_count = bank.j1c;
  r.m2 = m2;
  r.s2 = s2;
  r.k2 = k2;
  r.covering_fallbacks = bank.fallbacks;
  r.min_mass_bound = table_min_mass_bound(t);

  std::vector<double> pw(bank.m1c, 0.0);
  std::vector<double> py(words, 0.0);
  for (std::uint64_t m = 0; m < bank.m1c; ++m) {
    for (std::uint64_t y = 0; y < words; ++y) {
      pw[m] += joint[m * words + y];
      py[y] += joint[m * words + y];
    }
  }
  auto h = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double p : v) {
      if (p > 0.0) acc -= p * std::log2(p);
    }
    return acc;
  };
  const double h_joint = h(joint);
  r.leakage = std::max(0.0, h(pw) + h(py) - h_joint);

  double chain = 0.0;
  for (std::uint64_t y = 0; y < words; ++y) {
    if (py[y] > 0.0) {
      if (qn[y] <= 0.0) {
        throw std::domain_error(
            "secrecy: output with positive mass but zero reference");
      }
      r.stealth += py[y] * std::log2(py[y] / qn[y]);
    }
    for (std::uint64_t m = 0; m < bank.m1c; ++m) {
      const double p = joint[m * words + y];
      if (p > 0.0) {
        r.effective += p * std::log2(p / (pw[m] * qn[y]));
        const double cond = p / pw[m];
        chain += pw[m] * cond * std::log2(cond / qn[y]);
      }
    }
  }
  if (r.stealth < 0.0 && r.stealth > -1e-12) r.stealth = 0.0;
  r.residual_identity = std::fabs(r.effective - r.leakage - r.stealth);
  r.residual_chain = std::fabs(r.effective - chain);
  return r;
}

SecrecyReport effective_secrecy_monte_carlo(const Codebook& cb,
                                            const AuxScheme& scheme,
                                            const BroadcastChannel& ch,
                                            std::uint64_t m2, std::uint64_t s2,
                                            std::uint64_t k2, std::uint64_t samples,
                                            std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("secrecy: samples must be >= 1");
  const LetterTables t(scheme, ch, cb.params().n);
  const ConditionalBank bank = select_bank(cb, scheme, m2, s2, k2);

  const std::size_t chunks = 64;
  struct Partial {
    double eff = 0.0, eff_sq = 0.0, leak = 0.0, stealth = 0.0;
    std::uint64_t count = 0;
  };
  std::vector<Partial> parts(chunks);
  const RngStream root = RngStream(seed).derive(0x5ec, 0);
  const double inv_m1 = 1.0 / static_cast<double>(bank.m1c);
  const double inv_m1j1 = inv_m1 / static_cast<double>(bank.j1c);

  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t begin = samples * c / chunks;
    const std::uint64_t end = samples * (c + 1) / chunks;
    Partial& part = parts[c];
    Sequence y2(t.n);
    std::vector<double> row(t.qy2);
    for (std::uint64_t i = begin; i < end; ++i) {
      RngStream rng = root.derive(i);
      const std::uint64_t m1 = rng.uniform_below(bank.m1c);
      const std::uint64_t s1 = rng.uniform_below(bank.j1c);
      const Sequence& w = bank.words[m1 * bank.j1c + s1];
      for (std::size_t pos = 0; pos < t.n; ++pos) {
        for (std::size_t y = 0; y < t.qy2; ++y) {
          row[y] = t.w(w[pos], bank.v2bar[pos],
                       static_cast<std::uint8_t>(y));
        }
        y2[pos] = static_cast<std::uint8_t>(CumulativeSampler(row).sample(rng));
      }
      double qn = 1.0;
      for (std::size_t pos = 0; pos < t.n; ++pos) {
        qn *= t.q(bank.v2bar[pos], y2[pos]);
      }
      double py2 = 0.0, pm1 = 0.0;
      for (std::uint64_t m = 0; m < bank.m1c; ++m) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < bank.j1c; ++s) {
          const Sequence& word = bank.words[m * bank.j1c + s];
          double prod = 1.0;
          for (std::size_t pos = 0; pos < t.n; ++pos) {
            prod *= t.w(word[pos], bank.v2bar[pos], y2[pos]);
          }
          sum += prod;
        }
        const double p = sum * inv_m1j1;
        py2 += p;
        if (m == m1) pm1 = p * static_cast<double>(bank.m1c);  // P(y2 | m1)
      }
      const double eff_term = std::log2(pm1 / qn);
      part.eff += eff_term;
      part.eff_sq += eff_term * eff_term;
      part.leak += std::log2(pm1 / py2);
      part.stealth += std::log2(py2 / qn);
      part.count += 1;
    }
  });

  SecrecyReport r;
  r.mode = SecrecyMode::kMonteCarlo;
  r.n = t.n;
  r.m1_count = bank.m1c;
  r.j1_count = bank.j1c;
  r.m2 = m2;
  r.s2 = s2;
  r.k2 = k2;
  r.covering_fallbacks = bank.fallbacks;
  r.min_mass_bound = table_min_mass_bound(t);
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t count = 0;
  for (const auto& part : parts) {
    r.effective += part.eff;
    r.leakage += part.leak;
    r.stealth += part.stealth;
    sum += part.eff;
    sum_sq += part.eff_sq;
    count += part.count;
  }
  const double nn = static_cast<double>(count);
  r.effective /= nn;
  r.leakage /= nn;
  r.stealth /= nn;
  r.samples = count;
  const double var = std::max(0.0, sum_sq / nn - (sum / nn) * (sum / nn));
  r.mc_stderr = std::sqrt(var / nn);
  return r;
}

AveragedSecrecy averaged_secrecy_report(const Codebook& cb, const AuxScheme& scheme,
                                        const BroadcastChannel& ch, std::uint64_t k2,
                                        std::uint64_t term_cap) {
  const CodeParams& p = cb.params();
  const LetterTables t(scheme, ch, p.n);
  const std::uint64_t words = checked_word_count(t, p.m1, p.j1, term_cap);

  AveragedSecrecy out;
  // Mixture P(m1, y2 | m2) accumulated over s2 for the unconditional leakage.
  std::vector<double> mix(p.m1 * words, 0.0);
  double i_w1_y2_w2 = 0.0;
  const double inv_m1j1 =
      1.0 / (static_cast<double>(p.m1) * static_cast<double>(p.j1));

  for (std::uint64_t m2 = 0; m2 < p.m2; ++m2) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::uint64_t s2 = 0; s2 < p.j2; ++s2) {
      const SecrecyReport r = effective_secrecy_exact(cb, scheme, ch, m2, s2, k2,
                                                      term_cap);
      out.avg_effective += r.effective;
      out.avg_leakage += r.leakage;
      out.avg_stealth += r.stealth;
      out.reports += 1;

      const ConditionalBank bank = select_bank(cb, scheme, m2, s2, k2);
      Sequence y2(t.n);
      for (std::uint64_t rank = 0; rank < words; ++rank) {
        std::uint64_t rest = rank;
        for (std::size_t i = t.n; i-- > 0;) {
          y2[i] = static_cast<std::uint8_t>(rest % t.qy2);
          rest /= t.qy2;
        }
        for (std::uint64_t m1 = 0; m1 < p.m1; ++m1) {
          double sum = 0.0;
          for (std::uint64_t s1 = 0; s1 < p.j1; ++s1) {
            const Sequence& w = bank.words[m1 * p.j1 + s1];
            double prod = 1.0;
            for (std::size_t i = 0; i < t.n; ++i) {
              prod *= t.w(w[i], bank.v2bar[i], y2[i]);
            }
            sum += prod;
          }
          mix[m1 * words + rank] +=
              sum * inv_m1j1 / static_cast<double>(p.j2);
        }
      }
    }
    // I(W1; Y2 | W2 = m2) of the s2-averaged table.
    std::vector<double> pw(p.m1, 0.0), py(words, 0.0);
    for (std::uint64_t m = 0; m < p.m1; ++m) {
      for (std::uint64_t y = 0; y < words; ++y) {
        pw[m] += mix[m * words + y];
        py[y] += mix[m * words + y];
      }
    }
    double i_cond = 0.0;
    for (std::uint64_t m = 0; m < p.m1; ++m) {
      for (std::uint64_t y = 0; y < words; ++y) {
        const double v = mix[m * words + y];
        if (v > 0.0) i_cond += v * std::log2(v / (pw[m] * py[y]));
      }
    }
    i_w1_y2_w2 += std::max(0.0, i_cond) / static_cast<double>(p.m2);
  }
  const double reports = static_cast<double>(out.reports);
  out.avg_effective /= reports;
  out.avg_leakage /= reports;
  out.avg_stealth /= reports;
  out.i_w1_y2_given_w2 = i_w1_y2_w2;
  return out;
}

SurrogateSplit jensen_surrogate_split(const AuxScheme& scheme,
                                      const BroadcastChannel& ch,
                                      const Sequence& v2bar, std::uint64_t j1,
                                      double epsilon, std::uint64_t term_cap) {
  const std::size_t n = v2bar.size();
  const LetterTables t(scheme, ch, n);
  const double pair_words =
      std::pow(static_cast<double>(t.qv1 * t.qy2), static_cast<double>(n));
  if (pair_words > static_cast<double>(term_cap)) {
    throw CapExceeded("surrogate split: |V1|^n |Y2|^n exceeds cap");
  }

  const TypicalWindow pair_window(t.pair_law, n, epsilon);
  const CondPmf letter = y2_letter_channel(ch, scheme);
  const JointPmf triple_law = t.pair_law.compose(letter);
  const TypicalWindow triple_window(triple_law, n, epsilon);

  const std::uint64_t v1_words = SequenceCounter::count(t.qv1, n);
  const std::uint64_t y2_words = SequenceCounter::count(t.qy2, n);
  const std::size_t chunks =
      static_cast<std::size_t>(std::min<std::uint64_t>(v1_words, 64));

  struct Partial {
    double typical = 0.0, atypical = 0.0, full = 0.0;
    std::uint64_t pair_typical = 0;
  };
  std::vector<Partial> parts(chunks);

  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t begin = v1_words * c / chunks;
    const std::uint64_t end = v1_words * (c + 1) / chunks;
    Partial& part = parts[c];
    Sequence v1(n), y2(n);
    std::vector<std::uint32_t> pair_counts(t.qv1 * t.qv2);
    std::vector<std::uint32_t> triple_counts(t.qv1 * t.qv2 * t.qy2);
    const double jj = static_cast<double>(j1);
    for (std::uint64_t vr = begin; vr < end; ++vr) {
      std::uint64_t rest = vr;
      for (std::size_t i = n; i-- > 0;) {
        v1[i] = static_cast<std::uint8_t>(rest % t.qv1);
        rest /= t.qv1;
      }
      double pv1 = 1.0;
      for (std::size_t i = 0; i < n; ++i) pv1 *= t.v1_marginal[v1[i]];
      if (pv1 == 0.0) continue;

      pair_counts.assign(pair_counts.size(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        pair_counts[v1[i] * t.qv2 + v2bar[i]] += 1;
      }
      const bool pair_ok = pair_window.contains(pair_counts);
      if (pair_ok) part.pair_typical += 1;

      for (std::uint64_t yr = 0; yr < y2_words; ++yr) {
        std::uint64_t yrest = yr;
        for (std::size_t i = n; i-- > 0;) {
          y2[i] = static_cast<std::uint8_t>(yrest % t.qy2);
          yrest /= t.qy2;
        }
        double py = 1.0, qn = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          py *= t.w(v1[i], v2bar[i], y2[i]);
          qn *= t.q(v2bar[i], y2[i]);
        }
        if (py == 0.0) continue;
        const double term = pv1 * py * std::log2(py / (jj * qn) + 1.0);
        part.full += term;
        if (!pair_ok) continue;
        triple_counts.assign(triple_counts.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
          triple_counts[(v1[i] * t.qv2 + v2bar[i]) * t.qy2 + y2[i]] += 1;
        }
        if (triple_window.contains(triple_counts)) {
          part.typical += term;
        } else {
          part.atypical += term;
        }
      }
    }
  });

  SurrogateSplit split;
  split.j1_count = j1;
  split.n = n;
  for (const auto& part : parts) {
    split.typical_sum += part.typical;
    split.atypical_sum += part.atypical;
    split.full_surrogate += part.full;
    split.pair_typical_words += part.pair_typical;
  }
  return split;
}

double exact_ensemble_divergence(const AuxScheme& scheme, const BroadcastChannel& ch,
                                 const Sequence& v2bar, std::uint64_t m1_count,
                                 std::uint64_t j1, std::uint64_t tuple_cap) {
  const std::size_t n = v2bar.size();
  const LetterTables t(scheme, ch, n);
  const std::uint64_t v1_words = SequenceCounter::count(t.qv1, n);
  const std::uint64_t bank = m1_count * j1;
  double tuples_f = 1.0;
  for (std::uint64_t i = 0; i < bank; ++i) {
    tuples_f *= static_cast<double>(v1_words);
    if (tuples_f > static_cast<double>(tuple_cap)) {
      throw CapExceeded("ensemble divergence: codebook tuple space exceeds cap");
    }
  }
  const std::uint64_t tuples = static_cast<std::uint64_t>(tuples_f);
  const std::uint64_t y2_words = SequenceCounter::count(t.qy2, n);

  // Per-word probabilities and letter sequences, reused across tuples.
  std::vector<Sequence> word(v1_words, Sequence(n));
  std::vector<double> word_prob(v1_words, 1.0);
  for (std::uint64_t wr = 0; wr < v1_words; ++wr) {
    std::uint64_t rest = wr;
    for (std::size_t i = n; i-- > 0;) {
      word[wr][i] = static_cast<std::uint8_t>(rest % t.qv1);
      rest /= t.qv1;
    }
    for (std::size_t i = 0; i < n; ++i) word_prob[wr] *= t.v1_marginal[word[wr][i]];
  }

  double expectation = 0.0;
  std::vector<std::uint64_t> pick(bank, 0);
  Sequence y2(n);
  for (std::uint64_t tuple = 0; tuple < tuples; ++tuple) {
    std::uint64_t rest = tuple;
    double tuple_prob = 1.0;
    for (std::uint64_t b = 0; b < bank; ++b) {
      pick[b] = rest % v1_words;
      rest /= v1_words;
      tuple_prob *= word_prob[pick[b]];
    }
    if (tuple_prob == 0.0) continue;

    double divergence = 0.0;
    for (std::uint64_t yr = 0; yr < y2_words; ++yr) {
      std::uint64_t yrest = yr;
      for (std::size_t i = n; i-- > 0;) {
        y2[i] = static_cast<std::uint8_t>(yrest % t.qy2);
        yrest /= t.qy2;
      }
      double qn = 1.0;
      for (std::size_t i = 0; i < n; ++i) qn *= t.q(v2bar[i], y2[i]);
      for (std::uint64_t m = 0; m < m1_count; ++m) {
        double cond = 0.0;
        for (std::uint64_t s = 0; s < j1; ++s) {
          const Sequence& w = word[pick[m * j1 + s]];
          double prod = 1.0;
          for (std::size_t i = 0; i < n; ++i) prod *= t.w(w[i], v2bar[i], y2[i]);
          cond += prod;
        }
        cond /= static_cast<double>(j1);
        if (cond > 0.0) {
          divergence += cond * std::log2(cond / qn) / static_cast<double>(m1_count);
        }
      }
    }
    expectation += tuple_prob * divergence;
  }
  return expectation;
}

std::vector<SweepRow> leakage_rate_sweep(const BroadcastChannel& ch,
                                         const AuxScheme& scheme, std::size_t n,
                                         const std::vector<double>& r1p_grid,
                                         std::uint64_t m1_count, std::uint64_t draws,
                                         std::uint64_t seed, double eps, double eps1,
                                         double eps2, std::uint64_t term_cap) {
  if (r1p_grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (draws == 0) throw std::invalid_argument("sweep: draws must be >= 1");
  std::vector<SweepRow> rows;
  rows.reserve(r1p_grid.size());
  for (std::size_t g = 0; g < r1p_grid.size(); ++g) {
    const std::uint64_t j1 = count_from_rate(n, r1p_grid[g]);
    std::vector<double> eff(draws, 0.0), leak(draws, 0.0);
    parallel_for_chunks(draws, [&](std::size_t d) {
      const std::uint64_t draw_seed =
          splitmix64(seed ^ splitmix64((g << 20) + d + 1));
      const CodeParams params = CodeParams::from_counts(
          n, m1_count, j1, 1, 1, 1, eps, eps1, eps2, draw_seed);
      const Codebook cb = generate_codebook(scheme, params);
      const SecrecyReport r =
          effective_secrecy_exact(cb, scheme, ch, 0, 0, 0, term_cap);
      eff[d] = r.effective;
      leak[d] = r.leakage;
    });
    SweepRow row;
    row.r1p = r1p_grid[g];
    row.j1 = j1;
    row.draws = draws;
    double sum = 0.0, sum_sq = 0.0, lsum = 0.0;
    for (std::size_t d = 0; d < draws; ++d) {
      sum += eff[d];
      sum_sq += eff[d] * eff[d];
      lsum += leak[d];
    }
    const double dd = static_cast<double>(draws);
    row.mean_effective = sum / dd;
    row.mean_leakage = lsum / dd;
    row.std_effective = std::sqrt(std::max(0.0, sum_sq / dd - row.mean_effective *
                                                                  row.mean_effective));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace secbc
