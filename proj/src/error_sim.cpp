#include "secbc/error_sim.hpp"

#include <cmath>

#include "secbc/errors.hpp"
#include "secbc/info.hpp"
#include "secbc/parallel.hpp"

namespace secbc {

double wrong_candidate_match_prob(const Pmf& v_marginal, const TypicalWindow& window,
                                  std::size_t qy, const Sequence& y) {
  const std::size_t qv = v_marginal.size();
  std::vector<std::uint32_t> ny(qy, 0);
  for (std::uint8_t b : y) ny[b] += 1;

  // Joint counts split by output letter: within letter group b the candidate
  // contributes Multinomial(ny[b], P_V) counts, independent across b.
  long double q = 1.0L;
  std::vector<long double> f, g;
  for (std::size_t b = 0; b < qy; ++b) {
    const std::uint32_t nb = ny[b];
    if (nb == 0) {
      // Empty group: every cell count is 0, which the window must allow.
      bool ok = true;
      for (std::size_t a = 0; a < qv; ++a) ok = ok && window.cell_allows(a * qy + b, 0);
      if (!ok) return 0.0;
      continue;
    }
    f.assign(nb + 1, 0.0L);
    f[0] = 1.0L;
    std::uint32_t filled = 0;
    for (std::size_t a = 0; a < qv; ++a) {
      auto [lo, hi] = window.cell_range(a * qy + b);
      if (hi < lo) return 0.0;
      hi = std::min<std::uint32_t>(hi, nb);
      g.assign(nb + 1, 0.0L);
      const double pa = v_marginal[a];
      for (std::uint32_t c = lo; c <= hi; ++c) {
        if (c > 0 && pa <= 0.0) break;
        const long double term =
            c == 0 ? 1.0L
                   : std::expl(static_cast<long double>(c) *
                                   std::logl(static_cast<long double>(pa)) -
                               std::lgammal(static_cast<long double>(c) + 1.0L));
        for (std::uint32_t j = 0; j <= filled && j + c <= nb; ++j) {
          if (f[j] != 0.0L) g[j + c] += f[j] * term;
        }
      }
      filled = std::min<std::uint32_t>(nb, filled + hi);
      f.swap(g);
    }
    const long double group =
        f[nb] * std::expl(std::lgammal(static_cast<long double>(nb) + 1.0L));
    if (group <= 0.0L) return 0.0;
    q *= group;
  }
  const double result = static_cast<double>(q);
  return result < 0.0 ? 0.0 : (result > 1.0 ? 1.0 : result);
}

namespace {

struct TrialOutcome {
  std::uint8_t err1 = 0, err2 = 0;
  std::uint8_t covering_fallback = 0;
  std::uint8_t x_fallback = 0;
};

struct SimSetup {
  CodeParams params;
  JointPmf pair_law;          // P(V1, V2)
  TypicalWindow pair_window;  // covering typicality
  std::size_t qv2 = 0;
  Pmf v1_marginal, v2_marginal;
  TypicalWindow dec1, dec2;  // decoder windows per receiver
  std::size_t qy1 = 0, qy2 = 0;
  SequenceLaw channel_law;  // conditional (Y1, Y2) | X, n-fold
  std::size_t y2_dim = 0;   // to split the joint output letter
  SimMode mode = SimMode::kExplicit;

  SimSetup(const BroadcastChannel& ch, const AuxScheme& scheme, const CodeParams& p)
      : params(p),
        pair_law(scheme.v1v2_marginal()),
        pair_window(pair_law, p.n, p.eps),
        qv2(pair_law.axis(1).size()),
        v1_marginal(scheme.v1_marginal()),
        v2_marginal(scheme.v2_marginal()),
        dec1(decoder_window(ch, scheme, 1, p.n, p.eps2)),
        dec2(decoder_window(ch, scheme, 2, p.n, p.eps2)),
        qy1(ch.out1().size()),
        qy2(ch.out2().size()),
        channel_law(ch.law(), p.n),
        y2_dim(ch.out2().size()) {}
};

void split_outputs(const SimSetup& s, const Sequence& joint, Sequence& y1,
                   Sequence& y2) {
  y1.resize(joint.size());
  y2.resize(joint.size());
  for (std::size_t i = 0; i < joint.size(); ++i) {
    y1[i] = static_cast<std::uint8_t>(joint[i] / s.y2_dim);
    y2[i] = static_cast<std::uint8_t>(joint[i] % s.y2_dim);
  }
}

TrialOutcome explicit_trial(const SimSetup& s, const AuxScheme& scheme,
                            const Codebook& cb, RngStream rng) {
  TrialOutcome out;
  const CodeParams& p = s.params;
  const std::uint64_t m1 = rng.uniform_below(p.m1);
  const std::uint64_t m2 = rng.uniform_below(p.m2);
  const TransmitRecord rec = encode(cb, scheme, m1, m2, rng);
  out.covering_fallback = rec.covering.fallback ? 1 : 0;
  out.x_fallback = rec.x_fallback ? 1 : 0;

  const Sequence joint = s.channel_law.sample({&rec.x}, rng);
  Sequence y1, y2;
  split_outputs(s, joint, y1, y2);

  const DecodeResult d1 = decode(cb, 1, y1, s.dec1);
  const DecodeResult d2 = decode(cb, 2, y2, s.dec2);
  out.err1 = (d1.status != DecodeStatus::kDecoded || d1.m != m1) ? 1 : 0;
  out.err2 = (d2.status != DecodeStatus::kDecoded || d2.m != m2) ? 1 : 0;
  return out;
}

/// P(no candidate among `count` independent banks of k words matches), with
/// per-word match probability q.
double none_match_prob(double q, long double count, std::uint64_t k) {
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return count > 0 ? 0.0 : 1.0;
  const long double words = count * static_cast<long double>(k);
  return static_cast<double>(std::expl(words * std::log1pl(-(long double)q)));
}

/// Ensemble treatment of one receiver given the transmitted bank and output.
std::uint8_t ensemble_receiver_error(const SimSetup& s,
                                     const std::vector<Sequence>& true_bank,
                                     const TypicalWindow& window, std::size_t qy,
                                     const Pmf& v_marginal, const Sequence& y,
                                     std::uint64_t m_count, std::uint64_t j_count,
                                     RngStream& rng) {
  bool true_hit = false;
  for (const auto& w : true_bank) {
    if (pair_typical(w, y, window, qy)) {
      true_hit = true;
      break;
    }
  }
  const double q = wrong_candidate_match_prob(v_marginal, window, qy, y);
  const double p_match =
      q <= 0.0 ? 0.0 : -std::expm1(static_cast<double>(s.params.k) * std::log1p(-q));

  const long double same_m = static_cast<long double>(j_count - 1);
  const long double diff_m =
      (static_cast<long double>(m_count) - 1.0L) * static_cast<long double>(j_count);
  const double p_nb0 = none_match_prob(q, same_m, s.params.k);
  const double p_nc0 = none_match_prob(q, diff_m, s.params.k);

  const double u = rng.uniform();
  if (true_hit) {
    // Correct iff no other (m, s) bank matches.
    return u < p_nb0 * p_nc0 ? 0 : 1;
  }
  // Correct iff exactly one same-message bank matches and nothing else.
  double p_nb1 = 0.0;
  if (j_count >= 2) {
    const double rest = none_match_prob(q, same_m - 1.0L, s.params.k);
    p_nb1 = static_cast<double>(same_m) * p_match * rest;
  }
  return u < p_nb1 * p_nc0 ? 0 : 1;
}

TrialOutcome ensemble_trial(const SimSetup& s, const AuxScheme& scheme,
                            RngStream rng) {
  TrialOutcome out;
  const CodeParams& p = s.params;
  (void)rng.uniform_below(p.m1);  // message draw kept for stream parity
  (void)rng.uniform_below(p.m2);
  (void)rng.uniform_below(p.j1);  // s1, s2
  (void)rng.uniform_below(p.j2);

  // Fresh banks for the transmitted (m, s) pair: the ensemble view.
  const CumulativeSampler sm1(s.v1_marginal.mass());
  const CumulativeSampler sm2(s.v2_marginal.mass());
  std::vector<Sequence> bank1(p.k, Sequence(p.n));
  std::vector<Sequence> bank2(p.k, Sequence(p.n));
  for (auto& w : bank1) {
    for (auto& c : w) c = static_cast<std::uint8_t>(sm1.sample(rng));
  }
  for (auto& w : bank2) {
    for (auto& c : w) c = static_cast<std::uint8_t>(sm2.sample(rng));
  }

  CoveringChoice cover{0, 0, true};
  for (std::uint64_t k1 = 0; k1 < p.k && cover.fallback; ++k1) {
    for (std::uint64_t k2 = 0; k2 < p.k; ++k2) {
      if (pair_typical(bank1[k1], bank2[k2], s.pair_window, s.qv2)) {
        cover = {k1, k2, false};
        break;
      }
    }
  }
  out.covering_fallback = cover.fallback ? 1 : 0;

  bool x_fallback = false;
  const Sequence x = draw_input_word(scheme, bank1[cover.k1], bank2[cover.k2],
                                     p.eps1, rng, x_fallback);
  out.x_fallback = x_fallback ? 1 : 0;

  const Sequence joint = s.channel_law.sample({&x}, rng);
  Sequence y1, y2;
  split_outputs(s, joint, y1, y2);

  out.err1 = ensemble_receiver_error(s, bank1, s.dec1, s.qy1, s.v1_marginal, y1,
                                     p.m1, p.j1, rng);
  out.err2 = ensemble_receiver_error(s, bank2, s.dec2, s.qy2, s.v2_marginal, y2,
                                     p.m2, p.j2, rng);
  return out;
}

ErrorEstimate finalize(const std::vector<TrialOutcome>& outcomes, SimMode mode) {
  ErrorEstimate e;
  e.trials = outcomes.size();
  std::uint64_t e1 = 0, e2 = 0, cf = 0, xf = 0;
  for (const auto& o : outcomes) {
    e1 += o.err1;
    e2 += o.err2;
    cf += o.covering_fallback;
    xf += o.x_fallback;
  }
  const double t = static_cast<double>(e.trials);
  e.pe1 = static_cast<double>(e1) / t;
  e.pe2 = static_cast<double>(e2) / t;
  e.ci1 = 1.96 * std::sqrt(e.pe1 * (1.0 - e.pe1) / t);
  e.ci2 = 1.96 * std::sqrt(e.pe2 * (1.0 - e.pe2) / t);
  e.covering_fallback_fraction = static_cast<double>(cf) / t;
  e.x_fallback_fraction = static_cast<double>(xf) / t;
  e.mode_used = mode;
  return e;
}

SimMode resolve_mode(const CodeParams& p, SimMode mode, std::uint64_t letter_cap) {
  const auto fits = [&](std::uint64_t m, std::uint64_t j) {
    const long double letters =
        static_cast<long double>(m) * j * p.k * p.n;
    return letters <= static_cast<long double>(letter_cap);
  };
  const bool explicit_ok = fits(p.m1, p.j1) && fits(p.m2, p.j2);
  switch (mode) {
    case SimMode::kExplicit:
      if (!explicit_ok) {
        throw CapExceeded("error sim: codebook exceeds the letter cap");
      }
      return SimMode::kExplicit;
    case SimMode::kEnsemble:
      return SimMode::kEnsemble;
    case SimMode::kAuto:
      return explicit_ok ? SimMode::kExplicit : SimMode::kEnsemble;
  }
  return SimMode::kEnsemble;
}

}  // namespace

ErrorEstimate estimate_error(const BroadcastChannel& ch, const AuxScheme& scheme,
                             const CodeParams& params, std::uint64_t trials,
                             SimMode mode, std::uint64_t letter_cap) {
  if (trials == 0) throw std::invalid_argument("error sim: trials must be >= 1");
  const SimMode used = resolve_mode(params, mode, letter_cap);
  const SimSetup setup(ch, scheme, params);
  const RngStream root(params.seed);
  std::vector<TrialOutcome> outcomes(trials);
  if (used == SimMode::kExplicit) {
    const Codebook cb = generate_codebook(scheme, params, letter_cap);
    parallel_for_chunks(trials, [&](std::size_t t) {
      outcomes[t] = explicit_trial(setup, scheme, cb, root.derive(0x731a7, t));
    });
  } else {
    parallel_for_chunks(trials, [&](std::size_t t) {
      outcomes[t] = ensemble_trial(setup, scheme, root.derive(0x731a7, t));
    });
  }
  return finalize(outcomes, used);
}

ErrorEstimate estimate_error_serial(const BroadcastChannel& ch,
                                    const AuxScheme& scheme,
                                    const CodeParams& params, std::uint64_t trials,
                                    SimMode mode, std::uint64_t letter_cap) {
  if (trials == 0) throw std::invalid_argument("error sim: trials must be >= 1");
  const SimMode used = resolve_mode(params, mode, letter_cap);
  const SimSetup setup(ch, scheme, params);
  const RngStream root(params.seed);
  std::vector<TrialOutcome> outcomes(trials);
  if (used == SimMode::kExplicit) {
    const Codebook cb = generate_codebook(scheme, params, letter_cap);
    for (std::size_t t = 0; t < trials; ++t) {
      outcomes[t] = explicit_trial(setup, scheme, cb, root.derive(0x731a7, t));
    }
  } else {
    for (std::size_t t = 0; t < trials; ++t) {
      outcomes[t] = ensemble_trial(setup, scheme, root.derive(0x731a7, t));
    }
  }
  return finalize(outcomes, used);
}

}  // namespace secbc
