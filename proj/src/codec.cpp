#include "secbc/codec.hpp"

#include <cmath>
#include <stdexcept>

#include "secbc/errors.hpp"
#include "secbc/parallel.hpp"

namespace secbc {

std::uint64_t count_from_rate(std::size_t n, double rate) {
  if (rate < 0.0) throw std::invalid_argument("count_from_rate: negative rate");
  const double v = std::exp2(static_cast<double>(n) * rate);
  if (v > 9.0e18) throw std::overflow_error("count_from_rate: 2^{nR} exceeds u64");
  const double r = std::round(v);
  if (std::fabs(v - r) <= 1e-9 * std::max(1.0, r)) {
    return static_cast<std::uint64_t>(r);
  }
  return static_cast<std::uint64_t>(std::ceil(v));
}

CodeParams CodeParams::from_rates(std::size_t n, const RatePoint& rates, double eps,
                                  double eps1, double eps2, std::uint64_t seed) {
  CodeParams p;
  p.n = n;
  p.rates = rates;
  p.eps = eps;
  p.eps1 = eps1;
  p.eps2 = eps2;
  p.seed = seed;
  p.m1 = count_from_rate(n, rates.r1);
  p.m2 = count_from_rate(n, rates.r2);
  p.j1 = count_from_rate(n, rates.r1p);
  p.j2 = count_from_rate(n, rates.r2p);
  p.k = count_from_rate(n, rates.rco);
  p.validate();
  return p;
}

CodeParams CodeParams::from_counts(std::size_t n, std::uint64_t m1, std::uint64_t j1,
                                   std::uint64_t m2, std::uint64_t j2,
                                   std::uint64_t k, double eps, double eps1,
                                   double eps2, std::uint64_t seed) {
  CodeParams p;
  p.n = n;
  p.m1 = m1;
  p.m2 = m2;
  p.j1 = j1;
  p.j2 = j2;
  p.k = k;
  p.eps = eps;
  p.eps1 = eps1;
  p.eps2 = eps2;
  p.seed = seed;
  const double nn = static_cast<double>(n);
  p.rates.r1 = std::log2(static_cast<double>(m1)) / nn;
  p.rates.r2 = std::log2(static_cast<double>(m2)) / nn;
  p.rates.r1p = std::log2(static_cast<double>(j1)) / nn;
  p.rates.r2p = std::log2(static_cast<double>(j2)) / nn;
  p.rates.rco = std::log2(static_cast<double>(k)) / nn;
  p.validate();
  return p;
}

void CodeParams::validate() const {
  if (n == 0) throw std::invalid_argument("code params: n must be >= 1");
  if (m1 == 0 || m2 == 0 || j1 == 0 || j2 == 0 || k == 0) {
    throw std::invalid_argument("code params: all index counts must be >= 1");
  }
  if (!(eps > 0.0 && eps < eps1 && eps1 < eps2 && eps2 < 0.5)) {
    throw std::invalid_argument(
        "code params: typicality chain must satisfy 0 < eps < eps' < eps'' < 1/2");
  }
}

namespace {

void fill_bank(std::vector<std::uint8_t>& bank, const Pmf& marginal,
               std::size_t n, RngStream rng) {
  const CumulativeSampler sampler(marginal.mass());
  for (auto& letter : bank) {
    letter = static_cast<std::uint8_t>(sampler.sample(rng));
  }
  (void)n;
}

}  // namespace

Codebook generate_codebook(const AuxScheme& scheme, const CodeParams& params,
                           std::uint64_t letter_cap) {
  params.validate();
  const auto letters = [&](std::uint64_t m, std::uint64_t j) -> std::uint64_t {
    const long double total = static_cast<long double>(m) * j * params.k * params.n;
    if (total > static_cast<long double>(letter_cap)) {
      throw CapExceeded("codebook: m*j*k*n letters exceed cap");
    }
    return m * j * params.k * params.n;
  };
  Codebook cb;
  cb.params_ = params;
  cb.side1_.resize(letters(params.m1, params.j1));
  cb.side2_.resize(letters(params.m2, params.j2));
  const RngStream root(params.seed);
  fill_bank(cb.side1_, scheme.v1_marginal(), params.n, root.derive(0xc0de, 1));
  fill_bank(cb.side2_, scheme.v2_marginal(), params.n, root.derive(0xc0de, 2));
  return cb;
}

CoveringChoice select_covering_pair(const Codebook& cb, const AuxScheme& scheme,
                                    std::uint64_t m1, std::uint64_t s1,
                                    std::uint64_t m2, std::uint64_t s2,
                                    double epsilon) {
  const CodeParams& p = cb.params();
  const JointPmf pair_law = scheme.v1v2_marginal();
  const TypicalWindow window(pair_law, p.n, epsilon);
  const std::size_t q2 = pair_law.axis(1).size();
  for (std::uint64_t k1 = 0; k1 < p.k; ++k1) {
    const auto w1 = cb.v1(m1, s1, k1);
    const Sequence v1(w1.begin(), w1.end());
    for (std::uint64_t k2 = 0; k2 < p.k; ++k2) {
      const auto w2 = cb.v2(m2, s2, k2);
      const Sequence v2(w2.begin(), w2.end());
      if (pair_typical(v1, v2, window, q2)) {
        return {k1, k2, false};
      }
    }
  }
  return {0, 0, true};
}

Sequence draw_input_word(const AuxScheme& scheme, const Sequence& v1,
                         const Sequence& v2, double eps1, RngStream& rng,
                         bool& fallback) {
  const CondPmf& xmap = scheme.xmap();
  const std::size_t v2n = xmap.given_axes()[1].size();
  std::vector<CumulativeSampler> rows;
  rows.reserve(xmap.given_cells());
  for (std::size_t g = 0; g < xmap.given_cells(); ++g) {
    rows.emplace_back(xmap.row(g));
  }
  const JointPmf triple = scheme.v1v2_marginal().compose(xmap);
  const std::size_t n = v1.size();
  const TypicalWindow window(triple, n, eps1);
  const std::size_t qx = xmap.out_axes()[0].size();

  Sequence x(n);
  std::vector<std::uint32_t> counts(triple.cell_count());
  for (int attempt = 0; attempt < kInputSelectRetries; ++attempt) {
    counts.assign(counts.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t g = v1[i] * v2n + v2[i];
      x[i] = static_cast<std::uint8_t>(rows[g].sample(rng));
      counts[(v1[i] * v2n + v2[i]) * qx + x[i]] += 1;
    }
    if (window.contains(counts)) {
      fallback = false;
      return x;
    }
  }
  fallback = true;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = v1[i] * v2n + v2[i];
    x[i] = static_cast<std::uint8_t>(rows[g].sample(rng));
  }
  return x;
}

TransmitRecord encode(const Codebook& cb, const AuxScheme& scheme, std::uint64_t m1,
                      std::uint64_t m2, RngStream& rng) {
  const CodeParams& p = cb.params();
  if (m1 >= p.m1 || m2 >= p.m2) {
    throw std::out_of_range("encode: message index out of range");
  }
  TransmitRecord rec;
  rec.m1 = m1;
  rec.m2 = m2;
  rec.s1 = rng.uniform_below(p.j1);
  rec.s2 = rng.uniform_below(p.j2);
  rec.covering = select_covering_pair(cb, scheme, m1, rec.s1, m2, rec.s2, p.eps);
  const Sequence v1 = cb.v1_copy(m1, rec.s1, rec.covering.k1);
  const Sequence v2 = cb.v2_copy(m2, rec.s2, rec.covering.k2);
  rec.x = draw_input_word(scheme, v1, v2, p.eps1, rng, rec.x_fallback);
  return rec;
}

TypicalWindow decoder_window(const BroadcastChannel& ch, const AuxScheme& scheme,
                             int receiver, std::size_t n, double eps2) {
  const CondPmf letter =
      receiver == 1 ? y1_letter_channel(ch, scheme) : y2_letter_channel(ch, scheme);
  const JointPmf vvy = scheme.v1v2_marginal().compose(letter);
  const JointPmf ref = vvy.marginal(
      {receiver == 1 ? kAxisV1 : kAxisV2, receiver == 1 ? kAxisY1 : kAxisY2});
  return TypicalWindow(ref, n, eps2);
}

DecodeResult decode(const Codebook& cb, int receiver, const Sequence& y,
                    const TypicalWindow& window) {
  const CodeParams& p = cb.params();
  if (y.size() != p.n) throw std::invalid_argument("decode: wrong output length");
  const std::uint64_t m_count = receiver == 1 ? p.m1 : p.m2;
  const std::uint64_t j_count = receiver == 1 ? p.j1 : p.j2;
  const std::size_t qy = window.dims()[1];

  DecodeResult result;
  bool found = false;
  for (std::uint64_t m = 0; m < m_count; ++m) {
    for (std::uint64_t s = 0; s < j_count; ++s) {
      bool hit = false;
      for (std::uint64_t k = 0; k < p.k && !hit; ++k) {
        const auto w = receiver == 1 ? cb.v1(m, s, k) : cb.v2(m, s, k);
        const Sequence v(w.begin(), w.end());
        hit = pair_typical(v, y, window, qy);
      }
      if (!hit) continue;
      if (found) {
        result.status = DecodeStatus::kAmbiguous;
        return result;
      }
      found = true;
      result.m = m;
      result.s = s;
    }
  }
  result.status = found ? DecodeStatus::kDecoded : DecodeStatus::kNoCandidate;
  return result;
}

// ---------------------------------------------------------------------------
// Covering-failure estimation.

double pair_typical_prob_exact(const JointPmf& pair_law, std::size_t n,
                               double epsilon) {
  const Pmf p1 = pair_law.marginal_pmf(pair_law.axis(0).name());
  const Pmf p2 = pair_law.marginal_pmf(pair_law.axis(1).name());
  const std::size_t q1 = p1.size(), q2 = p2.size();
  const TypicalWindow window(pair_law, n, epsilon);

  // Exact sum over joint count tables inside the typicality windows, under
  // the product law P1^n x P2^n.
  std::vector<double> log_cell(q1 * q2);
  std::vector<double> cell_mass(q1 * q2);
  for (std::size_t a = 0; a < q1; ++a) {
    for (std::size_t b = 0; b < q2; ++b) {
      const double m = p1[a] * p2[b];
      cell_mass[a * q2 + b] = m;
      log_cell[a * q2 + b] = m > 0.0 ? std::log(m) : 0.0;
    }
  }
  long double total = 0.0L;
  std::vector<std::uint32_t> counts(q1 * q2, 0);
  const long double log_nfact = std::lgammal(static_cast<long double>(n) + 1.0L);

  const std::size_t cells = q1 * q2;
  // Depth-first over cells; the last cell absorbs the remaining count.
  auto rec = [&](auto&& self, std::size_t cell, std::uint32_t remaining,
                 long double log_weight) -> void {
    if (cell + 1 == cells) {
      if (!window.cell_allows(cell, remaining)) return;
      long double w = log_weight;
      if (remaining > 0) {
        if (cell_mass[cell] <= 0.0) return;
        w += static_cast<long double>(remaining) * log_cell[cell] -
             std::lgammal(static_cast<long double>(remaining) + 1.0L);
      }
      total += std::expl(log_nfact + w);
      return;
    }
    const auto [lo, hi] = window.cell_range(cell);
    if (hi < lo) return;
    const std::uint32_t top = std::min<std::uint32_t>(hi, remaining);
    for (std::uint32_t c = lo; c <= top; ++c) {
      long double w = log_weight;
      if (c > 0) {
        if (cell_mass[cell] <= 0.0) break;
        w += static_cast<long double>(c) * log_cell[cell] -
             std::lgammal(static_cast<long double>(c) + 1.0L);
      }
      self(self, cell + 1, remaining - c, w);
      if (c == top) break;  // avoid u32 wrap when top == UINT32_MAX
    }
  };
  rec(rec, 0, static_cast<std::uint32_t>(n), 0.0L);
  const double result = static_cast<double>(total);
  return result < 0.0 ? 0.0 : (result > 1.0 ? 1.0 : result);
}

namespace {

struct CoveringSetup {
  std::uint64_t k;
  bool analytic;
  double fallback_prob;  // analytic mode only
  double pair_prob;
  double expected_pairs;
  JointPmf pair_law;
  TypicalWindow window;
  std::size_t q2;
  Pmf m1, m2;
};

CoveringSetup covering_setup(const AuxScheme& scheme, std::size_t n, double rco,
                             double epsilon, CoveringMode mode,
                             std::uint64_t scan_cap) {
  CoveringSetup s{.k = count_from_rate(n, rco),
                  .analytic = false,
                  .fallback_prob = 0.0,
                  .pair_prob = 0.0,
                  .expected_pairs = 0.0,
                  .pair_law = scheme.v1v2_marginal(),
                  .window = {},
                  .q2 = 0,
                  .m1 = scheme.v1_marginal(),
                  .m2 = scheme.v2_marginal()};
  s.window = TypicalWindow(s.pair_law, n, epsilon);
  s.q2 = s.pair_law.axis(1).size();
  s.pair_prob = pair_typical_prob_exact(s.pair_law, n, epsilon);
  const long double pairs = static_cast<long double>(s.k) * s.k;
  s.expected_pairs = static_cast<double>(pairs * s.pair_prob);

  const long double scan_cost = pairs * n;
  const bool must_analytic = scan_cost > static_cast<long double>(scan_cap);
  switch (mode) {
    case CoveringMode::kExplicit:
      if (must_analytic) {
        throw CapExceeded("covering: k^2 n exceeds the explicit scan cap");
      }
      break;
    case CoveringMode::kAnalytic:
      s.analytic = true;
      break;
    case CoveringMode::kAuto:
      s.analytic = must_analytic;
      break;
  }
  if (s.analytic) {
    // Typical-pair count treated as Poisson with its exact mean.
    s.fallback_prob = s.expected_pairs > 700.0 ? 0.0 : std::exp(-s.expected_pairs);
  }
  return s;
}

bool covering_encoding_fails(const CoveringSetup& s, std::size_t n, RngStream rng) {
  const CumulativeSampler sm1(s.m1.mass());
  const CumulativeSampler sm2(s.m2.mass());
  std::vector<Sequence> bank1(s.k, Sequence(n));
  std::vector<Sequence> bank2(s.k, Sequence(n));
  for (auto& w : bank1) {
    for (auto& c : w) c = static_cast<std::uint8_t>(sm1.sample(rng));
  }
  for (auto& w : bank2) {
    for (auto& c : w) c = static_cast<std::uint8_t>(sm2.sample(rng));
  }
  for (const auto& w1 : bank1) {
    for (const auto& w2 : bank2) {
      if (pair_typical(w1, w2, s.window, s.q2)) return false;
    }
  }
  return true;
}

CoveringEstimate covering_finalize(const CoveringSetup& s, std::uint64_t encodings,
                                   std::uint64_t failures) {
  CoveringEstimate e;
  e.encodings = encodings;
  e.k = s.k;
  e.pair_typical_prob = s.pair_prob;
  e.expected_typical_pairs = s.expected_pairs;
  e.mode_used = s.analytic ? CoveringMode::kAnalytic : CoveringMode::kExplicit;
  e.fallback_fraction =
      static_cast<double>(failures) / static_cast<double>(encodings);
  e.ci_halfwidth = 1.96 * std::sqrt(e.fallback_fraction *
                                    (1.0 - e.fallback_fraction) /
                                    static_cast<double>(encodings));
  return e;
}

}  // namespace

CoveringEstimate estimate_covering_fallback(const AuxScheme& scheme, std::size_t n,
                                            double rco, double epsilon,
                                            std::uint64_t encodings,
                                            std::uint64_t seed, CoveringMode mode,
                                            std::uint64_t scan_cap) {
  if (encodings == 0) {
    throw std::invalid_argument("covering: encodings must be >= 1");
  }
  const CoveringSetup s = covering_setup(scheme, n, rco, epsilon, mode, scan_cap);
  const RngStream root(seed);
  std::vector<std::uint8_t> fail(encodings, 0);
  parallel_for_chunks(encodings, [&](std::size_t t) {
    RngStream rng = root.derive(0xc0fe, t);
    if (s.analytic) {
      fail[t] = rng.uniform() < s.fallback_prob ? 1 : 0;
    } else {
      fail[t] = covering_encoding_fails(s, n, rng) ? 1 : 0;
    }
  });
  std::uint64_t failures = 0;
  for (auto f : fail) failures += f;
  return covering_finalize(s, encodings, failures);
}

CoveringEstimate estimate_covering_fallback_serial(
    const AuxScheme& scheme, std::size_t n, double rco, double epsilon,
    std::uint64_t encodings, std::uint64_t seed, CoveringMode mode,
    std::uint64_t scan_cap) {
  if (encodings == 0) {
    throw std::invalid_argument("covering: encodings must be >= 1");
  }
  const CoveringSetup s = covering_setup(scheme, n, rco, epsilon, mode, scan_cap);
  const RngStream root(seed);
  std::uint64_t failures = 0;
  for (std::uint64_t t = 0; t < encodings; ++t) {
    RngStream rng = root.derive(0xc0fe, t);
    const bool f = s.analytic ? rng.uniform() < s.fallback_prob
                              : covering_encoding_fails(s, n, rng);
    failures += f ? 1 : 0;
  }
  return covering_finalize(s, encodings, failures);
}

}  // namespace secbc
