#include "secbc/typicality.hpp"

#include <cmath>
#include <stdexcept>

#include "secbc/channel.hpp"
#include "secbc/errors.hpp"
#include "secbc/info.hpp"
#include "secbc/parallel.hpp"

namespace secbc {

JointPmf EmpiricalType::normalized() const {
  std::vector<double> mass(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mass[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return JointPmf(axes, std::move(mass));
}

EmpiricalType empirical_type(const std::vector<const Sequence*>& sequences,
                             const std::vector<Alphabet>& axes) {
  if (sequences.empty() || sequences.size() != axes.size()) {
    throw std::invalid_argument("empirical type: one sequence per axis required");
  }
  const std::size_t n = sequences[0]->size();
  for (const Sequence* s : sequences) {
    if (s->size() != n) {
      throw std::invalid_argument("empirical type: sequence length mismatch");
    }
  }
  std::vector<std::size_t> dims;
  std::size_t cells = 1;
  for (const auto& a : axes) {
    dims.push_back(a.size());
    cells *= a.size();
  }
  const auto strides = detail::make_strides(dims);
  EmpiricalType type{axes, std::vector<std::uint32_t>(cells, 0), n};
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < sequences.size(); ++k) {
      const std::size_t sym = (*sequences[k])[i];
      if (sym >= dims[k]) {
        throw std::out_of_range("empirical type: symbol outside axis alphabet");
      }
      flat += sym * strides[k];
    }
    type.counts[flat] += 1;
  }
  return type;
}

TypicalityParams::TypicalityParams(double eps, JointPmf ref)
    : epsilon(eps), reference(std::move(ref)) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("typicality: epsilon must lie in (0, 1/2)");
  }
}

TypicalWindow::TypicalWindow(const JointPmf& reference, std::size_t n,
                             double epsilon) {
  dims_ = reference.dims();
  lo_.resize(reference.cell_count());
  hi_.resize(reference.cell_count());
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < reference.cell_count(); ++i) {
    const double target = nn * reference.flat(i);
    // Tiny slack absorbs roundoff; zero-probability cells pin the count to 0.
    lo_[i] = target * (1.0 - epsilon) - 1e-9;
    hi_[i] = target * (1.0 + epsilon) + 1e-9;
  }
}

std::pair<std::uint32_t, std::uint32_t> TypicalWindow::cell_range(
    std::size_t flat) const {
  const double lo = std::max(0.0, std::ceil(lo_[flat]));
  const double hi = std::floor(hi_[flat]);
  if (hi < lo) return {1, 0};  // empty
  return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)};
}

bool is_eps_typical(const std::vector<const Sequence*>& sequences,
                    const TypicalityParams& params) {
  const EmpiricalType type = empirical_type(sequences, params.reference.axes());
  const TypicalWindow window(params.reference, type.n, params.epsilon);
  return window.contains(type.counts);
}

bool pair_typical(const Sequence& a, const Sequence& b, const TypicalWindow& window,
                  std::size_t qb) {
  thread_local std::vector<std::uint32_t> counts;
  counts.assign(window.cell_count(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    counts[a[i] * qb + b[i]] += 1;
  }
  return window.contains(counts);
}

double default_delta(const JointPmf& joint_v1v2y2, double epsilon) {
  const double h =
      entropy(joint_v1v2y2.marginal({kAxisV2, kAxisY2})) -
      entropy(joint_v1v2y2.marginal({kAxisV2}));
  const double i = mutual_information(joint_v1v2y2, {kAxisV1}, {kAxisV2});
  const double sizes =
      static_cast<double>(joint_v1v2y2.axis(joint_v1v2y2.axis_index(kAxisY2)).size()) *
      static_cast<double>(joint_v1v2y2.axis(joint_v1v2y2.axis_index(kAxisV1)).size()) *
      static_cast<double>(joint_v1v2y2.axis(joint_v1v2y2.axis_index(kAxisV2)).size());
  return epsilon * (h + i) + 2.0 * epsilon * std::log2(sizes);
}

namespace {

struct BoundSetup {
  std::size_t qv = 0, qy = 0;
  std::vector<double> q_log2;     // log2 Q(y2|v2), -inf encoded as NaN-free flag
  std::vector<double> q_table;    // Q(y2|v2)
  TypicalWindow window;           // over (V2, Y2)
  double h_cond = 0.0;            // H(Y2|V2)
  double bound_exponent = 0.0;    // H + I + delta
  double used_delta = 0.0;
};

BoundSetup make_setup(const JointPmf& joint, std::size_t n, double epsilon,
                      std::optional<double> delta_override) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("bound check: epsilon must lie in (0, 1/2)");
  }
  BoundSetup s;
  const JointPmf pv2y2 = joint.marginal({kAxisV2, kAxisY2});
  s.qv = pv2y2.axis(0).size();
  s.qy = pv2y2.axis(1).size();
  const CondPmf q = stealth_reference(joint);
  s.q_table = q.table();
  s.q_log2.resize(s.q_table.size());
  for (std::size_t i = 0; i < s.q_table.size(); ++i) {
    s.q_log2[i] = s.q_table[i] > 0.0 ? std::log2(s.q_table[i]) : 0.0;
  }
  s.window = TypicalWindow(pv2y2, n, epsilon);
  s.h_cond = entropy(pv2y2) - entropy(joint.marginal({kAxisV2}));
  const double i12 = mutual_information(joint, {kAxisV1}, {kAxisV2});
  s.used_delta = delta_override ? *delta_override : default_delta(joint, epsilon);
  if (s.used_delta <= 0.0) {
    throw std::invalid_argument("bound check: delta must be positive");
  }
  s.bound_exponent = s.h_cond + i12 + s.used_delta;
  return s;
}

/// Processes ranks [begin, end) of the lexicographic (v2, y2) pair space and
/// accumulates into `r`. Counts-based fast path.
void scan_range(const BoundSetup& s, std::size_t n, std::uint64_t begin,
                std::uint64_t end, QnBoundReport& r) {
  const std::size_t cells = s.qv * s.qy;
  std::vector<std::uint32_t> counts(cells);
  const double nn = static_cast<double>(n);
  const double threshold = -nn * s.bound_exponent;
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    counts.assign(cells, 0);
    std::uint64_t rest = rank;
    for (std::size_t i = 0; i < n; ++i) {
      counts[rest % cells] += 1;
      rest /= cells;
    }
    r.pairs_enumerated += 1;
    if (!s.window.contains(counts)) continue;
    r.typical_pairs += 1;

    bool infinite = false;
    double direct = 0.0;        // log2 Q^n via counts
    double he_joint = 0.0;      // H of the pair type
    double divergence = 0.0;    // D(Pe_{V2Y2} || Pe_{V2} Q)
    std::vector<double> row_sum(s.qv, 0.0);
    for (std::size_t a = 0; a < s.qv; ++a) {
      for (std::size_t b = 0; b < s.qy; ++b) {
        const std::uint32_t c = counts[a * s.qy + b];
        if (c == 0) continue;
        if (s.q_table[a * s.qy + b] <= 0.0) {
          infinite = true;
          break;
        }
        direct += static_cast<double>(c) * s.q_log2[a * s.qy + b];
        const double pe = static_cast<double>(c) / nn;
        he_joint -= pe * std::log2(pe);
        row_sum[a] += pe;
      }
      if (infinite) break;
    }
    if (infinite) {
      r.infinite_divergences += 1;
      r.violations += 1;
      if (!r.first_violation_rank) r.first_violation_rank = rank;
      continue;
    }
    double he_v2 = 0.0;
    for (std::size_t a = 0; a < s.qv; ++a) {
      if (row_sum[a] > 0.0) he_v2 -= row_sum[a] * std::log2(row_sum[a]);
    }
    for (std::size_t a = 0; a < s.qv; ++a) {
      if (row_sum[a] <= 0.0) continue;
      for (std::size_t b = 0; b < s.qy; ++b) {
        const std::uint32_t c = counts[a * s.qy + b];
        if (c == 0) continue;
        const double pe = static_cast<double>(c) / nn;
        divergence += pe * std::log2(pe / (row_sum[a] * s.q_table[a * s.qy + b]));
      }
    }
    const double type_form = -nn * (he_joint - he_v2 + divergence);
    const double rel_err = std::fabs(std::exp2(type_form - direct) - 1.0);
    if (rel_err > r.max_type_identity_rel_err) r.max_type_identity_rel_err = rel_err;

    const double gap = std::fabs(he_joint - he_v2 - s.h_cond);
    if (gap > r.max_entropy_gap) r.max_entropy_gap = gap;

    const double margin = direct - threshold;
    if (r.typical_pairs == 1 || margin < r.min_margin_log2) {
      r.min_margin_log2 = margin;
    }
    if (margin < -1e-9) {
      r.violations += 1;
      if (!r.first_violation_rank) r.first_violation_rank = rank;
    }
  }
}

void merge_into(QnBoundReport& total, const QnBoundReport& part, bool& have_margin) {
  total.pairs_enumerated += part.pairs_enumerated;
  total.violations += part.violations;
  total.infinite_divergences += part.infinite_divergences;
  if (part.typical_pairs > 0) {
    if (!have_margin || part.min_margin_log2 < total.min_margin_log2) {
      total.min_margin_log2 = part.min_margin_log2;
    }
    have_margin = true;
  }
  total.typical_pairs += part.typical_pairs;
  if (part.max_type_identity_rel_err > total.max_type_identity_rel_err) {
    total.max_type_identity_rel_err = part.max_type_identity_rel_err;
  }
  if (part.max_entropy_gap > total.max_entropy_gap) {
    total.max_entropy_gap = part.max_entropy_gap;
  }
  if (part.first_violation_rank &&
      (!total.first_violation_rank ||
       *part.first_violation_rank < *total.first_violation_rank)) {
    total.first_violation_rank = part.first_violation_rank;
  }
}

std::uint64_t checked_pair_count(const BoundSetup& s, std::size_t n,
                                 std::uint64_t pair_cap) {
  const double total = std::pow(static_cast<double>(s.qv * s.qy),
                                static_cast<double>(n));
  if (total > static_cast<double>(pair_cap)) {
    throw CapExceeded("bound check: |V2|^n |Y2|^n = " + std::to_string(total) +
                      " exceeds cap " + std::to_string(pair_cap));
  }
  return SequenceCounter::count(s.qv * s.qy, n);
}

}  // namespace

QnBoundReport qn_lower_bound_check(const JointPmf& joint, std::size_t n,
                                   double epsilon,
                                   std::optional<double> delta_override,
                                   std::uint64_t pair_cap) {
  const BoundSetup s = make_setup(joint, n, epsilon, delta_override);
  const std::uint64_t total = checked_pair_count(s, n, pair_cap);

  const std::size_t chunks =
      static_cast<std::size_t>(std::min<std::uint64_t>(total, 128));
  std::vector<QnBoundReport> parts(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t begin = total * c / chunks;
    const std::uint64_t end = total * (c + 1) / chunks;
    scan_range(s, n, begin, end, parts[c]);
  });

  QnBoundReport r;
  r.used_delta = s.used_delta;
  r.bound_exponent = s.bound_exponent;
  bool have_margin = false;
  for (const auto& part : parts) merge_into(r, part, have_margin);
  return r;
}

QnBoundReport qn_lower_bound_check_serial(const JointPmf& joint, std::size_t n,
                                          double epsilon,
                                          std::optional<double> delta_override,
                                          std::uint64_t pair_cap) {
  // Reference path: walks actual sequences and multiplies per-letter masses,
  // instead of the counts-based kernel above.
  const BoundSetup s = make_setup(joint, n, epsilon, delta_override);
  checked_pair_count(s, n, pair_cap);

  QnBoundReport r;
  r.used_delta = s.used_delta;
  r.bound_exponent = s.bound_exponent;
  const double threshold = -static_cast<double>(n) * s.bound_exponent;

  const JointPmf pv2y2 = joint.marginal({kAxisV2, kAxisY2});
  const Alphabet& av = pv2y2.axis(0);
  const Alphabet& ay = pv2y2.axis(1);

  std::uint64_t rank = 0;
  bool have_margin = false;
  for (SequenceCounter ctr(s.qv * s.qy, n); !ctr.done(); ctr.advance(), ++rank) {
    r.pairs_enumerated += 1;
    Sequence v2(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      v2[i] = static_cast<std::uint8_t>(ctr.value()[i] / s.qy);
      y2[i] = static_cast<std::uint8_t>(ctr.value()[i] % s.qy);
    }
    const EmpiricalType type = empirical_type({&v2, &y2}, {av, ay});
    if (!s.window.contains(type.counts)) continue;
    r.typical_pairs += 1;

    bool infinite = false;
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = s.q_table[v2[i] * s.qy + y2[i]];
      if (q <= 0.0) {
        infinite = true;
        break;
      }
      direct += std::log2(q);
    }
    if (infinite) {
      r.infinite_divergences += 1;
      r.violations += 1;
      if (!r.first_violation_rank) r.first_violation_rank = rank;
      continue;
    }

    const JointPmf pe = type.normalized();
    const double he_joint = entropy(pe);
    const Pmf pe_v2 = pe.marginal_pmf(kAxisV2);
    const double he_v2 = entropy(pe_v2);
    double divergence = 0.0;
    for (std::size_t a = 0; a < s.qv; ++a) {
      for (std::size_t b = 0; b < s.qy; ++b) {
        const double p = pe.flat(a * s.qy + b);
        if (p > 0.0) {
          divergence += p * std::log2(p / (pe_v2[a] * s.q_table[a * s.qy + b]));
        }
      }
    }
    const double type_form =
        -static_cast<double>(n) * (he_joint - he_v2 + divergence);
    const double rel_err = std::fabs(std::exp2(type_form - direct) - 1.0);
    if (rel_err > r.max_type_identity_rel_err) r.max_type_identity_rel_err = rel_err;
    const double gap = std::fabs(he_joint - he_v2 - s.h_cond);
    if (gap > r.max_entropy_gap) r.max_entropy_gap = gap;

    const double margin = direct - threshold;
    if (!have_margin || margin < r.min_margin_log2) {
      r.min_margin_log2 = margin;
      have_margin = true;
    }
    if (margin < -1e-9) {
      r.violations += 1;
      if (!r.first_violation_rank) r.first_violation_rank = rank;
    }
  }
  return r;
}

}  // namespace secbc
