#include "secbc/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secbc {

SequenceLaw::SequenceLaw(Pmf base, std::size_t n) : base_(std::move(base)), n_(n) {
  if (n_ == 0) throw std::invalid_argument("sequence law: n must be >= 1");
  row_samplers_.emplace_back(std::get<Pmf>(base_).mass());
}

SequenceLaw::SequenceLaw(CondPmf base, std::size_t n) : base_(std::move(base)), n_(n) {
  if (n_ == 0) throw std::invalid_argument("sequence law: n must be >= 1");
  const CondPmf& c = std::get<CondPmf>(base_);
  row_samplers_.reserve(c.given_cells());
  for (std::size_t g = 0; g < c.given_cells(); ++g) {
    row_samplers_.emplace_back(c.row(g));
  }
}

namespace {

double log2_or_neg_inf(double p) {
  return p > 0.0 ? std::log2(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace

double SequenceLaw::log2_prob(const Sequence& seq) const {
  if (conditional()) {
    throw std::logic_error("sequence law: conditional law needs conditioning");
  }
  if (seq.size() != n_) throw std::invalid_argument("sequence law: length mismatch");
  const Pmf& p = base_pmf();
  double lp = 0.0;
  for (std::uint8_t s : seq) lp += log2_or_neg_inf(p[s]);
  return lp;
}

double SequenceLaw::log2_prob(const Sequence& out,
                              const std::vector<const Sequence*>& given) const {
  if (!conditional()) {
    if (!given.empty()) {
      throw std::logic_error("sequence law: unconditional law takes no conditioning");
    }
    return log2_prob(out);
  }
  const CondPmf& c = base_cond();
  if (given.size() != c.given_axes().size()) {
    throw std::invalid_argument("sequence law: wrong number of conditioning sequences");
  }
  if (out.size() != n_) throw std::invalid_argument("sequence law: length mismatch");
  for (const Sequence* g : given) {
    if (g->size() != n_) {
      throw std::invalid_argument("sequence law: conditioning length mismatch");
    }
  }
  std::vector<std::size_t> gidx(given.size());
  double lp = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < given.size(); ++k) gidx[k] = (*given[k])[i];
    lp += log2_or_neg_inf(c.value(c.given_ravel(gidx), out[i]));
  }
  return lp;
}

Sequence SequenceLaw::sample(RngStream& rng) const {
  if (conditional()) {
    throw std::logic_error("sequence law: conditional law needs conditioning");
  }
  Sequence s(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    s[i] = static_cast<std::uint8_t>(row_samplers_[0].sample(rng));
  }
  return s;
}

Sequence SequenceLaw::sample(const std::vector<const Sequence*>& given,
                             RngStream& rng) const {
  if (!conditional()) {
    if (!given.empty()) {
      throw std::logic_error("sequence law: unconditional law takes no conditioning");
    }
    return sample(rng);
  }
  const CondPmf& c = base_cond();
  if (given.size() != c.given_axes().size()) {
    throw std::invalid_argument("sequence law: wrong number of conditioning sequences");
  }
  for (const Sequence* g : given) {
    if (g->size() != n_) {
      throw std::invalid_argument("sequence law: conditioning length mismatch");
    }
  }
  Sequence s(n_);
  std::vector<std::size_t> gidx(given.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < given.size(); ++k) gidx[k] = (*given[k])[i];
    s[i] = static_cast<std::uint8_t>(row_samplers_[c.given_ravel(gidx)].sample(rng));
  }
  return s;
}

Sequence representative_sequence(const Pmf& p, std::size_t n) {
  const std::size_t q = p.size();
  std::vector<std::size_t> counts(q, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t a = 0; a < q; ++a) {
    const double target = p[a] * static_cast<double>(n);
    counts[a] = static_cast<std::size_t>(std::floor(target));
    assigned += counts[a];
    remainders.push_back({target - std::floor(target), a});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    counts[remainders[i % q].second] += 1;
  }
  Sequence s;
  s.reserve(n);
  for (std::size_t a = 0; a < q; ++a) {
    s.insert(s.end(), counts[a], static_cast<std::uint8_t>(a));
  }
  return s;
}

}  // namespace secbc
