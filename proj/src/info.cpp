#include "secbc/info.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secbc {
namespace {

double entropy_of(const std::vector<double>& mass) {
  double h = 0.0;
  for (double p : mass) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double kl_of(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[i] * std::log2(p[i] / q[i]);
    }
  }
  return d < 0.0 && d > -1e-12 ? 0.0 : d;
}

}  // namespace

double entropy(const Pmf& p) { return entropy_of(p.mass()); }
double entropy(const JointPmf& p) { return entropy_of(p.mass()); }

double mutual_information(const JointPmf& joint, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& c) {
  auto contains = [](const std::vector<std::string>& v, const std::string& s) {
    for (const auto& x : v) {
      if (x == s) return true;
    }
    return false;
  };
  for (const auto& s : a) {
    if (contains(b, s) || contains(c, s)) {
      throw std::invalid_argument("mutual_information: overlapping axis sets");
    }
  }
  for (const auto& s : b) {
    if (contains(c, s)) {
      throw std::invalid_argument("mutual_information: overlapping axis sets");
    }
  }
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("mutual_information: empty axis group");
  }

  // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C).
  std::vector<std::string> ac = a, bc = b, abc = a;
  ac.insert(ac.end(), c.begin(), c.end());
  bc.insert(bc.end(), c.begin(), c.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());

  double value = entropy(joint.marginal(ac)) + entropy(joint.marginal(bc)) -
                 entropy(joint.marginal(abc));
  if (!c.empty()) value -= entropy(joint.marginal(c));

  if (value < 0.0) {
    if (value < -1e-6) {
      throw std::logic_error("mutual_information: negative beyond tolerance");
    }
    value = 0.0;
  }
  return value;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) {
    throw std::invalid_argument("kl_divergence: mismatched alphabets");
  }
  return kl_of(p.mass(), q.mass());
}

double kl_divergence(const JointPmf& p, const JointPmf& q) {
  if (p.axis_count() != q.axis_count()) {
    throw std::invalid_argument("kl_divergence: mismatched axes");
  }
  for (std::size_t i = 0; i < p.axis_count(); ++i) {
    if (p.axis(i) != q.axis(i)) {
      throw std::invalid_argument("kl_divergence: mismatched axes");
    }
  }
  return kl_of(p.mass(), q.mass());
}

double kl_min_mass_bound(const Pmf& q) { return std::log2(1.0 / q.min_positive()); }

double conditional_kl(const Pmf& base, const CondPmf& p, const CondPmf& q) {
  if (p.given_cells() != q.given_cells() || p.out_cells() != q.out_cells() ||
      base.size() != p.given_cells()) {
    throw std::invalid_argument("conditional_kl: shape mismatch");
  }
  double d = 0.0;
  for (std::size_t g = 0; g < p.given_cells(); ++g) {
    const double w = base[g];
    if (w <= 0.0) continue;
    const auto pr = p.row(g);
    const auto qr = q.row(g);
    for (std::size_t o = 0; o < pr.size(); ++o) {
      if (pr[o] > 0.0) {
        if (qr[o] <= 0.0) return std::numeric_limits<double>::infinity();
        d += w * pr[o] * std::log2(pr[o] / qr[o]);
      }
    }
  }
  return d < 0.0 && d > -1e-12 ? 0.0 : d;
}

}  // namespace secbc
