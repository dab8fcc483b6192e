#include "secbc/pmf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secbc {
namespace detail {

std::vector<std::size_t> make_strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

void validate_mass(const std::vector<double>& mass, const std::string& what) {
  double sum = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) {
      throw std::invalid_argument(what + ": negative or NaN mass entry");
    }
    sum += m;
  }
  if (std::fabs(sum - 1.0) > kMassTol * static_cast<double>(std::max<std::size_t>(
                                            mass.size(), std::size_t{1}))) {
    throw std::invalid_argument(what + ": mass sums to " + std::to_string(sum) +
                                ", not 1");
  }
}

}  // namespace detail

Pmf::Pmf(Alphabet alphabet, std::vector<double> mass)
    : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
  if (mass_.size() != alphabet_.size()) {
    throw std::invalid_argument("pmf over '" + alphabet_.name() +
                                "': mass length != alphabet size");
  }
  detail::validate_mass(mass_, "pmf over '" + alphabet_.name() + "'");
}

double Pmf::min_positive() const {
  double best = std::numeric_limits<double>::infinity();
  for (double m : mass_) {
    if (m > 0.0 && m < best) best = m;
  }
  if (!std::isfinite(best)) {
    throw std::logic_error("pmf has no positive mass");
  }
  return best;
}

JointPmf::JointPmf(std::vector<Alphabet> axes, std::vector<double> mass)
    : axes_(std::move(axes)), mass_(std::move(mass)) {
  if (axes_.empty()) throw std::invalid_argument("joint pmf needs >= 1 axis");
  dims_.reserve(axes_.size());
  std::size_t cells = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    for (std::size_t j = i + 1; j < axes_.size(); ++j) {
      if (axes_[i].name() == axes_[j].name()) {
        throw std::invalid_argument("joint pmf repeats axis '" + axes_[i].name() +
                                    "'");
      }
    }
    dims_.push_back(axes_[i].size());
    cells *= axes_[i].size();
  }
  if (mass_.size() != cells) {
    throw std::invalid_argument("joint pmf: mass length != product of axis sizes");
  }
  strides_ = detail::make_strides(dims_);
  detail::validate_mass(mass_, "joint pmf");
}

std::size_t JointPmf::axis_index(std::string_view name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name() == name) return i;
  }
  throw std::out_of_range("joint pmf has no axis '" + std::string(name) + "'");
}

bool JointPmf::has_axis(std::string_view name) const {
  for (const auto& a : axes_) {
    if (a.name() == name) return true;
  }
  return false;
}

JointPmf JointPmf::marginal(const std::vector<std::string>& keep) const {
  if (keep.empty()) throw std::invalid_argument("marginal needs >= 1 axis");
  std::vector<std::size_t> keep_idx;
  std::vector<Alphabet> keep_axes;
  keep_idx.reserve(keep.size());
  for (const auto& name : keep) {
    keep_idx.push_back(axis_index(name));
    keep_axes.push_back(axes_[keep_idx.back()]);
  }
  std::vector<std::size_t> out_dims;
  for (std::size_t k : keep_idx) out_dims.push_back(dims_[k]);
  const auto out_strides = detail::make_strides(out_dims);

  std::size_t out_cells = 1;
  for (std::size_t d : out_dims) out_cells *= d;
  std::vector<double> out_mass(out_cells, 0.0);

  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t f = 0; f < mass_.size(); ++f) {
    detail::unravel(f, dims_, idx);
    std::size_t of = 0;
    for (std::size_t k = 0; k < keep_idx.size(); ++k) {
      of += idx[keep_idx[k]] * out_strides[k];
    }
    out_mass[of] += mass_[f];
  }
  return JointPmf(std::move(keep_axes), std::move(out_mass));
}

Pmf JointPmf::marginal_pmf(std::string_view name) const {
  JointPmf m = marginal({std::string(name)});
  return Pmf(m.axis(0), m.mass());
}

CondPmf JointPmf::conditional(const std::vector<std::string>& given,
                              const std::vector<std::string>& out,
                              ZeroRowPolicy policy) const {
  std::vector<std::string> order = given;
  order.insert(order.end(), out.begin(), out.end());
  const JointPmf perm = marginal(order);
  std::vector<Alphabet> gaxes, oaxes;
  for (std::size_t i = 0; i < given.size(); ++i) gaxes.push_back(perm.axis(i));
  for (std::size_t i = given.size(); i < perm.axis_count(); ++i) {
    oaxes.push_back(perm.axis(i));
  }
  std::size_t out_cells = 1;
  for (const auto& a : oaxes) out_cells *= a.size();
  std::size_t given_cells = perm.cell_count() / out_cells;

  std::vector<double> table(perm.mass());
  for (std::size_t g = 0; g < given_cells; ++g) {
    double row_sum = 0.0;
    for (std::size_t o = 0; o < out_cells; ++o) row_sum += table[g * out_cells + o];
    if (row_sum <= 0.0) {
      if (policy == ZeroRowPolicy::kThrow) {
        throw std::domain_error("conditional: zero-probability conditioning tuple");
      }
      const double u = 1.0 / static_cast<double>(out_cells);
      for (std::size_t o = 0; o < out_cells; ++o) table[g * out_cells + o] = u;
    } else {
      for (std::size_t o = 0; o < out_cells; ++o) table[g * out_cells + o] /= row_sum;
    }
  }
  return CondPmf(std::move(gaxes), std::move(oaxes), std::move(table));
}

JointPmf JointPmf::compose(const CondPmf& cond) const {
  // Locate the conditioning axes inside this joint by name.
  std::vector<std::size_t> gpos;
  gpos.reserve(cond.given_axes().size());
  for (const auto& a : cond.given_axes()) {
    std::size_t i = axis_index(a.name());
    if (axes_[i] != a) {
      throw std::invalid_argument("compose: axis '" + a.name() +
                                  "' differs between joint and conditional");
    }
    gpos.push_back(i);
  }
  std::vector<Alphabet> new_axes = axes_;
  for (const auto& a : cond.out_axes()) new_axes.push_back(a);

  const std::size_t out_cells = cond.out_cells();
  std::vector<double> out_mass(mass_.size() * out_cells);
  std::vector<std::size_t> idx(axes_.size());
  std::vector<std::size_t> gidx(gpos.size());
  for (std::size_t f = 0; f < mass_.size(); ++f) {
    detail::unravel(f, dims_, idx);
    for (std::size_t k = 0; k < gpos.size(); ++k) gidx[k] = idx[gpos[k]];
    const std::size_t g = cond.given_ravel(gidx);
    const auto row = cond.row(g);
    const double base = mass_[f];
    double* dst = out_mass.data() + f * out_cells;
    for (std::size_t o = 0; o < out_cells; ++o) dst[o] = base * row[o];
  }
  return JointPmf(std::move(new_axes), std::move(out_mass));
}

JointPmf JointPmf::outer(const JointPmf& a, const JointPmf& b) {
  std::vector<Alphabet> axes = a.axes();
  for (const auto& ax : b.axes()) axes.push_back(ax);
  std::vector<double> mass(a.cell_count() * b.cell_count());
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    for (std::size_t j = 0; j < b.cell_count(); ++j) {
      mass[i * b.cell_count() + j] = a.flat(i) * b.flat(j);
    }
  }
  return JointPmf(std::move(axes), std::move(mass));
}

JointPmf JointPmf::from_pmf(const Pmf& p) {
  return JointPmf({p.alphabet()}, p.mass());
}

CondPmf::CondPmf(std::vector<Alphabet> given_axes, std::vector<Alphabet> out_axes,
                 std::vector<double> table)
    : given_(std::move(given_axes)), out_(std::move(out_axes)), table_(std::move(table)) {
  if (out_.empty()) throw std::invalid_argument("cond pmf needs >= 1 out axis");
  given_cells_ = 1;
  for (const auto& a : given_) {
    given_dims_.push_back(a.size());
    given_cells_ *= a.size();
  }
  out_cells_ = 1;
  for (const auto& a : out_) {
    out_dims_.push_back(a.size());
    out_cells_ *= a.size();
  }
  given_strides_ = detail::make_strides(given_dims_);
  out_strides_ = detail::make_strides(out_dims_);
  if (table_.size() != given_cells_ * out_cells_) {
    throw std::invalid_argument("cond pmf: table size mismatch");
  }
  for (std::size_t g = 0; g < given_cells_; ++g) {
    double sum = 0.0;
    for (std::size_t o = 0; o < out_cells_; ++o) {
      const double v = table_[g * out_cells_ + o];
      if (!(v >= 0.0)) {
        throw std::invalid_argument("cond pmf: negative or NaN entry");
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) >
        kMassTol * static_cast<double>(std::max<std::size_t>(out_cells_, 1))) {
      throw std::invalid_argument("cond pmf: row " + std::to_string(g) +
                                  " sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

double CondPmf::value(std::span<const std::size_t> given_idx,
                      std::span<const std::size_t> out_idx) const {
  return value(given_ravel(given_idx), out_ravel(out_idx));
}

double CondPmf::min_positive() const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : table_) {
    if (v > 0.0 && v < best) best = v;
  }
  if (!std::isfinite(best)) throw std::logic_error("cond pmf has no positive entry");
  return best;
}

CondPmf CondPmf::deterministic(std::vector<Alphabet> given_axes,
                               std::vector<Alphabet> out_axes,
                               const std::vector<std::size_t>& out_flat_map) {
  std::size_t gcells = 1, ocells = 1;
  for (const auto& a : given_axes) gcells *= a.size();
  for (const auto& a : out_axes) ocells *= a.size();
  if (out_flat_map.size() != gcells) {
    throw std::invalid_argument("deterministic map: wrong number of rows");
  }
  std::vector<double> table(gcells * ocells, 0.0);
  for (std::size_t g = 0; g < gcells; ++g) {
    if (out_flat_map[g] >= ocells) {
      throw std::invalid_argument("deterministic map: out index out of range");
    }
    table[g * ocells + out_flat_map[g]] = 1.0;
  }
  return CondPmf(std::move(given_axes), std::move(out_axes), std::move(table));
}

JointPmf compose(const Pmf& base, const CondPmf& cond) {
  return JointPmf::from_pmf(base).compose(cond);
}

}  // namespace secbc
