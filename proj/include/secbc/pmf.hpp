#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secbc/alphabet.hpp"

namespace secbc {

/// Normalization tolerance for exact probability tables.
inline constexpr double kMassTol = 1e-12;

namespace detail {

std::vector<std::size_t> make_strides(const std::vector<std::size_t>& dims);

inline std::size_t ravel(std::span<const std::size_t> idx,
                         std::span<const std::size_t> strides) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) flat += idx[i] * strides[i];
  return flat;
}

inline void unravel(std::size_t flat, std::span<const std::size_t> dims,
                    std::span<std::size_t> out) {
  for (std::size_t i = dims.size(); i-- > 0;) {
    out[i] = flat % dims[i];
    flat /= dims[i];
  }
}

void validate_mass(const std::vector<double>& mass, const std::string& what);

}  // namespace detail

class CondPmf;

/// Probability mass function over one finite alphabet.
class Pmf {
 public:
  Pmf() = default;
  Pmf(Alphabet alphabet, std::vector<double> mass);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return mass_.size(); }
  const std::vector<double>& mass() const { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }

  /// Lookup by symbol label; unknown symbols are rejected.
  double prob(std::string_view symbol) const {
    return mass_[alphabet_.index_of(symbol)];
  }

  /// Smallest strictly positive mass.
  double min_positive() const;

 private:
  Alphabet alphabet_;
  std::vector<double> mass_;
};

/// Dense joint probability table over an ordered list of named axes.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<Alphabet> axes, std::vector<double> mass);

  std::size_t axis_count() const { return axes_.size(); }
  const std::vector<Alphabet>& axes() const { return axes_; }
  const Alphabet& axis(std::size_t i) const { return axes_.at(i); }
  std::size_t axis_index(std::string_view name) const;
  bool has_axis(std::string_view name) const;

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t cell_count() const { return mass_.size(); }
  const std::vector<double>& mass() const { return mass_; }

  double flat(std::size_t i) const { return mass_[i]; }
  double at(std::span<const std::size_t> idx) const {
    return mass_[detail::ravel(idx, strides_)];
  }
  double at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Marginal over the named axes, in the order given. A full-length list
  /// acts as an axis permutation.
  JointPmf marginal(const std::vector<std::string>& keep) const;
  Pmf marginal_pmf(std::string_view name) const;

  enum class ZeroRowPolicy { kUniform, kThrow };

  /// Conditional table P(out | given). Rows whose conditioning tuple has zero
  /// probability are filled uniformly under kUniform.
  CondPmf conditional(const std::vector<std::string>& given,
                      const std::vector<std::string>& out,
                      ZeroRowPolicy policy = ZeroRowPolicy::kUniform) const;

  /// Extends this joint with the conditional's output axes:
  /// P(axes, out) = P(axes) * cond(out | given), matching given axes by name.
  JointPmf compose(const CondPmf& cond) const;

  static JointPmf outer(const JointPmf& a, const JointPmf& b);
  static JointPmf from_pmf(const Pmf& p);

 private:
  std::vector<Alphabet> axes_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> mass_;
};

/// Conditional probability table: one distribution over the out axes per
/// conditioning tuple.
class CondPmf {
 public:
  CondPmf() = default;
  CondPmf(std::vector<Alphabet> given_axes, std::vector<Alphabet> out_axes,
          std::vector<double> table);

  const std::vector<Alphabet>& given_axes() const { return given_; }
  const std::vector<Alphabet>& out_axes() const { return out_; }
  std::size_t given_cells() const { return given_cells_; }
  std::size_t out_cells() const { return out_cells_; }
  const std::vector<double>& table() const { return table_; }

  std::span<const double> row(std::size_t given_flat) const {
    return {table_.data() + given_flat * out_cells_, out_cells_};
  }
  double value(std::size_t given_flat, std::size_t out_flat) const {
    return table_[given_flat * out_cells_ + out_flat];
  }
  double value(std::span<const std::size_t> given_idx,
               std::span<const std::size_t> out_idx) const;

  std::size_t given_ravel(std::span<const std::size_t> idx) const {
    return detail::ravel(idx, given_strides_);
  }
  std::size_t out_ravel(std::span<const std::size_t> idx) const {
    return detail::ravel(idx, out_strides_);
  }
  const std::vector<std::size_t>& given_dims() const { return given_dims_; }
  const std::vector<std::size_t>& out_dims() const { return out_dims_; }

  /// Smallest strictly positive entry of the whole table.
  double min_positive() const;

  /// Deterministic table: out = map[given_flat].
  static CondPmf deterministic(std::vector<Alphabet> given_axes,
                               std::vector<Alphabet> out_axes,
                               const std::vector<std::size_t>& out_flat_map);

 private:
  std::vector<Alphabet> given_, out_;
  std::vector<std::size_t> given_dims_, out_dims_;
  std::vector<std::size_t> given_strides_, out_strides_;
  std::size_t given_cells_ = 0, out_cells_ = 0;
  std::vector<double> table_;
};

/// P(given axes) * P(out | given) as a joint over (given, out).
JointPmf compose(const Pmf& base, const CondPmf& cond);

}  // namespace secbc
