#pragma once

#include <vector>

#include "secbc/pmf.hpp"

namespace secbc {

// All information measures are in bits (base-2 logs). 0*log(0) = 0 by
// continuity; divergence of a pair that is not absolutely continuous is the
// +infinity sentinel, never an overflow.

double entropy(const Pmf& p);
double entropy(const JointPmf& p);

/// I(A;B|C) over the named axis groups; C may be empty. Overlapping groups
/// are rejected. Tiny negative values from float cancellation are clamped
/// to zero.
double mutual_information(const JointPmf& joint, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& c = {});

double kl_divergence(const Pmf& p, const Pmf& q);
double kl_divergence(const JointPmf& p, const JointPmf& q);

/// log2(1 / min positive mass of q): an upper bound on D(p || q) for any
/// p absolutely continuous w.r.t. q.
double kl_min_mass_bound(const Pmf& q);

/// Conditional divergence D(p(.|a) || q(.|a) | base): expectation of the
/// per-row divergence under base. Rows of p with zero base weight are skipped.
double conditional_kl(const Pmf& base, const CondPmf& p, const CondPmf& q);

}  // namespace secbc
