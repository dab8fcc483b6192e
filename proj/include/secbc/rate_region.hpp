#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secbc/channel.hpp"
#include "secbc/pmf.hpp"

namespace secbc {

/// One operating point of the coding scheme: message rates, randomization
/// rates, and the covering rate, all in bits per channel use.
struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
  double r1p = 0.0;
  double r2p = 0.0;
  double rco = 0.0;
};

/// The two achievable-rate upper bounds for a given induced joint, clamped
/// at zero:
///   r1 <= I(V1;Y1|U) - I(V1;Y2|V2,U) - I(V1;V2|U)
///   r2 <= I(V2;Y2|U) - I(V2;Y1|V1,U) - I(V1;V2|U)
struct RateBounds {
  double r1_max = 0.0;
  double r2_max = 0.0;
};

RateBounds achievable_rates(const JointPmf& joint);

/// Slack of every constraint the random-coding construction needs. Positive
/// slack on all rows means the point is inside the region.
struct RegionReport {
  double covering = 0.0;     // rco - I(V1;V2)
  double packing1 = 0.0;     // I(V1;Y1) - (r1 + r1p + rco)
  double packing2 = 0.0;     // I(V2;Y2) - (r2 + r2p + rco)
  double reduced1 = 0.0;     // I(V1;Y1) - I(V1;V2) - (r1 + r1p)
  double reduced2 = 0.0;     // I(V2;Y2) - I(V1;V2) - (r2 + r2p)
  double secrecy1 = 0.0;     // r1p - I(Y2;V1|V2)
  double secrecy2 = 0.0;     // r2p - I(Y1;V2|V1)
  bool feasible = false;
  std::string violated;      // name of the first violated constraint, if any

  double min_slack() const;
};

RegionReport code_rate_constraints(const JointPmf& joint, const RatePoint& point);

struct SearchConfig {
  std::size_t v1_size = 2;
  std::size_t v2_size = 2;
  std::size_t u_size = 1;
  std::size_t restarts = 200;
  std::size_t refine_sweeps = 4;
  double margin = 0.01;  // slack left on every active constraint
  std::uint64_t seed = 1;
};

struct SchemePoint {
  AuxScheme scheme;
  RatePoint point;
  RateBounds bounds;
  RegionReport report;
};

/// Keeps the points not dominated on (r1, r2); ties collapse to the first.
std::vector<SchemePoint> pareto_filter(std::vector<SchemePoint> points);

/// Random-restart search over (vjoint, xmap) with greedy coordinate
/// refinement and shrinking steps; every returned point re-validates with
/// positive slack. Deterministic in the seed; restarts run in parallel.
std::vector<SchemePoint> optimize_region(const BroadcastChannel& ch,
                                         const SearchConfig& cfg);

/// Single-threaded reference implementation (kept for testing).
std::vector<SchemePoint> optimize_region_serial(const BroadcastChannel& ch,
                                                const SearchConfig& cfg);

}  // namespace secbc
