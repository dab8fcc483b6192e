#pragma once

#include <string>
#include <vector>

#include "secbc/pmf.hpp"

namespace secbc {

// Canonical axis names used by every induced joint.
inline constexpr const char* kAxisU = "U";
inline constexpr const char* kAxisV1 = "V1";
inline constexpr const char* kAxisV2 = "V2";
inline constexpr const char* kAxisX = "X";
inline constexpr const char* kAxisY1 = "Y1";
inline constexpr const char* kAxisY2 = "Y2";

/// Two-receiver discrete memoryless broadcast channel P(y1, y2 | x).
class BroadcastChannel {
 public:
  BroadcastChannel() = default;
  BroadcastChannel(Alphabet input, Alphabet out1, Alphabet out2, CondPmf law);

  const Alphabet& input() const { return input_; }
  const Alphabet& out1() const { return out1_; }
  const Alphabet& out2() const { return out2_; }
  const CondPmf& law() const { return law_; }

  /// Per-receiver marginal channel P(y_t | x).
  CondPmf marginal_to(int receiver) const;

 private:
  Alphabet input_, out1_, out2_;
  CondPmf law_;
};

/// Auxiliary-variable scheme: a joint over (U optional, V1, V2) plus the
/// symbol channel P(x | v1, v2). Deterministic symbol maps are 0/1 rows.
class AuxScheme {
 public:
  AuxScheme() = default;
  AuxScheme(JointPmf vjoint, CondPmf xmap);

  /// Always carries a U axis; schemes given without one get a singleton U.
  const JointPmf& vjoint() const { return vjoint_; }
  const CondPmf& xmap() const { return xmap_; }

  Pmf v1_marginal() const { return vjoint_.marginal_pmf(kAxisV1); }
  Pmf v2_marginal() const { return vjoint_.marginal_pmf(kAxisV2); }
  JointPmf v1v2_marginal() const {
    return vjoint_.marginal({kAxisV1, kAxisV2});
  }

 private:
  JointPmf vjoint_;
  CondPmf xmap_;
};

/// Full joint P(u, v1, v2, x, y1, y2) induced by a scheme on a channel.
JointPmf induced_joint(const BroadcastChannel& ch, const AuxScheme& aux);

struct MarkovResiduals {
  double aux_to_x;       // I(U; X | V1, V2)
  double channel_input;  // I(V1, V2, U; Y1, Y2 | X)
};

/// Conditional-independence residuals of the chain U - (V1,V2) - X - (Y1,Y2).
MarkovResiduals markov_residuals(const JointPmf& joint);

/// Reference output law an observer expects when no meaningful message rides
/// on V1: Q(y2 | v2) = sum_v1 P_V1(v1) P(y2 | v1, v2). The mixture weight is
/// the V1 marginal, not P(v1 | v2).
///
/// This overload reads P(y2 | v1, v2) off the joint; conditioning tuples with
/// zero probability fall back to uniform rows.
CondPmf stealth_reference(const JointPmf& joint);

/// Channel-exact variant: P(y2 | v1, v2) comes from xmap composed with the
/// channel, so it is defined for every (v1, v2) pair.
CondPmf stealth_reference(const BroadcastChannel& ch, const AuxScheme& aux);

/// Per-letter eavesdropper channel P(y2 | v1, v2) = sum_x P(x|v1,v2) P(y2|x).
CondPmf y2_letter_channel(const BroadcastChannel& ch, const AuxScheme& aux);
/// Same toward receiver 1: P(y1 | v1, v2).
CondPmf y1_letter_channel(const BroadcastChannel& ch, const AuxScheme& aux);

}  // namespace secbc
