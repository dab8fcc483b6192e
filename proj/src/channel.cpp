#include "secbc/channel.hpp"

#include <stdexcept>

#include "secbc/info.hpp"

namespace secbc {

BroadcastChannel::BroadcastChannel(Alphabet input, Alphabet out1, Alphabet out2,
                                   CondPmf law)
    : input_(std::move(input)),
      out1_(std::move(out1)),
      out2_(std::move(out2)),
      law_(std::move(law)) {
  if (law_.given_axes().size() != 1 || law_.given_axes()[0] != input_) {
    throw std::invalid_argument("broadcast channel: law must condition on the input");
  }
  if (law_.out_axes().size() != 2 || law_.out_axes()[0] != out1_ ||
      law_.out_axes()[1] != out2_) {
    throw std::invalid_argument("broadcast channel: law outputs must be (y1, y2)");
  }
}

CondPmf BroadcastChannel::marginal_to(int receiver) const {
  if (receiver != 1 && receiver != 2) {
    throw std::invalid_argument("broadcast channel: receiver must be 1 or 2");
  }
  const Alphabet& out = receiver == 1 ? out1_ : out2_;
  const std::size_t n1 = out1_.size(), n2 = out2_.size();
  std::vector<double> table(input_.size() * out.size(), 0.0);
  for (std::size_t x = 0; x < input_.size(); ++x) {
    const auto row = law_.row(x);
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n2; ++b) {
        table[x * out.size() + (receiver == 1 ? a : b)] += row[a * n2 + b];
      }
    }
  }
  return CondPmf({input_}, {out}, std::move(table));
}

AuxScheme::AuxScheme(JointPmf vjoint, CondPmf xmap)
    : vjoint_(std::move(vjoint)), xmap_(std::move(xmap)) {
  if (!vjoint_.has_axis(kAxisV1) || !vjoint_.has_axis(kAxisV2)) {
    throw std::invalid_argument("aux scheme: vjoint needs V1 and V2 axes");
  }
  if (!vjoint_.has_axis(kAxisU)) {
    // Singleton U keeps evaluation uniform; the coding scheme itself is U-free.
    const Alphabet u(kAxisU, {"0"});
    const JointPmf base = vjoint_.marginal({kAxisV1, kAxisV2});
    std::vector<Alphabet> axes = {u, base.axis(0), base.axis(1)};
    vjoint_ = JointPmf(std::move(axes), base.mass());
  } else {
    vjoint_ = vjoint_.marginal({kAxisU, kAxisV1, kAxisV2});
  }
  if (xmap_.given_axes().size() != 2 ||
      xmap_.given_axes()[0].name() != kAxisV1 ||
      xmap_.given_axes()[1].name() != kAxisV2 || xmap_.out_axes().size() != 1 ||
      xmap_.out_axes()[0].name() != kAxisX) {
    throw std::invalid_argument("aux scheme: xmap must be P(X | V1, V2)");
  }
  if (xmap_.given_axes()[0] != vjoint_.axis(1) ||
      xmap_.given_axes()[1] != vjoint_.axis(2)) {
    throw std::invalid_argument("aux scheme: xmap axes disagree with vjoint");
  }
}

JointPmf induced_joint(const BroadcastChannel& ch, const AuxScheme& aux) {
  if (aux.xmap().out_axes()[0] != ch.input()) {
    throw std::invalid_argument("induced joint: xmap output is not the channel input");
  }
  // Channel law conditions on X alone, so chaining compositions realizes the
  // Markov structure by construction.
  CondPmf law({ch.input()}, {ch.out1(), ch.out2()}, ch.law().table());
  return aux.vjoint().compose(aux.xmap()).compose(law);
}

MarkovResiduals markov_residuals(const JointPmf& joint) {
  MarkovResiduals r{};
  r.aux_to_x = mutual_information(joint, {kAxisU}, {kAxisX}, {kAxisV1, kAxisV2});
  r.channel_input = mutual_information(joint, {kAxisU, kAxisV1, kAxisV2},
                                       {kAxisY1, kAxisY2}, {kAxisX});
  return r;
}

CondPmf y2_letter_channel(const BroadcastChannel& ch, const AuxScheme& aux) {
  const CondPmf to2 = ch.marginal_to(2);
  const std::size_t v1n = aux.xmap().given_axes()[0].size();
  const std::size_t v2n = aux.xmap().given_axes()[1].size();
  const std::size_t xn = ch.input().size();
  const std::size_t yn = ch.out2().size();
  std::vector<double> table(v1n * v2n * yn, 0.0);
  for (std::size_t g = 0; g < v1n * v2n; ++g) {
    const auto xrow = aux.xmap().row(g);
    for (std::size_t x = 0; x < xn; ++x) {
      if (xrow[x] == 0.0) continue;
      const auto yrow = to2.row(x);
      for (std::size_t y = 0; y < yn; ++y) table[g * yn + y] += xrow[x] * yrow[y];
    }
  }
  return CondPmf({aux.xmap().given_axes()[0], aux.xmap().given_axes()[1]},
                 {ch.out2()}, std::move(table));
}

CondPmf y1_letter_channel(const BroadcastChannel& ch, const AuxScheme& aux) {
  const CondPmf to1 = ch.marginal_to(1);
  const std::size_t v1n = aux.xmap().given_axes()[0].size();
  const std::size_t v2n = aux.xmap().given_axes()[1].size();
  const std::size_t xn = ch.input().size();
  const std::size_t yn = ch.out1().size();
  std::vector<double> table(v1n * v2n * yn, 0.0);
  for (std::size_t g = 0; g < v1n * v2n; ++g) {
    const auto xrow = aux.xmap().row(g);
    for (std::size_t x = 0; x < xn; ++x) {
      if (xrow[x] == 0.0) continue;
      const auto yrow = to1.row(x);
      for (std::size_t y = 0; y < yn; ++y) table[g * yn + y] += xrow[x] * yrow[y];
    }
  }
  return CondPmf({aux.xmap().given_axes()[0], aux.xmap().given_axes()[1]},
                 {ch.out1()}, std::move(table));
}

namespace {

CondPmf mix_over_v1(const Pmf& v1, const CondPmf& y2_given_v1v2) {
  const std::size_t v1n = y2_given_v1v2.given_axes()[0].size();
  const std::size_t v2n = y2_given_v1v2.given_axes()[1].size();
  const std::size_t yn = y2_given_v1v2.out_cells();
  std::vector<double> table(v2n * yn, 0.0);
  for (std::size_t a = 0; a < v1n; ++a) {
    if (v1[a] == 0.0) continue;
    for (std::size_t b = 0; b < v2n; ++b) {
      const auto row = y2_given_v1v2.row(a * v2n + b);
      for (std::size_t y = 0; y < yn; ++y) table[b * yn + y] += v1[a] * row[y];
    }
  }
  return CondPmf({y2_given_v1v2.given_axes()[1]}, {y2_given_v1v2.out_axes()[0]},
                 std::move(table));
}

}  // namespace

CondPmf stealth_reference(const JointPmf& joint) {
  if (!joint.has_axis(kAxisV1) || !joint.has_axis(kAxisV2) ||
      !joint.has_axis(kAxisY2)) {
    throw std::invalid_argument("stealth reference: joint needs V1, V2, Y2 axes");
  }
  const Pmf v1 = joint.marginal_pmf(kAxisV1);
  const CondPmf cond = joint.conditional({kAxisV1, kAxisV2}, {kAxisY2});
  return mix_over_v1(v1, cond);
}

CondPmf stealth_reference(const BroadcastChannel& ch, const AuxScheme& aux) {
  return mix_over_v1(aux.v1_marginal(), y2_letter_channel(ch, aux));
}

}  // namespace secbc
