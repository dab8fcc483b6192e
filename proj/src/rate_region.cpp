#include "secbc/rate_region.hpp"

#include <algorithm>
#include <cmath>

#include "secbc/info.hpp"
#include "secbc/parallel.hpp"
#include "secbc/rng.hpp"

namespace secbc {

RateBounds achievable_rates(const JointPmf& joint) {
  RateBounds b;
  const std::vector<std::string> u = {kAxisU};
  const double r1 = mutual_information(joint, {kAxisV1}, {kAxisY1}, u) -
                    mutual_information(joint, {kAxisV1}, {kAxisY2}, {kAxisV2, kAxisU}) -
                    mutual_information(joint, {kAxisV1}, {kAxisV2}, u);
  const double r2 = mutual_information(joint, {kAxisV2}, {kAxisY2}, u) -
                    mutual_information(joint, {kAxisV2}, {kAxisY1}, {kAxisV1, kAxisU}) -
                    mutual_information(joint, {kAxisV1}, {kAxisV2}, u);
  b.r1_max = std::max(0.0, r1);
  b.r2_max = std::max(0.0, r2);
  return b;
}

double RegionReport::min_slack() const {
  double m = covering;
  for (double s : {packing1, packing2, reduced1, reduced2, secrecy1, secrecy2}) {
    m = std::min(m, s);
  }
  return m;
}

RegionReport code_rate_constraints(const JointPmf& joint, const RatePoint& p) {
  // The construction itself never uses U, so these run unconditioned.
  const double i11 = mutual_information(joint, {kAxisV1}, {kAxisY1});
  const double i22 = mutual_information(joint, {kAxisV2}, {kAxisY2});
  const double i12 = mutual_information(joint, {kAxisV1}, {kAxisV2});
  const double l1 = mutual_information(joint, {kAxisY2}, {kAxisV1}, {kAxisV2});
  const double l2 = mutual_information(joint, {kAxisY1}, {kAxisV2}, {kAxisV1});

  RegionReport r;
  r.covering = p.rco - i12;
  r.packing1 = i11 - (p.r1 + p.r1p + p.rco);
  r.packing2 = i22 - (p.r2 + p.r2p + p.rco);
  r.reduced1 = i11 - i12 - (p.r1 + p.r1p);
  r.reduced2 = i22 - i12 - (p.r2 + p.r2p);
  r.secrecy1 = p.r1p - l1;
  r.secrecy2 = p.r2p - l2;

  struct Named {
    const char* name;
    double slack;
  };
  const Named rows[] = {{"covering", r.covering},   {"packing1", r.packing1},
                        {"packing2", r.packing2},   {"reduced1", r.reduced1},
                        {"reduced2", r.reduced2},   {"secrecy1", r.secrecy1},
                        {"secrecy2", r.secrecy2}};
  r.feasible = true;
  double worst = 0.0;
  for (const auto& row : rows) {
    if (row.slack <= 0.0 && (r.feasible || row.slack < worst)) {
      r.feasible = false;
      worst = row.slack;
      r.violated = row.name;
    }
  }
  return r;
}

std::vector<SchemePoint> pareto_filter(std::vector<SchemePoint> points) {
  std::vector<SchemePoint> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& a = points[j].point;
      const auto& b = points[i].point;
      const bool geq = a.r1 >= b.r1 && a.r2 >= b.r2;
      const bool strict = a.r1 > b.r1 || a.r2 > b.r2;
      if (geq && (strict || j < i)) dominated = true;  // ties keep the first
    }
    if (!dominated) kept.push_back(std::move(points[i]));
  }
  std::sort(kept.begin(), kept.end(), [](const SchemePoint& a, const SchemePoint& b) {
    if (a.point.r1 != b.point.r1) return a.point.r1 > b.point.r1;
    return a.point.r2 > b.point.r2;
  });
  return kept;
}

namespace {

struct SchemeVars {
  std::vector<double> vjoint;          // (u, v1, v2) cells
  std::vector<std::vector<double>> xrows;  // one row per (v1, v2)
};

AuxScheme realize(const BroadcastChannel& ch, const SearchConfig& cfg,
                  const SchemeVars& vars) {
  const Alphabet u = Alphabet::indexed(kAxisU, cfg.u_size);
  const Alphabet v1 = Alphabet::indexed(kAxisV1, cfg.v1_size);
  const Alphabet v2 = Alphabet::indexed(kAxisV2, cfg.v2_size);
  std::vector<double> xtable;
  xtable.reserve(vars.xrows.size() * ch.input().size());
  for (const auto& row : vars.xrows) {
    xtable.insert(xtable.end(), row.begin(), row.end());
  }
  return AuxScheme(JointPmf({u, v1, v2}, vars.vjoint),
                   CondPmf({v1, v2}, {ch.input()}, std::move(xtable)));
}

double objective(const BroadcastChannel& ch, const SearchConfig& cfg,
                 const SchemeVars& vars, double w) {
  const RateBounds b = achievable_rates(induced_joint(ch, realize(ch, cfg, vars)));
  return w * b.r1_max + (1.0 - w) * b.r2_max;
}

std::vector<double> dirichlet(RngStream& rng, std::size_t size) {
  std::vector<double> m(size);
  double sum = 0.0;
  do {
    sum = 0.0;
    for (double& v : m) {
      v = -std::log1p(-rng.uniform());
      sum += v;
    }
  } while (sum <= 0.0);
  for (double& v : m) v /= sum;
  return m;
}

SchemeVars draw_vars(const BroadcastChannel& ch, const SearchConfig& cfg,
                     RngStream& rng) {
  SchemeVars vars;
  vars.vjoint = dirichlet(rng, cfg.u_size * cfg.v1_size * cfg.v2_size);
  const std::size_t rows = cfg.v1_size * cfg.v2_size;
  const std::size_t xs = ch.input().size();
  const bool deterministic = rng.uniform() < 0.5;
  vars.xrows.resize(rows);
  for (auto& row : vars.xrows) {
    if (deterministic) {
      row.assign(xs, 0.0);
      row[rng.uniform_below(xs)] = 1.0;
    } else {
      row = dirichlet(rng, xs);
    }
  }
  return vars;
}

/// Greedy pairwise mass moves with shrinking step; keeps the simplex exact.
void refine(const BroadcastChannel& ch, const SearchConfig& cfg, SchemeVars& vars,
            double w, double& best) {
  static constexpr double kSteps[] = {0.2, 0.08, 0.03, 0.012, 0.005};
  for (std::size_t sweep = 0; sweep < cfg.refine_sweeps; ++sweep) {
    for (double step : kSteps) {
      for (std::size_t i = 0; i < vars.vjoint.size(); ++i) {
        for (std::size_t j = 0; j < vars.vjoint.size(); ++j) {
          if (i == j || vars.vjoint[i] < step) continue;
          vars.vjoint[i] -= step;
          vars.vjoint[j] += step;
          const double cand = objective(ch, cfg, vars, w);
          if (cand > best + 1e-12) {
            best = cand;
          } else {
            vars.vjoint[i] += step;
            vars.vjoint[j] -= step;
          }
        }
      }
      for (auto& row : vars.xrows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          for (std::size_t j = 0; j < row.size(); ++j) {
            if (i == j || row[i] < step) continue;
            row[i] -= step;
            row[j] += step;
            const double cand = objective(ch, cfg, vars, w);
            if (cand > best + 1e-12) {
              best = cand;
            } else {
              row[i] += step;
              row[j] -= step;
            }
          }
        }
      }
    }
  }
}

/// Turns a scheme into a rate point with `margin` slack on every active
/// constraint; returns false if even the zero-rate point is infeasible.
bool make_point(const BroadcastChannel& ch, const AuxScheme& aux, double margin,
                SchemePoint& out) {
  const JointPmf joint = induced_joint(ch, aux);
  const double i11 = mutual_information(joint, {kAxisV1}, {kAxisY1});
  const double i22 = mutual_information(joint, {kAxisV2}, {kAxisY2});
  const double i12 = mutual_information(joint, {kAxisV1}, {kAxisV2});
  const double l1 = mutual_information(joint, {kAxisY2}, {kAxisV1}, {kAxisV2});
  const double l2 = mutual_information(joint, {kAxisY1}, {kAxisV2}, {kAxisV1});

  RatePoint p;
  p.rco = i12 + margin;
  p.r1p = l1 + margin;
  p.r2p = l2 + margin;
  p.r1 = std::max(0.0, i11 - p.r1p - p.rco - margin);
  p.r2 = std::max(0.0, i22 - p.r2p - p.rco - margin);

  out.scheme = aux;
  out.point = p;
  out.bounds = achievable_rates(joint);
  out.report = code_rate_constraints(joint, p);
  return out.report.feasible;
}

AuxScheme default_scheme(const BroadcastChannel& ch, const SearchConfig& cfg) {
  SchemeVars vars;
  const std::size_t cells = cfg.u_size * cfg.v1_size * cfg.v2_size;
  vars.vjoint.assign(cells, 1.0 / static_cast<double>(cells));
  const std::size_t rows = cfg.v1_size * cfg.v2_size;
  const std::size_t xs = ch.input().size();
  vars.xrows.resize(rows);
  for (std::size_t g = 0; g < rows; ++g) {
    vars.xrows[g].assign(xs, 0.0);
    vars.xrows[g][g % xs] = 1.0;
  }
  return realize(ch, cfg, vars);
}

bool run_restart(const BroadcastChannel& ch, const SearchConfig& cfg,
                 std::size_t index, SchemePoint& out) {
  RngStream rng = RngStream(cfg.seed).derive(0x5ea6c4, index);
  static constexpr double kWeights[] = {0.5,  0.0, 1.0,  0.25, 0.75, 0.1,
                                        0.9,  0.4, 0.6,  0.2,  0.8};
  const double w = kWeights[index % (sizeof(kWeights) / sizeof(kWeights[0]))];
  SchemeVars vars = draw_vars(ch, cfg, rng);
  double best = objective(ch, cfg, vars, w);
  refine(ch, cfg, vars, w, best);
  return make_point(ch, realize(ch, cfg, vars), cfg.margin, out);
}

std::vector<SchemePoint> collect(const BroadcastChannel& ch, const SearchConfig& cfg,
                                 const std::vector<char>& ok,
                                 std::vector<SchemePoint>& slots) {
  std::vector<SchemePoint> candidates;
  SchemePoint origin;
  if (make_point(ch, default_scheme(ch, cfg), cfg.margin, origin)) {
    origin.point.r1 = 0.0;
    origin.point.r2 = 0.0;
    origin.report = code_rate_constraints(
        induced_joint(ch, origin.scheme), origin.point);
    if (origin.report.feasible) candidates.push_back(origin);
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (ok[i]) candidates.push_back(std::move(slots[i]));
  }
  return pareto_filter(std::move(candidates));
}

}  // namespace

std::vector<SchemePoint> optimize_region(const BroadcastChannel& ch,
                                         const SearchConfig& cfg) {
  std::vector<SchemePoint> slots(cfg.restarts);
  std::vector<char> ok(cfg.restarts, 0);
  parallel_for_chunks(cfg.restarts, [&](std::size_t i) {
    ok[i] = run_restart(ch, cfg, i, slots[i]) ? 1 : 0;
  });
  return collect(ch, cfg, ok, slots);
}

std::vector<SchemePoint> optimize_region_serial(const BroadcastChannel& ch,
                                                const SearchConfig& cfg) {
  std::vector<SchemePoint> slots(cfg.restarts);
  std::vector<char> ok(cfg.restarts, 0);
  for (std::size_t i = 0; i < cfg.restarts; ++i) {
    ok[i] = run_restart(ch, cfg, i, slots[i]) ? 1 : 0;
  }
  return collect(ch, cfg, ok, slots);
}

}  // namespace secbc
