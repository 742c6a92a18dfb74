#include "nas/stability.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nas/dyn_props.hpp"
#include "nas/parallel.hpp"

namespace nas {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Generator indices whose pairs (f_i, g_i) repeat with the joint cycle.
std::size_t joint_span(const MapSequence& f, const MapSequence& g, std::size_t horizon) {
  const auto pf = f.period();
  const auto pg = g.period();
  if (pf && pg) return std::lcm(*pf, *pg);
  return std::max<std::size_t>(horizon, 1);
}

PseudoOrbit g_orbit(const MapSequence& g, const PointId& x, std::size_t T, double gamma) {
  PseudoOrbit po;
  po.points.reserve(T + 1);
  po.points.push_back(x);
  PointId y = x;
  for (std::size_t n = 1; n <= T; ++n) {
    y = g.generator(n, y);
    po.points.push_back(y);
  }
  po.delta = gamma;
  po.source = "G-orbit";
  return po;
}

Verdict mode_expansivity(const MapSequence& f, const ConjugacyOptions& opt) {
  switch (opt.mode) {
    case ConjugacyMode::Plain: return estimate_expansivity(f, opt.horizon, opt.jobs);
    case ConjugacyMode::Recurrent: return estimate_recurrent_expansivity(f, opt.horizon, opt.tail_start, opt.jobs);
    case ConjugacyMode::Mean: return estimate_mean_expansivity(f, opt.horizon, opt.tail_start, opt.jobs);
  }
  return {};
}

}  // namespace

std::string to_string(ConjugacyMode mode) {
  switch (mode) {
    case ConjugacyMode::Recurrent: return "Recurrent";
    case ConjugacyMode::Plain: return "Plain";
    case ConjugacyMode::Mean: return "Mean";
  }
  return "?";
}

ConjugacyMode conjugacy_mode_from_string(const std::string& name) {
  if (name == "Recurrent" || name == "recurrent" || name == "ALSP") return ConjugacyMode::Recurrent;
  if (name == "Plain" || name == "plain" || name == "shadowing") return ConjugacyMode::Plain;
  if (name == "Mean" || name == "mean" || name == "SASP") return ConjugacyMode::Mean;
  throw ArgumentError("unknown conjugacy mode: " + name);
}

ShadowMode shadow_mode_of(ConjugacyMode mode) {
  switch (mode) {
    case ConjugacyMode::Recurrent: return ShadowMode::Almost;
    case ConjugacyMode::Plain: return ShadowMode::Plain;
    case ConjugacyMode::Mean: return ShadowMode::StrongAverage;
  }
  return ShadowMode::Plain;
}

std::optional<PointId> ConjugacyMap::at(const Space& space, const PointId& x) const {
  const auto o = space.ordinal(x);
  if (!o || *o >= table.size()) return std::nullopt;
  return table[*o];
}

ConjugacyMap construct_conjugacy(const MapSequence& f, const MapSequence& g, const ConjugacyOptions& opt) {
  const Space& space = f.space();
  if (!(opt.eps > 0.0)) throw ArgumentError("eps must be positive");
  if (opt.horizon == 0) throw ArgumentError("horizon must be positive");
  const std::size_t N = space.size();
  const std::size_t T = opt.horizon;
  const ShadowMode smode = shadow_mode_of(opt.mode);

  ConjugacyMap h;
  h.mode = opt.mode;
  h.eps = opt.eps;
  h.horizon = T;
  h.tail_start = opt.tail_start;
  h.domain.reserve(N);
  for (std::size_t i = 0; i < N; ++i) h.domain.push_back(space.point(i));
  h.table.assign(N, PointId{});
  h.shadow_error.assign(N, 0.0);
  h.qualifying.assign(N, 0);

  // hypotheses
  h.gamma = gamma_distance(f, g, joint_span(f, g, T)).value;
  if (opt.expansivity) {
    h.expansivity = opt.expansivity;
  } else {
    const Verdict c = mode_expansivity(f, opt);
    h.expansivity = c.holds ? c.constant : std::optional<double>(0.0);
  }
  if (!(opt.eps < *h.expansivity / 3.0)) {
    h.hypothesis_violated = true;
    h.hypothesis_notes.push_back("eps " + fmt(opt.eps) + " is not below c/3 = " + fmt(*h.expansivity / 3.0));
  }
  if (opt.delta && !(h.gamma < *opt.delta)) {
    h.hypothesis_violated = true;
    h.hypothesis_notes.push_back("gamma " + fmt(h.gamma) + " is not below delta " + fmt(*opt.delta));
  }
  for (const MapSequence* s : {&f, &g}) {
    if (!check_commutativity(*s, T).holds) {
      h.hypothesis_violated = true;
      h.hypothesis_notes.push_back(s->describe() + " is not commutative");
    }
  }

  std::vector<char> ok(N, 0), wide(N, 0);
  parallel_for(N, opt.jobs, [&](std::size_t i) {
    const PointId x = h.domain[i];
    const PseudoOrbit po = g_orbit(g, x, T, h.gamma);
    ShadowSearchOptions so;
    so.tail_start = opt.tail_start;
    so.candidates = space.ball(x, opt.eps);
    so.jobs = 1;
    ShadowingResult r = find_shadow_point(f, po, opt.eps, smode, so);
    h.qualifying[i] = r.qualifying;
    if (!r.success) {
      so.candidates.clear();
      ShadowingResult all = find_shadow_point(f, po, opt.eps, smode, so);
      if (all.success || !r.shadow_point) {
        r = all;
        wide[i] = all.success ? 1 : 0;
      }
    }
    if (r.shadow_point) h.table[i] = *r.shadow_point;
    h.shadow_error[i] = r.functional;
    ok[i] = r.success ? 1 : 0;
  });
  for (std::size_t i = 0; i < N; ++i) {
    h.widened += wide[i];
    if (!ok[i] && !h.failed_at) h.failed_at = h.domain[i];
  }
  if (h.failed_at) {
    h.hypothesis_violated = true;
    h.hypothesis_notes.push_back("no qualifying shadow for " + space.describe(*h.failed_at));
  }
  conjugacy_diagnostics(f, g, h, opt.lambdas, opt.jobs);
  return h;
}

void conjugacy_diagnostics(const MapSequence& f, const MapSequence& g, ConjugacyMap& h,
                           const std::vector<double>& lambdas, std::size_t jobs) {
  const Space& space = f.space();
  const std::size_t N = h.domain.size();
  const std::size_t span = joint_span(f, g, h.horizon);
  const double rounding = 2.0 * space.resolution();

  struct Row {
    double close = 0.0, semi = 0.0, comp = 0.0, bound_excess = 0.0, bound = 0.0;
    std::size_t skipped = 0;
  };
  std::vector<Row> rows(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    Row& r = rows[i];
    const PointId& x = h.domain[i];
    const PointId& hx = h.table[i];
    r.close = space.dist(hx, x);
    for (std::size_t k = 1; k <= span; ++k) {
      const PointId gx = g.generator(k, x);
      const auto hgx = h.at(space, gx);
      if (!hgx) {
        ++r.skipped;
        continue;
      }
      const double res = space.dist(f.generator(k, hx), *hgx);
      r.semi = std::max(r.semi, res);
      const double bound = h.shadow_error[i] + h.gamma + h.shadow_error[*space.ordinal(gx)] + rounding;
      r.bound = std::max(r.bound, bound);
      r.bound_excess = std::max(r.bound_excess, res - bound);
    }
    PointId fy = hx;
    PointId gy = x;
    for (std::size_t n = 1; n <= h.horizon; ++n) {
      fy = f.generator(n, fy);
      gy = g.generator(n, gy);
      if (const auto hg = h.at(space, gy)) r.comp = std::max(r.comp, space.dist(fy, *hg));
    }
  });
  h.closeness = 0.0;
  h.semiconj_residual = 0.0;
  h.composition_residual = 0.0;
  h.residual_skipped = 0;
  h.residual_bound = 0.0;
  double excess = 0.0;
  for (const Row& r : rows) {
    h.closeness = std::max(h.closeness, r.close);
    h.semiconj_residual = std::max(h.semiconj_residual, r.semi);
    h.composition_residual = std::max(h.composition_residual, r.comp);
    h.residual_skipped += r.skipped;
    h.residual_bound = std::max(h.residual_bound, r.bound);
    excess = std::max(excess, r.bound_excess);
  }
  h.residual_within_bound = excess <= kTol;

  // continuity modulus: alpha(lambda) = smallest d(x, y) among pairs with
  // d(h x, h y) >= lambda, so d(x, y) < alpha forces d(h x, h y) < lambda
  const std::size_t L = lambdas.size();
  h.continuity_modulus.clear();
  const std::size_t M = L ? N : 0;
  std::vector<std::vector<double>> alpha(M, std::vector<double>(L, space.diameter()));
  parallel_for(M, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < M; ++j) {
      const double dh = space.dist(h.table[i], h.table[j]);
      bool any = false;
      for (double lam : lambdas) any = any || dh >= lam - kTol;
      if (!any) continue;
      const double dx = space.dist(h.domain[i], h.domain[j]);
      for (std::size_t l = 0; l < L; ++l)
        if (dh >= lambdas[l] - kTol) alpha[i][l] = std::min(alpha[i][l], dx);
    }
  });
  for (std::size_t l = 0; l < L; ++l) {
    double a = space.diameter();
    for (std::size_t i = 0; i < M; ++i) a = std::min(a, alpha[i][l]);
    h.continuity_modulus.emplace_back(lambdas[l], a);
  }
  std::sort(h.continuity_modulus.begin(), h.continuity_modulus.end());

  h.injective = true;
  h.collision.reset();
  std::map<PointId, std::size_t> seen;
  for (std::size_t i = 0; i < N; ++i) {
    const auto [it, fresh] = seen.emplace(h.table[i], i);
    if (!fresh) {
      h.injective = false;
      h.collision = std::make_pair(h.domain[it->second], h.domain[i]);
      break;
    }
  }
}

Verdict verify_conjugacy(const MapSequence& f, const MapSequence& g, const ConjugacyMap& h, double eps) {
  ConjugacyMap fresh = h;
  conjugacy_diagnostics(f, g, fresh, {});
  const Space& space = f.space();
  const double tol = 2.0 * space.resolution() + kTol;
  Verdict v;
  v.checker = "conjugacy";
  v.horizon = h.horizon;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = f.period().has_value() && g.period().has_value();
  v.constant = fresh.semiconj_residual;
  const bool semi = fresh.semiconj_residual <= tol;
  const bool comp = fresh.composition_residual <= tol;
  const bool close = strictly_below(fresh.closeness, eps);
  v.holds = semi && comp && close;
  v.notes.push_back("closeness " + fmt(fresh.closeness));
  v.notes.push_back("generator residual " + fmt(fresh.semiconj_residual));
  v.notes.push_back("composition residual " + fmt(fresh.composition_residual));
  if (fresh.residual_skipped) {
    v.notes.push_back(std::to_string(fresh.residual_skipped) + " generator checks skipped: g_i(x) outside the table");
  }
  if (h.hypothesis_violated) v.notes.push_back("HYPOTHESIS-VIOLATED");
  if (!v.holds) {
    // worst point of the failing clause
    const std::size_t N = h.domain.size();
    const std::size_t span = joint_span(f, g, h.horizon);
    Witness w;
    double worst = -1.0;
    for (std::size_t i = 0; i < N; ++i) {
      const PointId& x = h.domain[i];
      if (!close) {
        const double d = space.dist(h.table[i], x);
        if (d > worst) {
          worst = d;
          w.points = {x, h.table[i]};
          w.index.reset();
          w.note = "h moves the point by at least eps";
        }
        continue;
      }
      if (!semi) {
        for (std::size_t k = 1; k <= span; ++k) {
          const auto hg = h.at(space, g.generator(k, x));
          if (!hg) continue;
          const double d = space.dist(f.generator(k, h.table[i]), *hg);
          if (d > worst) {
            worst = d;
            w.points = {x, h.table[i]};
            w.index = k;
            w.note = "f_i(h(x)) and h(g_i(x)) differ";
          }
        }
        continue;
      }
      PointId fy = h.table[i], gy = x;
      for (std::size_t n = 1; n <= h.horizon; ++n) {
        fy = f.generator(n, fy);
        gy = g.generator(n, gy);
        const auto hg = h.at(space, gy);
        if (!hg) continue;
        const double d = space.dist(fy, *hg);
        if (d > worst) {
          worst = d;
          w.points = {x, h.table[i]};
          w.index = n;
          w.note = "F_n(h(x)) and h(G_n(x)) differ";
        }
      }
    }
    w.value = worst;
    v.witness = w;
  }
  return v;
}

Verdict check_uniqueness(const MapSequence& f, const MapSequence& g, const ConjugacyMap& h, double eps,
                         std::size_t jobs) {
  const Space& space = f.space();
  const std::size_t N = h.domain.size();
  const ShadowMode smode = shadow_mode_of(h.mode);
  Verdict v;
  v.checker = "conjugacy_uniqueness";
  v.horizon = h.horizon;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = f.period().has_value() && g.period().has_value();
  if (h.expansivity && !(eps < *h.expansivity / 3.0)) v.notes.push_back("HYPOTHESIS-VIOLATED: eps not below c/3");

  // per point: number of qualifying candidates in B(x, eps) and one that is not h(x)
  std::vector<std::size_t> count(N, 0);
  std::vector<char> h_ok(N, 0);
  std::vector<std::optional<PointId>> other(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    const PointId& x = h.domain[i];
    const PseudoOrbit po = g_orbit(g, x, h.horizon, h.gamma);
    for (const PointId& z : space.ball(x, eps)) {
      if (!strictly_below(evaluate_shadow(f, po, z, smode, h.tail_start).functional, eps)) continue;
      ++count[i];
      if (z == h.table[i]) {
        h_ok[i] = 1;
      } else if (!other[i]) {
        other[i] = z;
      }
    }
  });
  v.holds = true;
  std::size_t worst = 1;
  for (std::size_t i = 0; i < N; ++i) {
    worst = std::max(worst, count[i]);
    if (v.holds && (count[i] != 1 || !h_ok[i])) {
      v.holds = false;
      Witness w;
      w.points = {h.domain[i], h.table[i]};
      if (other[i]) w.points.push_back(*other[i]);
      w.value = static_cast<double>(count[i]);
      w.note = h_ok[i] ? "another point of B(x, eps) shadows the G-orbit of x"
                       : "h(x) does not shadow the G-orbit of x";
      v.witness = w;
    }
  }
  v.constant = static_cast<double>(worst);
  return v;
}

Verdict check_injectivity(const MapSequence& g, const ConjugacyMap& h, double eps, double c_prime) {
  const Space& space = g.space();
  Verdict v;
  v.checker = "conjugacy_injectivity";
  v.horizon = h.horizon;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = g.period().has_value();
  v.constant = c_prime;
  std::map<PointId, std::size_t> seen;
  v.holds = true;
  for (std::size_t i = 0; i < h.domain.size(); ++i) {
    const auto [it, fresh] = seen.emplace(h.table[i], i);
    if (fresh) continue;
    v.holds = false;
    Witness w;
    w.points = {h.domain[it->second], h.domain[i], h.table[i]};
    if (space.resolution() >= eps) {
      w.note = "collision at grid resolution " + fmt(space.resolution()) + " >= eps";
    } else if (c_prime < 3.0 * eps) {
      w.note = "collision with c' below 3 eps";
    } else {
      w.note = "collision although c' >= 3 eps";
    }
    v.witness = w;
    break;
  }
  if (c_prime < 3.0 * eps) v.notes.push_back("HYPOTHESIS-VIOLATED: c' " + fmt(c_prime) + " < 3 eps");
  if (space.resolution() >= eps) v.notes.push_back("grid resolution at or above eps");
  return v;
}

ConjugacyMap transport_conjugacy(const MapSequence& f, const MapSequence& hseq, const std::vector<PointId>& j,
                                 const MapSequence& g, const ConjugacyOptions& opt) {
  const Space& space = f.space();
  const std::size_t N = space.size();
  if (j.size() != N) throw ArgumentError("equivalence table must cover every enumerated point");
  std::vector<std::size_t> jo(N), jinv(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto o = space.ordinal(j[i]);
    if (!o) throw ArgumentError("equivalence maps " + space.describe(space.point(i)) + " off the sample");
    if (jinv[*o] != N) {
      throw ArgumentError("equivalence not injective: " + space.describe(space.point(jinv[*o])) + " and " +
                          space.describe(space.point(i)));
    }
    jo[i] = *o;
    jinv[*o] = i;
  }
  const std::size_t span = joint_span(f, hseq, opt.horizon);
  for (std::size_t k = 1; k <= span; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto hi = space.ordinal(hseq.generator(k, space.point(i)));
      if (!hi || f.generator(k, j[i]) != j[*hi]) {
        throw ArgumentError("f_" + std::to_string(k) + " o j != j o h_" + std::to_string(k) + " at " +
                            space.describe(space.point(i)));
      }
    }
  }

  const std::vector<PointId> jt = j;
  const Space sp = space;
  MapSequence gprime = MapSequence::from_function(
      space,
      [g, jt, jinv, sp](std::size_t k, const PointId& x) {
        const auto o = sp.ordinal(x);
        if (!o) throw DomainError("conjugated generator evaluated off the sample");
        const auto gi = sp.ordinal(g.generator(k, sp.point(jinv[*o])));
        if (!gi) throw DomainError("perturbation leaves the sample");
        return jt[*gi];
      },
      g.period(), "j g j^-1 of " + g.describe());
  if (g.commutative_claimed()) gprime = gprime.claim_commutative();

  const ConjugacyMap k = construct_conjugacy(f, gprime, opt);
  ConjugacyMap out = k;
  for (std::size_t i = 0; i < N; ++i) {
    const auto o = space.ordinal(k.table[jo[i]]);
    if (!o) throw DomainError("conjugacy image off the sample at " + space.describe(space.point(i)));
    out.table[i] = space.point(jinv[*o]);
    out.shadow_error[i] = k.shadow_error[jo[i]];
    out.qualifying[i] = k.qualifying[jo[i]];
  }
  if (k.failed_at) out.failed_at = space.point(jinv[*space.ordinal(*k.failed_at)]);
  out.gamma = gamma_distance(hseq, g, joint_span(hseq, g, opt.horizon)).value;
  conjugacy_diagnostics(hseq, g, out, opt.lambdas, opt.jobs);
  return out;
}

void write_conjugacy_csv(std::ostream& out, const Space& space, const ConjugacyMap& h) {
  out << "point,image,shadow_error,qualifying\n";
  out.precision(17);
  for (std::size_t i = 0; i < h.domain.size(); ++i) {
    out << '"' << space.describe(h.domain[i]) << "\",\"" << space.describe(h.table[i]) << "\"," << h.shadow_error[i]
        << ',' << h.qualifying[i] << '\n';
  }
}

}  // namespace nas
