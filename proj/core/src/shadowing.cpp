#include "nas/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "nas/dyn_props.hpp"
#include "nas/parallel.hpp"

namespace nas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlock = 64;

std::size_t resolve_tail(std::size_t T, std::optional<std::size_t> tail_start) {
  return std::min(tail_start.value_or(T / 2), T);
}

bool uses_initial(ShadowMode m) { return m == ShadowMode::Almost || m == ShadowMode::StrongAverage; }
bool uses_cesaro(ShadowMode m) { return m == ShadowMode::Average || m == ShadowMode::StrongAverage; }

// Functional of candidate z, abandoning the computation once it exceeds
// `cutoff` (then +inf is returned). With `tail_only` the initial-closeness
// clause is dropped.
double functional_of(const MapSequence& seq, const PseudoOrbit& po, PointId z, ShadowMode mode, std::size_t ts,
                     double cutoff, bool tail_only) {
  const Space& space = seq.space();
  const std::size_t T = po.horizon();
  double value = 0.0;
  double sum = 0.0;
  const std::size_t lo = std::max<std::size_t>(ts, 1);
  for (std::size_t n = 0; n <= T; ++n) {
    if (n > 0) z = seq.generator(n, z);
    const double e = space.dist(z, po.points[n]);
    switch (mode) {
      case ShadowMode::Plain:
        value = std::max(value, e);
        break;
      case ShadowMode::Almost:
        if ((n == 0 && !tail_only) || n >= ts) value = std::max(value, e);
        break;
      case ShadowMode::Average:
      case ShadowMode::StrongAverage:
        if (n == 0 && mode == ShadowMode::StrongAverage && !tail_only) value = e;
        sum += e;
        if (n + 1 >= lo) value = std::max(value, sum / static_cast<double>(n + 1));
        break;
    }
    if (value > cutoff) return kInf;
  }
  return value;
}

struct BlockResult {
  double best = kInf;
  std::size_t best_index = 0;
  std::size_t qualifying = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(ShadowMode mode) {
  switch (mode) {
    case ShadowMode::Plain: return "Plain";
    case ShadowMode::Almost: return "Almost";
    case ShadowMode::Average: return "Average";
    case ShadowMode::StrongAverage: return "StrongAverage";
  }
  return "?";
}

ShadowMode shadow_mode_from_string(const std::string& name) {
  if (name == "Plain" || name == "plain") return ShadowMode::Plain;
  if (name == "Almost" || name == "almost" || name == "ALSP") return ShadowMode::Almost;
  if (name == "Average" || name == "average") return ShadowMode::Average;
  if (name == "StrongAverage" || name == "strong_average" || name == "SASP") return ShadowMode::StrongAverage;
  throw ArgumentError("unknown shadowing mode '" + name + "'");
}

ShadowingResult evaluate_shadow(const MapSequence& seq, const PseudoOrbit& po, const PointId& z, ShadowMode mode,
                                std::optional<std::size_t> tail_start) {
  if (po.points.empty()) throw ArgumentError("empty pseudo-orbit");
  const Space& space = seq.space();
  const std::size_t T = po.horizon();
  ShadowingResult r;
  r.tail_start = resolve_tail(T, tail_start);
  r.shadow_point = z;
  r.error_profile.reserve(T + 1);
  PointId y = z;
  for (std::size_t n = 0; n <= T; ++n) {
    if (n > 0) y = seq.generator(n, y);
    r.error_profile.push_back(space.dist(y, po.points[n]));
  }
  const auto& e = r.error_profile;
  r.initial_closeness = e[0];
  double sum = 0.0;
  const std::size_t lo = std::max<std::size_t>(r.tail_start, 1);
  for (std::size_t n = 0; n <= T; ++n) {
    r.max_error = std::max(r.max_error, e[n]);
    if (n >= r.tail_start) r.tail_error = std::max(r.tail_error, e[n]);
    sum += e[n];
    if (n + 1 >= lo) r.cesaro_error = std::max(r.cesaro_error, sum / static_cast<double>(n + 1));
  }
  switch (mode) {
    case ShadowMode::Plain: r.functional = r.max_error; break;
    case ShadowMode::Almost: r.functional = std::max(r.initial_closeness, r.tail_error); break;
    case ShadowMode::Average: r.functional = r.cesaro_error; break;
    case ShadowMode::StrongAverage: r.functional = std::max(r.initial_closeness, r.cesaro_error); break;
  }
  return r;
}

ShadowingResult find_shadow_point(const MapSequence& seq, const PseudoOrbit& po, double eps, ShadowMode mode,
                                  const ShadowSearchOptions& opt) {
  if (po.points.empty()) throw ArgumentError("empty pseudo-orbit");
  const Space& space = seq.space();
  const bool exhaustive = opt.candidates.empty();
  const std::size_t count = exhaustive ? space.size() : opt.candidates.size();
  auto candidate = [&](std::size_t i) { return exhaustive ? space.point(i) : opt.candidates[i]; };
  const std::size_t ts = resolve_tail(po.horizon(), opt.tail_start);
  const double bar = eps - kTol;

  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(blocks);
  parallel_for(blocks, opt.jobs, [&](std::size_t b) {
    BlockResult& br = results[b];
    for (std::size_t i = b * kBlock; i < std::min(count, (b + 1) * kBlock); ++i) {
      const double cutoff = std::max(br.best, bar);
      const double f = functional_of(seq, po, candidate(i), mode, ts, cutoff, false);
      if (f <= bar) ++br.qualifying;
      if (f < br.best) {
        br.best = f;
        br.best_index = i;
      }
    }
  });
  BlockResult total;
  for (const auto& br : results) {
    total.qualifying += br.qualifying;
    if (br.best < total.best) {
      total.best = br.best;
      total.best_index = br.best_index;
    }
  }

  ShadowingResult r;
  if (count == 0) {
    r.failed_clause = "no candidates";
    return r;
  }
  r = evaluate_shadow(seq, po, candidate(total.best_index), mode, opt.tail_start);
  r.qualifying = total.qualifying;
  r.success = strictly_below(r.functional, eps);
  r.exhaustive = exhaustive;
  r.unique = exhaustive && total.qualifying == 1;
  if (!r.success) {
    if (uses_initial(mode)) {
      bool tail_ok = false;
      for (std::size_t i = 0; i < count && !tail_ok; ++i) {
        tail_ok = functional_of(seq, po, candidate(i), mode, ts, bar, true) <= bar;
      }
      r.failed_clause = tail_ok ? "initial closeness" : (uses_cesaro(mode) ? "tail average" : "tail");
    } else {
      r.failed_clause = mode == ShadowMode::Plain ? "max error" : "tail average";
    }
  }
  return r;
}

Verdict check_shadowing_property(const MapSequence& seq, const ShadowingOptions& opt, std::vector<ShadowRow>* rows) {
  if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ArgumentError("eps must lie in (0,1)");
  if (opt.horizon == 0 || opt.sample == 0) throw ArgumentError("shadowing check needs horizon and sample > 0");
  for (std::size_t i = 1; i < opt.delta_grid.size(); ++i) {
    if (!(opt.delta_grid[i] < opt.delta_grid[i - 1])) throw ArgumentError("delta grid must be strictly descending");
  }
  const Space& space = seq.space();
  const double mu = separation_floor(space);
  const std::size_t T = opt.horizon;
  const std::size_t n_delta = opt.n_delta.value_or(std::max<std::size_t>(1, T / 10));
  const bool average_kind = uses_cesaro(opt.mode);

  Verdict v;
  v.checker = "shadowing_" + to_string(opt.mode);
  v.horizon = T;
  v.resolution = space.resolution();
  v.exhaustive = false;
  v.seed = opt.seed;
  v.holds = false;

  struct Sample {
    PseudoOrbit po;
    ShadowingResult res;
  };
  std::optional<Witness> last_failure;
  bool tested = false;
  for (std::size_t di = 0; di < opt.delta_grid.size(); ++di) {
    const double delta = opt.delta_grid[di];
    if (delta <= mu + kTol) {
      v.notes.push_back("delta " + fmt(delta) + " skipped: not above the minimum pair distance");
      continue;
    }
    tested = true;
    std::vector<Sample> samples(opt.sample);
    parallel_for(opt.sample, opt.jobs, [&](std::size_t s) {
      std::seed_seq ss{opt.seed, static_cast<std::uint64_t>(di), static_cast<std::uint64_t>(s)};
      std::mt19937_64 rng(ss);
      std::uniform_int_distribution<std::size_t> start(0, space.size() - 1);
      const PointId x = space.point(start(rng));
      const std::uint64_t orbit_seed = rng();
      Sample& out = samples[s];
      out.po = average_kind ? average_pseudo_orbit(seq, x, T, delta, n_delta, orbit_seed)
                            : perturbed_orbit(seq, x, T, delta, orbit_seed);
      ShadowSearchOptions so;
      so.tail_start = opt.tail_start;
      so.jobs = 1;
      out.res = find_shadow_point(seq, out.po, opt.eps, opt.mode, so);
    });
    bool all_ok = true;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto& r = samples[s].res;
      if (rows) {
        rows->push_back({delta, s, r.success, r.max_error, r.tail_error, r.cesaro_error,
                         r.shadow_point ? space.describe(*r.shadow_point) : ""});
      }
      if (!r.success && all_ok) {
        all_ok = false;
        Witness w;
        w.points = samples[s].po.points;
        w.index = s;
        w.value = r.functional;
        w.note = "delta " + fmt(delta) + ": sample " + std::to_string(s) + " not " + fmt(opt.eps) +
                 "-shadowed (failed clause: " + r.failed_clause + ", best functional " + fmt(r.functional) + ")";
        last_failure = w;
      }
    }
    if (all_ok) {
      v.holds = true;
      v.constant = delta;
      v.witness.reset();
      return v;
    }
  }
  if (!tested) v.notes.push_back("no delta above the minimum pair distance; nothing tested");
  v.witness = last_failure;
  return v;
}

Verdict check_iterate_alsp_consistency(const MapSequence& seq, std::size_t k, const ShadowingOptions& opt,
                                       const std::optional<Verdict>& equicontinuity) {
  if (!equicontinuity || equicontinuity->checker != "equicontinuity") {
    throw ArgumentError("iterate consistency needs an equicontinuity verdict for the system");
  }
  if (!equicontinuity->holds) throw ArgumentError("iterate consistency requires an equicontinuous system");
  if (k == 0) throw ArgumentError("k must be positive");
  ShadowingOptions base = opt;
  base.mode = ShadowMode::Almost;
  const Verdict a = check_shadowing_property(seq, base);
  ShadowingOptions it = base;
  it.horizon = std::max<std::size_t>(1, base.horizon / k);
  if (base.tail_start) it.tail_start = *base.tail_start / k;
  const Verdict b = check_shadowing_property(iterate_system(seq, k), it);

  Verdict v;
  v.checker = "iterate_alsp_consistency";
  v.horizon = base.horizon;
  v.resolution = seq.space().resolution();
  v.seed = opt.seed;
  v.holds = a.holds == b.holds;
  v.notes.push_back(std::string("system ALSP ") + (a.holds ? "holds" : "fails") +
                    (a.constant ? " (delta " + fmt(*a.constant) + ")" : ""));
  v.notes.push_back("iterate k=" + std::to_string(k) + " ALSP " + (b.holds ? "holds" : "fails") +
                    (b.constant ? " (delta " + fmt(*b.constant) + ")" : ""));
  if (!v.holds) v.witness = a.holds ? b.witness : a.witness;
  return v;
}

void write_shadowing_csv(std::ostream& out, const std::vector<ShadowRow>& rows) {
  out << "delta,sample_id,success,max_error,tail_error,cesaro_error,shadow_point\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.delta << ',' << r.sample_id << ',' << (r.success ? 1 : 0) << ',' << r.max_error << ',' << r.tail_error
        << ',' << r.cesaro_error << ",\"" << r.shadow_point << "\"\n";
  }
}

}  // namespace nas
