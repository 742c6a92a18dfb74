#include "nas/dyn_props.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "nas/parallel.hpp"

namespace nas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Best (smallest) candidate of one row of the pair scan.
struct RowBest {
  double value = kInf;
  std::size_t j = 0;
  std::size_t n = 0;
};

bool better(const RowBest& cand, std::size_t ci, const RowBest& best, std::size_t bi) {
  if (cand.value != best.value) return cand.value < best.value;
  return ci < bi;
}

Verdict base_verdict(const char* name, const MapSequence& seq, std::size_t horizon) {
  Verdict v;
  v.checker = name;
  v.horizon = horizon;
  v.resolution = seq.space().resolution();
  v.exhaustive = true;
  return v;
}

enum class Separation { Full, Tail, Cesaro };

Verdict separation_scan(const char* name, const MapSequence& seq, std::size_t horizon, std::size_t tail,
                        Separation mode, std::size_t jobs) {
  const Space& space = seq.space();
  Verdict v = base_verdict(name, seq, horizon);
  const std::size_t N = space.size();
  if (N < 2) {
    v.holds = false;
    v.notes.push_back("fewer than two points; no pair to separate");
    return v;
  }
  const OrbitTable orbits = orbit_table(seq, horizon);
  const std::size_t lo = mode == Separation::Full ? 0 : (mode == Separation::Tail ? tail : std::max<std::size_t>(tail, 1));

  std::vector<RowBest> rows(N);
  parallel_for(N - 1, jobs, [&](std::size_t i) {
    RowBest best;
    for (std::size_t j = i + 1; j < N; ++j) {
      double top = -1.0;
      std::size_t arg = 0;
      if (mode == Separation::Cesaro) {
        double sum = 0.0;
        for (std::size_t n = 1; n <= horizon; ++n) {
          sum += space.dist(orbits.at(i, n - 1), orbits.at(j, n - 1));
          if (n < lo) continue;
          const double avg = sum / static_cast<double>(n);
          if (avg > top) {
            top = avg;
            arg = n;
            if (top > best.value) break;
          }
        }
      } else {
        for (std::size_t n = lo; n <= horizon; ++n) {
          const double d = space.dist(orbits.at(i, n), orbits.at(j, n));
          if (d > top) {
            top = d;
            arg = n;
            if (top > best.value) break;
          }
        }
      }
      if (top < best.value) best = RowBest{top, j, arg};
    }
    rows[i] = best;
  });

  std::size_t bi = 0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    if (better(rows[i], i, rows[bi], bi)) bi = i;
  }
  const RowBest& b = rows[bi];
  v.constant = b.value;
  v.holds = b.value > separation_floor(space) + kTol;
  Witness w;
  w.points = {space.point(bi), space.point(b.j)};
  w.index = b.n;
  w.value = b.value;
  w.note = v.holds ? "closest-separating pair" : "pair never separated beyond the minimum pair distance";
  v.witness = w;
  if (mode != Separation::Full) {
    v.notes.push_back("window [" + std::to_string(lo) + ", " + std::to_string(horizon) + "]");
  }
  return v;
}

std::size_t default_tail(std::size_t horizon, std::optional<std::size_t> tail_start) {
  const std::size_t t = tail_start.value_or(horizon / 2);
  if (t >= horizon) throw ArgumentError("tail_start must be below the horizon");
  return t;
}

}  // namespace

double separation_floor(const Space& space) { return space.min_separation(); }

Verdict check_equicontinuity(const MapSequence& seq, double eps, std::size_t horizon, std::size_t jobs) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in (0,1)");
  const Space& space = seq.space();
  const std::size_t span = seq.index_span(horizon);
  Verdict v = base_verdict("equicontinuity", seq, span);
  v.horizon_exact = seq.period().has_value();
  const std::size_t N = space.size();

  std::vector<std::vector<PointId>> images(span, std::vector<PointId>(N));
  parallel_for(span, jobs, [&](std::size_t t) {
    for (std::size_t o = 0; o < N; ++o) images[t][o] = seq.generator(t + 1, space.point(o));
  });

  std::vector<RowBest> rows(N);
  parallel_for(N, jobs, [&](std::size_t i) {
    RowBest best;
    const PointId x = space.point(i);
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d = space.dist(x, space.point(j));
      if (d >= best.value) continue;
      for (std::size_t t = 0; t < span; ++t) {
        if (!strictly_below(space.dist(images[t][i], images[t][j]), eps)) {
          best = RowBest{d, j, t + 1};
          break;
        }
      }
    }
    rows[i] = best;
  });
  std::size_t bi = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (better(rows[i], i, rows[bi], bi)) bi = i;
  }
  if (N < 2 || rows[bi].value == kInf) {
    v.constant = space.diameter();
    v.holds = true;
    v.notes.push_back("no violating pair; every delta works");
  } else {
    const RowBest& b = rows[bi];
    v.constant = b.value;
    v.holds = b.value > separation_floor(space) + kTol;
    Witness w;
    w.points = {space.point(bi), space.point(b.j)};
    w.index = b.n;
    w.value = b.value;
    w.note = "closest pair pushed to distance >= eps by generator " + std::to_string(b.n);
    v.witness = w;
  }
  if (!v.horizon_exact) v.notes.push_back("aperiodic system: generator indices checked up to " + std::to_string(span));
  return v;
}

Verdict check_mean_equicontinuity(const MapSequence& seq, const MeanEquicontinuityOptions& opt) {
  if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ArgumentError("eps must lie in (0,1)");
  if (opt.trials == 0 || opt.length == 0) throw ArgumentError("mean equicontinuity needs trials and length > 0");
  const Space& space = seq.space();
  const std::size_t span = seq.index_span(opt.horizon);
  const double mu = separation_floor(space);
  const double eps = opt.eps;
  const std::size_t T = opt.length;

  struct Trial {
    double input = 0.0;   // max_n of the input averages
    double pushed = 0.0;  // max_{j,n} of the pushed averages
    std::size_t j = 0;
    std::vector<PointId> xs, ys;
  };
  std::vector<Trial> trials(opt.trials);
  parallel_for(opt.trials, opt.jobs, [&](std::size_t t) {
    std::seed_seq ss{opt.seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(ss);
    std::uniform_int_distribution<std::size_t> any(0, space.size() - 1);
    const double frac = opt.trials == 1 ? 0.5 : static_cast<double>(t) / static_cast<double>(opt.trials - 1);
    const double budget = mu + (2.0 * eps - mu) * frac;
    Trial& tr = trials[t];
    tr.xs.resize(T);
    tr.ys.resize(T);
    double sum = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
      tr.xs[i] = space.point(any(rng));
      const auto ball = space.ball(tr.xs[i], budget);
      std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
      tr.ys[i] = ball[pick(rng)];
      sum += space.dist(tr.xs[i], tr.ys[i]);
      tr.input = std::max(tr.input, sum / static_cast<double>(i + 1));
    }
    for (std::size_t j = 1; j <= span; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < T; ++i) {
        s += space.dist(seq.generator(j, tr.xs[i]), seq.generator(j, tr.ys[i]));
        const double avg = s / static_cast<double>(i + 1);
        if (avg > tr.pushed) {
          tr.pushed = avg;
          tr.j = j;
        }
      }
    }
  });

  Verdict v;
  v.checker = "mean_equicontinuity";
  v.horizon = span;
  v.resolution = space.resolution();
  v.exhaustive = false;
  v.horizon_exact = seq.period().has_value();
  v.seed = opt.seed;
  double delta = eps;
  std::optional<std::size_t> worst;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    if (!strictly_below(trials[t].pushed, eps) && trials[t].input < delta) {
      delta = trials[t].input;
      worst = t;
    }
  }
  v.constant = delta;
  v.holds = delta > mu + kTol;
  if (worst) {
    const Trial& tr = trials[*worst];
    Witness w;
    w.points = {tr.xs.front(), tr.ys.front()};
    w.index = tr.j;
    w.window_k = *worst;
    w.value = tr.input;
    w.note = "trial " + std::to_string(*worst) + ": input averages stay below " + std::to_string(tr.input) +
             " but generator " + std::to_string(tr.j) + " pushes an average to " + std::to_string(tr.pushed);
    v.witness = w;
  }
  v.notes.push_back(std::to_string(opt.trials) + " sampled sequence pairs of length " + std::to_string(T));
  if (!v.horizon_exact) v.notes.push_back("aperiodic system: generator indices checked up to " + std::to_string(span));
  return v;
}

Verdict estimate_expansivity(const MapSequence& seq, std::size_t horizon, std::size_t jobs) {
  return separation_scan("expansivity", seq, horizon, 0, Separation::Full, jobs);
}

Verdict estimate_recurrent_expansivity(const MapSequence& seq, std::size_t horizon,
                                       std::optional<std::size_t> tail_start, std::size_t jobs) {
  return separation_scan("recurrent_expansivity", seq, horizon, default_tail(horizon, tail_start), Separation::Tail,
                         jobs);
}

Verdict estimate_mean_expansivity(const MapSequence& seq, std::size_t horizon, std::optional<std::size_t> tail_start,
                                  std::size_t jobs) {
  return separation_scan("mean_expansivity", seq, horizon, default_tail(horizon, tail_start), Separation::Cesaro,
                         jobs);
}

}  // namespace nas
