#include "nas/chain.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nas/dyn_props.hpp"
#include "nas/parallel.hpp"

namespace nas {
namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t class_count(const MapSequence& seq, const std::optional<std::size_t>& horizon) {
  if (auto p = seq.period()) return *p;
  if (!horizon || *horizon == 0) {
    throw ArgumentError("aperiodic system: pass a horizon to truncate the time classes");
  }
  return *horizon;
}

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

// Layered delta-chain reachability from `source`, all classes advanced in
// lockstep. Calls visit(n, common) with the set reachable at length n from
// every class.
template <class Visit>
void layered_reach(const std::vector<ChainGraph>& graphs, std::size_t source, std::size_t max_len, Visit&& visit) {
  const std::size_t P = graphs.size();
  const std::size_t W = graphs.front().words;
  const std::size_t N = graphs.front().points;
  std::vector<Bits> layer(P, Bits(W, 0));
  for (auto& l : layer) set_bit(l, source);
  Bits next(W), common(W);
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::fill(common.begin(), common.end(), ~std::uint64_t{0});
    for (std::size_t c = 0; c < P; ++c) {
      const ChainGraph& g = graphs[(c + n - 1) % P];
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t w = 0; w < W; ++w) {
        std::uint64_t word = layer[c][w];
        while (word) {
          const std::size_t u = w * 64 + static_cast<std::size_t>(__builtin_ctzll(word));
          word &= word - 1;
          const std::uint64_t* r = g.row(u);
          for (std::size_t k = 0; k < W; ++k) next[k] |= r[k];
        }
      }
      layer[c].swap(next);
      for (std::size_t k = 0; k < W; ++k) common[k] &= layer[c][k];
    }
    if (N % 64) common[W - 1] &= (std::uint64_t{1} << (N % 64)) - 1;
    if (!visit(n, common)) return;
  }
}

// Whether class c alone reaches `target` from `source` within max_len steps.
bool class_reaches(const std::vector<ChainGraph>& graphs, std::size_t c, std::size_t source, std::size_t target,
                   std::size_t max_len) {
  const std::size_t P = graphs.size();
  const std::size_t W = graphs.front().words;
  Bits layer(W, 0), next(W);
  set_bit(layer, source);
  for (std::size_t n = 1; n <= max_len; ++n) {
    const ChainGraph& g = graphs[(c + n - 1) % P];
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t u = 0; u < g.points; ++u) {
      if (!test_bit(layer, u)) continue;
      for (std::size_t k = 0; k < W; ++k) next[k] |= g.row(u)[k];
    }
    layer.swap(next);
    if (test_bit(layer, target)) return true;
  }
  return false;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ChainGraph> build_chain_graphs(const MapSequence& seq, double delta, const ChainOptions& opt) {
  const Space& space = seq.space();
  if (!(delta > space.resolution())) throw ArgumentError("delta must exceed the grid resolution");
  const std::size_t P = class_count(seq, opt.horizon);
  const std::size_t N = space.size();
  std::vector<ChainGraph> graphs(P);
  parallel_for(P, opt.jobs, [&](std::size_t c) {
    ChainGraph& g = graphs[c];
    g.delta = delta;
    g.time_class = c + 1;
    g.points = N;
    g.words = (N + 63) / 64;
    g.bits.assign(N * g.words, 0);
    for (std::size_t u = 0; u < N; ++u) {
      const PointId image = seq.generator(c + 1, space.point(u));
      for (const PointId& p : space.ball(image, delta)) {
        if (auto o = space.ordinal(p)) g.bits[u * g.words + *o / 64] |= std::uint64_t{1} << (*o % 64);
      }
    }
  });
  return graphs;
}

Verdict check_R_delta(const MapSequence& seq, const PointId& x, const PointId& y, double delta,
                      const ChainOptions& opt) {
  const Space& space = seq.space();
  const auto xo = space.ordinal(x);
  const auto yo = space.ordinal(y);
  if (!xo || !yo) throw DomainError("chain endpoints must be enumerated points");
  const auto graphs = build_chain_graphs(seq, delta, opt);
  const std::size_t P = graphs.size();
  const std::size_t L = opt.max_length.value_or(space.size() * P);

  Verdict v;
  v.checker = "R_delta";
  v.horizon = L;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = seq.period().has_value();
  v.holds = false;
  layered_reach(graphs, *xo, L, [&](std::size_t n, const Bits& common) {
    if (test_bit(common, *yo)) {
      v.holds = true;
      v.constant = static_cast<double>(n);
      return false;
    }
    return true;
  });
  if (!v.holds) {
    Witness w;
    w.points = {x, y};
    w.value = delta;
    w.note = "every class reaches y, but at no common chain length <= " + std::to_string(L);
    for (std::size_t c = 0; c < P; ++c) {
      if (!class_reaches(graphs, c, *xo, *yo, L)) {
        w.index = c + 1;
        w.note = "y unreachable from x when starting at time class " + std::to_string(c + 1);
        break;
      }
    }
    v.witness = w;
  }
  return v;
}

Verdict check_chain_transitive(const MapSequence& seq, const std::vector<double>& delta_grid,
                               const ChainOptions& opt) {
  const Space& space = seq.space();
  const std::size_t N = space.size();
  const double mu = separation_floor(space);
  Verdict v;
  v.checker = "chain_transitivity";
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = seq.period().has_value();
  v.holds = true;
  if (!v.horizon_exact) v.notes.push_back("aperiodic system treated as its periodic truncation");
  bool tested = false;
  for (double delta : delta_grid) {
    if (delta <= mu + kTol) {
      v.notes.push_back("delta " + fmt(delta) + " skipped: not above the minimum pair distance");
      continue;
    }
    tested = true;
    const auto graphs = build_chain_graphs(seq, delta, opt);
    const std::size_t L = opt.max_length.value_or(N * graphs.size());
    v.horizon = L;
    // per source: first unreachable target, and the longest uniform length used
    std::vector<std::optional<std::size_t>> missing(N);
    std::vector<std::size_t> longest(N, 0);
    parallel_for(N, opt.jobs, [&](std::size_t x) {
      Bits found((N + 63) / 64, 0);
      std::size_t remaining = N;
      layered_reach(graphs, x, L, [&](std::size_t n, const Bits& common) {
        for (std::size_t w = 0; w < common.size(); ++w) {
          std::uint64_t fresh = common[w] & ~found[w];
          if (fresh) {
            found[w] |= fresh;
            remaining -= static_cast<std::size_t>(__builtin_popcountll(fresh));
            longest[x] = n;
          }
        }
        return remaining > 0;
      });
      for (std::size_t y = 0; y < N; ++y) {
        if (!test_bit(found, y)) {
          missing[x] = y;
          break;
        }
      }
    });
    for (std::size_t x = 0; x < N; ++x) {
      if (missing[x]) {
        v.holds = false;
        Witness w;
        w.points = {space.point(x), space.point(*missing[x])};
        w.value = delta;
        w.note = "no uniform delta-chain of length <= " + std::to_string(L) + " at delta " + fmt(delta);
        v.witness = w;
        return v;
      }
    }
    v.constant = delta;
    const std::size_t used = *std::max_element(longest.begin(), longest.end());
    v.notes.push_back("delta " + fmt(delta) + ": uniform chains of length <= " + std::to_string(used));
  }
  if (!tested) {
    v.holds = false;
    v.notes.push_back("no delta above the minimum pair distance; nothing tested");
    Witness w;
    if (N >= 2) w.points = {space.point(0), space.point(1)};
    w.note = "every delta of the grid is at or below the minimum pair distance";
    v.witness = w;
  }
  return v;
}

Verdict check_transitive(const MapSequence& seq, const std::vector<double>& eps_grid, std::size_t horizon,
                         std::size_t jobs) {
  const Space& space = seq.space();
  const std::size_t N = space.size();
  const std::size_t W = (N + 63) / 64;
  const std::size_t P = seq.period().value_or(horizon);
  Verdict v;
  v.checker = "transitivity";
  v.horizon = horizon;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = seq.period().has_value();
  v.holds = true;
  if (!v.horizon_exact) v.notes.push_back("aperiodic system: time classes checked up to " + std::to_string(P));
  for (double eps : eps_grid) {
    // centers met by a point: enumerated v with d(w, v) < eps
    auto hits_of = [&](const PointId& w, Bits& into) {
      for (const PointId& p : space.ball(w, eps)) {
        if (auto o = space.ordinal(p)) set_bit(into, *o);
      }
    };
    std::vector<std::optional<std::size_t>> missing(N);
    parallel_for(N, jobs, [&](std::size_t u) {
      // hit[n-1] = centers V met by F_[i,i+n-1](U) for every class i
      std::vector<Bits> common(horizon, Bits(W, ~std::uint64_t{0}));
      const auto ball = space.ball(space.point(u), eps);
      for (std::size_t c = 1; c <= P; ++c) {
        std::set<PointId> image(ball.begin(), ball.end());
        for (std::size_t n = 1; n <= horizon; ++n) {
          std::set<PointId> next;
          for (const auto& z : image) next.insert(seq.generator(c + n - 1, z));
          image.swap(next);
          Bits hit(W, 0);
          for (const auto& z : image) hits_of(z, hit);
          for (std::size_t k = 0; k < W; ++k) common[n - 1][k] &= hit[k];
        }
      }
      Bits any(W, 0);
      for (const auto& b : common)
        for (std::size_t k = 0; k < W; ++k) any[k] |= b[k];
      for (std::size_t t = 0; t < N; ++t) {
        if (!test_bit(any, t)) {
          missing[u] = t;
          break;
        }
      }
    });
    for (std::size_t u = 0; u < N; ++u) {
      if (missing[u]) {
        v.holds = false;
        Witness w;
        w.points = {space.point(u), space.point(*missing[u])};
        w.value = eps;
        w.note = "ball images around the first point never meet the ball around the second uniformly in time, eps " +
                 fmt(eps);
        v.witness = w;
        return v;
      }
    }
    v.constant = eps;
  }
  return v;
}

}  // namespace nas
