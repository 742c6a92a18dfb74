#include "nas/orbits.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace nas {
namespace {

PointId pick(const std::vector<PointId>& ball, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> idx(0, ball.size() - 1);
  return ball[idx(rng)];
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(OrbitKind kind) { return kind == OrbitKind::Plain ? "Plain" : "Average"; }

PseudoOrbit true_orbit(const MapSequence& seq, const PointId& x, std::size_t T) {
  if (!seq.space().contains(x)) throw DomainError("point not in " + seq.space().name());
  PseudoOrbit po;
  po.points.reserve(T + 1);
  po.points.push_back(x);
  for (std::size_t i = 1; i <= T; ++i) po.points.push_back(seq.generator(i, po.points.back()));
  po.delta = 2.0 * seq.space().resolution();
  po.source = "true orbit";
  return po;
}

PseudoOrbit perturbed_orbit(const MapSequence& seq, const PointId& x, std::size_t T, double delta,
                            std::uint64_t seed) {
  const Space& space = seq.space();
  if (!(delta > space.resolution())) {
    throw ArgumentError("delta " + fmt(delta) + " does not exceed the grid resolution " + fmt(space.resolution()));
  }
  if (!space.contains(x)) throw DomainError("point not in " + space.name());
  std::mt19937_64 rng(seed);
  PseudoOrbit po;
  po.points.reserve(T + 1);
  po.points.push_back(x);
  for (std::size_t i = 1; i <= T; ++i) {
    const PointId image = seq.generator(i, po.points.back());
    const auto ball = space.ball(image, delta);
    if (ball.empty()) {
      throw DomainError("no model point within " + fmt(delta) + " of " + space.describe(image) +
                        "; need delta > " + fmt(space.min_separation()));
    }
    po.points.push_back(pick(ball, rng));
  }
  po.delta = delta;
  po.source = "noise-perturbed (seed " + std::to_string(seed) + ")";
  return po;
}

PseudoOrbit average_pseudo_orbit(const MapSequence& seq, const PointId& x, std::size_t T, double delta,
                                 std::size_t n_delta, std::uint64_t seed) {
  const Space& space = seq.space();
  if (n_delta == 0) throw ArgumentError("N_delta must be positive");
  if (!(delta > space.resolution())) {
    throw ArgumentError("delta " + fmt(delta) + " does not exceed the grid resolution " + fmt(space.resolution()));
  }
  if (!space.contains(x)) throw DomainError("point not in " + space.name());
  // Windows of length n hold at most ceil(n/P) jumps; the worst ratio is
  // 2/(P+1) at n = P+1 (or 1/P at n = P when P = 1).
  const double P = static_cast<double>(n_delta);
  const double radius = (n_delta == 1 ? delta : delta * (P + 1.0) / 2.0) * (1.0 - 1e-6);
  std::mt19937_64 rng(seed);
  PseudoOrbit po;
  po.points.reserve(T + 1);
  po.points.push_back(x);
  for (std::size_t i = 1; i <= T; ++i) {
    const PointId image = seq.generator(i, po.points.back());
    po.points.push_back(i % n_delta == 0 ? pick(space.ball(image, radius), rng) : image);
  }
  po.delta = delta;
  po.kind = OrbitKind::Average;
  po.n_delta = n_delta;
  po.source = "average jumps every " + std::to_string(n_delta) + " steps (seed " + std::to_string(seed) + ")";
  return po;
}

std::vector<double> step_errors(const MapSequence& seq, const PseudoOrbit& po) {
  std::vector<double> e;
  if (po.points.size() < 2) return e;
  e.reserve(po.points.size() - 1);
  for (std::size_t i = 0; i + 1 < po.points.size(); ++i) {
    e.push_back(seq.space().dist(seq.generator(i + 1, po.points[i]), po.points[i + 1]));
  }
  return e;
}

Verdict validate_pseudo_orbit(const MapSequence& seq, const PseudoOrbit& po) {
  Verdict v;
  v.checker = po.kind == OrbitKind::Plain ? "pseudo_orbit" : "average_pseudo_orbit";
  v.horizon = po.horizon();
  v.resolution = seq.space().resolution();
  v.exhaustive = true;
  v.holds = true;
  v.constant = po.delta;
  for (const auto& p : po.points) {
    if (!seq.space().contains(p)) {
      v.holds = false;
      v.witness = Witness{{p}, std::nullopt, std::nullopt, std::nullopt, std::nullopt, "point outside the space"};
      return v;
    }
  }
  const auto e = step_errors(seq, po);
  if (po.kind == OrbitKind::Plain) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!strictly_below(e[i], po.delta)) {
        v.holds = false;
        Witness w;
        w.points = {po.points[i], po.points[i + 1]};
        w.index = i;
        w.value = e[i];
        w.note = "step error at index " + std::to_string(i) + " reaches delta";
        v.witness = w;
        return v;
      }
    }
    return v;
  }
  std::vector<double> prefix(e.size() + 1, 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) prefix[i + 1] = prefix[i] + e[i];
  const std::size_t T = e.size();
  for (std::size_t n = std::max<std::size_t>(po.n_delta, 1); n <= T; ++n) {
    for (std::size_t k = 0; k + n <= T; ++k) {
      const double avg = (prefix[k + n] - prefix[k]) / static_cast<double>(n);
      if (!strictly_below(avg, po.delta)) {
        v.holds = false;
        Witness w;
        w.window_n = n;
        w.window_k = k;
        w.value = avg;
        w.note = "window average reaches delta";
        v.witness = w;
        return v;
      }
    }
  }
  if (po.n_delta > T) v.notes.push_back("N_delta exceeds the horizon; no window was checked");
  return v;
}

void write_orbit_csv(std::ostream& out, const Space& space, const PseudoOrbit& po) {
  out << "# delta=" << fmt(po.delta) << " kind=" << to_string(po.kind) << " n_delta=" << po.n_delta << "\n";
  out << "index,a,b,coordinate\n";
  for (std::size_t i = 0; i < po.points.size(); ++i) {
    const PointId& p = po.points[i];
    out << i << ',' << p.a << ',' << p.b << ",\"" << space.describe(p) << "\"\n";
  }
}

PseudoOrbit read_orbit_csv(std::istream& in, const Space& space) {
  PseudoOrbit po;
  po.source = "imported";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "delta") po.delta = std::stod(val);
        if (key == "kind") po.kind = val == "Average" ? OrbitKind::Average : OrbitKind::Plain;
        if (key == "n_delta") po.n_delta = std::stoul(val);
      }
      continue;
    }
    if (line.rfind("index", 0) == 0) continue;
    std::istringstream row(line);
    std::string idx, a, b;
    if (!std::getline(row, idx, ',') || !std::getline(row, a, ',') || !std::getline(row, b, ',')) {
      throw ArgumentError("malformed orbit row: " + line);
    }
    if (std::stoul(idx) != po.points.size()) throw ArgumentError("orbit rows out of order at: " + line);
    const PointId p{std::stoll(a), std::stoll(b)};
    if (!space.contains(p)) throw DomainError("orbit point outside " + space.name() + ": " + line);
    po.points.push_back(p);
  }
  return po;
}

}  // namespace nas
