#include "nas/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace nas {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key), "missing");
  return *it;
}

std::int64_t get_int(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace

double get_real(const Json& j, const std::string& key, const std::string& path, double lo, double hi) {
  const Json& v = field(j, key, path);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < lo || x > hi) {
    throw ConfigError(join(path, key), "value " + v.dump() + " outside [" + Json(lo).dump() + ", " + Json(hi).dump() + "]");
  }
  return x;
}

std::size_t get_count(const Json& j, const std::string& key, const std::string& path, std::size_t lo,
                      std::size_t hi) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  const auto x = v.get<std::size_t>();
  if (x < lo || x > hi) {
    throw ConfigError(join(path, key), "value " + v.dump() + " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
  return x;
}

std::string get_string(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

Space space_from_json(const Json& j, const std::string& path) {
  const std::string kind = get_string(j, "kind", path);
  constexpr std::size_t kMaxPoints = 1u << 20;
  try {
    if (kind == "IntervalGrid" || kind == "LineWindow") {
      const double a = get_real(j, "a", path, -1e6, 1e6);
      const double b = get_real(j, "b", path, -1e6, 1e6);
      if (!(a < b)) throw ConfigError(join(path, "b"), "must exceed a");
      const std::size_t n = get_count(j, "n", path, 2, kMaxPoints);
      return kind == "IntervalGrid" ? Space::interval_grid(a, b, n) : Space::line_window(a, b, n);
    }
    if (kind == "CircleGrid") return Space::circle_grid(get_count(j, "n", path, 2, kMaxPoints));
    if (kind == "CyclicWordSpace") return Space::cyclic_words(get_count(j, "length", path, 1, 20));
    if (kind == "SuccessorSet") return Space::successor_set(get_count(j, "m", path, 2, 100000));
    if (kind == "Product") {
      const Space l = space_from_json(field(j, "left", path), join(path, "left"));
      const Space r = space_from_json(field(j, "right", path), join(path, "right"));
      return Space::product(l, r);
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"), "unknown space kind '" + kind + "'");
}

Json space_to_json(const Space& space) {
  Json j;
  j["kind"] = to_string(space.kind());
  switch (space.kind()) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow:
      j["a"] = space.lower();
      j["b"] = space.upper();
      j["n"] = space.count_param();
      break;
    case SpaceKind::CircleGrid: j["n"] = space.count_param(); break;
    case SpaceKind::CyclicWordSpace: j["length"] = space.count_param(); break;
    case SpaceKind::SuccessorSet: j["m"] = space.count_param(); break;
    case SpaceKind::Product:
      j["left"] = space_to_json(space.left());
      j["right"] = space_to_json(space.right());
      break;
  }
  j["points"] = space.size();
  j["resolution"] = space.resolution();
  return j;
}

MapPrimitive primitive_from_json(const Json& j, const Space& space, const std::string& path) {
  const std::string kind = get_string(j, "kind", path);
  if (kind == "Identity") return MapPrimitive::identity();
  if (kind == "Tent") return MapPrimitive::tent();
  if (kind == "Affine" || kind == "AffineMod1") {
    const double a = get_real(j, "a", path, -1e6, 1e6);
    const double b = j.contains("b") ? get_real(j, "b", path, -1e6, 1e6) : 0.0;
    return kind == "Affine" ? MapPrimitive::affine(a, b) : MapPrimitive::affine_mod1(a, b);
  }
  if (kind == "CyclicShift") return MapPrimitive::cyclic_shift(j.contains("e") ? get_int(j, "e", path) : 1);
  if (kind == "Successor") return MapPrimitive::successor(j.contains("e") ? get_int(j, "e", path) : 1);
  if (kind == "Constant") {
    if (j.contains("ordinal")) {
      return MapPrimitive::constant(space, space.point(get_count(j, "ordinal", path, 0, space.size() - 1)));
    }
    try {
      return MapPrimitive::constant(space, space.nearest(get_real(j, "at", path, -1e6, 1e6)));
    } catch (const DomainError& e) {
      throw ConfigError(join(path, "at"), e.what());
    }
  }
  throw ConfigError(join(path, "kind"), "unknown map kind '" + kind + "'");
}

namespace {

struct SystemBuilder {
  const Json& systems;
  const Space& space;
  const std::string& path;
  std::map<std::string, MapSequence> done;
  std::set<std::string> active;

  const MapSequence& get(const std::string& name, const std::string& from) {
    if (auto it = done.find(name); it != done.end()) return it->second;
    if (!systems.contains(name)) throw ConfigError(from, "unknown system '" + name + "'");
    if (!active.insert(name).second) throw ConfigError(from, "cyclic reference through '" + name + "'");
    MapSequence seq = build(systems.at(name), join(path, name));
    active.erase(name);
    return done.emplace(name, std::move(seq)).first->second;
  }

  MapSequence build(const Json& j, const std::string& p) {
    if (!j.is_object()) throw ConfigError(p, "expected an object");
    const Space own = j.contains("space") ? space_from_json(j.at("space"), join(p, "space")) : space;
    const std::string type = get_string(j, "type", p);
    try {
      MapSequence seq = [&]() -> MapSequence {
        if (type == "autonomous") {
          return MapSequence::autonomous(own, primitive_from_json(field(j, "map", p), own, join(p, "map")));
        }
        if (type == "periodic") {
          const Json& maps = field(j, "maps", p);
          if (!maps.is_array() || maps.empty()) throw ConfigError(join(p, "maps"), "expected a non-empty array");
          std::vector<MapPrimitive> prims;
          for (std::size_t i = 0; i < maps.size(); ++i) {
            prims.push_back(primitive_from_json(maps[i], own, join(p, "maps[" + std::to_string(i) + "]")));
          }
          return MapSequence::periodic(own, std::move(prims));
        }
        if (type == "pattern") {
          const MapPrimitive base = primitive_from_json(field(j, "base", p), own, join(p, "base"));
          const Json& rule = field(j, "rule", p);
          if (rule.is_string()) return MapSequence::pattern_word(own, base, ExponentRule::named(rule.get<std::string>()));
          const Json& ex = field(rule, "exponents", join(p, "rule"));
          if (!ex.is_array() || ex.empty()) throw ConfigError(join(p, "rule.exponents"), "expected a non-empty array");
          std::vector<std::int64_t> exps;
          for (const auto& e : ex) {
            if (!e.is_number_integer()) throw ConfigError(join(p, "rule.exponents"), "expected integers");
            exps.push_back(e.get<std::int64_t>());
          }
          const bool repeat = rule.value("repeat", true);
          return MapSequence::pattern_word(own, base, ExponentRule::explicit_list(std::move(exps), repeat));
        }
        if (type == "iterate") {
          const MapSequence& of = get(get_string(j, "of", p), join(p, "of"));
          return iterate_system(of, get_count(j, "k", p, 1, 1 << 16));
        }
        if (type == "product") {
          const MapSequence& l = get(get_string(j, "left", p), join(p, "left"));
          const MapSequence& r = get(get_string(j, "right", p), join(p, "right"));
          return product_system(l, r);
        }
        throw ConfigError(join(p, "type"), "unknown system type '" + type + "'");
      }();
      if (j.value("commutative", false)) seq = seq.claim_commutative();
      return seq;
    } catch (const ArgumentError& e) {
      throw ConfigError(p, e.what());
    } catch (const DomainError& e) {
      throw ConfigError(p, e.what());
    }
  }
};

}  // namespace

std::map<std::string, MapSequence> systems_from_json(const Json& systems, const Space& space,
                                                     const std::string& path) {
  if (!systems.is_object() || systems.empty()) throw ConfigError(path, "expected a non-empty object");
  SystemBuilder b{systems, space, path, {}, {}};
  for (const auto& [name, _] : systems.items()) b.get(name, path);
  return std::move(b.done);
}

Json point_to_json(const Space& space, const PointId& p) { return space.describe(p); }

Json verdict_to_json(const Verdict& v, const Space& space) {
  Json j;
  j["checker"] = v.checker;
  j["holds"] = v.holds;
  j["constant"] = v.constant ? Json(*v.constant) : Json(nullptr);
  j["horizon"] = v.horizon;
  j["horizon_exact"] = v.horizon_exact;
  j["resolution"] = v.resolution;
  j["exhaustive"] = v.exhaustive;
  j["seed"] = v.seed ? Json(*v.seed) : Json(nullptr);
  if (v.witness) {
    const Witness& w = *v.witness;
    Json wj;
    Json pts = Json::array();
    for (const auto& p : w.points) pts.push_back(point_to_json(space, p));
    // long pseudo-orbit witnesses are summarised by their length
    if (w.points.size() > 64) {
      wj["points_count"] = w.points.size();
    } else {
      wj["points"] = pts;
    }
    if (w.index) wj["index"] = *w.index;
    if (w.window_n) wj["window_n"] = *w.window_n;
    if (w.window_k) wj["window_k"] = *w.window_k;
    if (w.value) wj["value"] = *w.value;
    wj["note"] = w.note;
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  j["notes"] = v.notes;
  return j;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const Json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

}  // namespace nas
