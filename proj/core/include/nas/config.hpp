#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "nas/map_sequence.hpp"
#include "nas/verdict.hpp"

namespace nas {

using Json = nlohmann::ordered_json;

inline constexpr int kConfigSchema = 1;

/// Malformed or out-of-range configuration; `field` is a dotted path such as
/// "systems.F.base.kind".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"kind": "CircleGrid", "n": 4096}, {"kind": "IntervalGrid", "a": 0, "b": 1, "n": 101},
/// {"kind": "LineWindow", ...}, {"kind": "CyclicWordSpace", "length": 8},
/// {"kind": "SuccessorSet", "m": 12}, {"kind": "Product", "left": {...}, "right": {...}}.
Space space_from_json(const Json& j, const std::string& path = "space");
Json space_to_json(const Space& space);

/// {"kind": "AffineMod1", "a": 2, "b": 0.01}; also Identity, Affine, Tent,
/// CyclicShift/Successor {"e": 1}, Constant {"at": coordinate}.
MapPrimitive primitive_from_json(const Json& j, const Space& space, const std::string& path);

/// Named systems of a config. Each entry is one of
///   {"type": "autonomous", "map": {...}}
///   {"type": "periodic", "maps": [...]}
///   {"type": "pattern", "base": {...}, "rule": "signed_pairs" | {"exponents": [...], "repeat": true}}
///   {"type": "iterate", "of": "F", "k": 2}
///   {"type": "product", "left": "F", "right": "G"}
/// with an optional "space" overriding the top-level one. References may
/// point at any other entry; cycles are rejected.
std::map<std::string, MapSequence> systems_from_json(const Json& systems, const Space& space,
                                                     const std::string& path = "systems");

Json point_to_json(const Space& space, const PointId& p);
Json verdict_to_json(const Verdict& v, const Space& space);

/// Typed field access with range checks; all throw ConfigError.
double get_real(const Json& j, const std::string& key, const std::string& path, double lo, double hi);
std::size_t get_count(const Json& j, const std::string& key, const std::string& path, std::size_t lo,
                      std::size_t hi);
std::string get_string(const Json& j, const std::string& key, const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// Hash of the canonical (compact, key-ordered as written) dump.
std::string config_hash(const Json& config);

}  // namespace nas
