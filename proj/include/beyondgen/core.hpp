#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace beyondgen {

// Dense handles, valid for exactly one Drawing instance.
using VertexId = std::int32_t;
using DartId = std::int32_t;
using EdgeId = std::int32_t;  // original (pre-planarization) edge
using FaceId = std::int32_t;

// A corner is a single vertex-face incidence. It is identified by a dart d:
// the corner sits at origin(d), in the rotation gap between rot_prev(d) and d,
// and belongs to the face whose boundary orbit contains d.
using CornerId = DartId;

inline constexpr std::int32_t kInvalidId = -1;

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed combinatorial map (twin mismatch, broken rotation cycle, ...).
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A drawing-level invariant does not hold (simplicity, Euler, crossing degree).
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested curve is not realizable in the current arrangement.
struct PathwayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IsoMode : std::uint8_t {
  OrientationPreserving,
  IncludeReflections,
};

inline std::string to_string(IsoMode m) {
  return m == IsoMode::OrientationPreserving ? "orient" : "reflect";
}

inline IsoMode iso_mode_from_string(const std::string& s) {
  if (s == "orient") return IsoMode::OrientationPreserving;
  if (s == "reflect") return IsoMode::IncludeReflections;
  throw ArgumentError("unknown iso mode: " + s);
}

// Small fixed-capacity set of edge ids, cheap to copy along a search branch.
class EdgeSet {
 public:
  static constexpr int kCapacity = 128;

  void add(EdgeId e) {
    check(e);
    words_[e >> 6] |= std::uint64_t{1} << (e & 63);
  }

  bool contains(EdgeId e) const {
    check(e);
    return (words_[e >> 6] >> (e & 63)) & 1;
  }

  int count() const {
    return __builtin_popcountll(words_[0]) + __builtin_popcountll(words_[1]);
  }

  bool operator==(const EdgeSet&) const = default;

 private:
  static void check(EdgeId e) {
    if (e < 0 || e >= kCapacity) throw ArgumentError("edge id out of EdgeSet range");
  }

  std::uint64_t words_[2] = {0, 0};
};

}  // namespace beyondgen
