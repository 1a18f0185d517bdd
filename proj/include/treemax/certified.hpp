// treemax: certified operator values.
//
// Every maximal-operator evaluation returns the exact maximum over the
// in-window candidates together with a tail bound: an exact rational that
// dominates the average of every candidate the window cannot materialize
// (triangles through ancestors above the apex, triangles whose base dips
// below the floor, balls that escape). When the windowed maximum is at least
// the tail bound the value IS the supremum over the whole infinite tree and
// the result is marked certified; otherwise it is flagged, not silently
// truncated.
#pragma once

#include <optional>

#include "treemax/address.hpp"
#include "treemax/rational.hpp"

namespace treemax {

enum class WitnessKind { triangle, mod_triangle, base, ball };

// The candidate achieving the maximum: a triangle T_R(vertex), modified
// triangle T'_R(vertex), base s^R(vertex), or ball B_R(vertex).
struct Witness {
  WitnessKind kind = WitnessKind::triangle;
  VertexAddress vertex;
  long long extent = 0;
};

struct CertifiedValue {
  Rat value = 0;
  std::optional<Witness> witness;
  bool certified = true;
  Rat tail_bound = 0;
};

}  // namespace treemax
