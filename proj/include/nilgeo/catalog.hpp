#pragma once

#include "nilgeo/algebra.hpp"

#include <string>
#include <vector>

namespace nilgeo {

/// Keys of the built-in graded nilpotent algebras, ordered by nilpotency order.
inline const std::vector<std::string>& nilpotent_catalog_keys() {
  static const std::vector<std::string> keys = {"abelian3", "heis3", "heis5", "cartan23", "engel4", "n4"};
  return keys;
}

inline GradedNilpotentAlgebra<Rational> nilpotent_algebra(const std::string& key) {
  using SC = StructureConstant;
  const Rational one(1);
  if (key == "abelian3") return {{"e1", "e2", "e3"}, {1, 1, 1}, {}};
  if (key == "heis3") return {{"X", "Y", "Z"}, {1, 1, 2}, {SC{0, 1, 2, one}}};
  if (key == "heis5")
    return {{"X1", "Y1", "X2", "Y2", "Z"}, {1, 1, 1, 1, 2}, {SC{0, 1, 4, one}, SC{2, 3, 4, one}}};
  // Free two-step nilpotent algebra on three generators.
  if (key == "cartan23")
    return {{"e1", "e2", "e3", "e12", "e13", "e23"},
            {1, 1, 1, 2, 2, 2},
            {SC{0, 1, 3, one}, SC{0, 2, 4, one}, SC{1, 2, 5, one}}};
  // Filiform: [e1,e2] = e3, [e1,e3] = e4.
  if (key == "engel4") return {{"e1", "e2", "e3", "e4"}, {1, 1, 2, 3}, {SC{0, 1, 2, one}, SC{0, 2, 3, one}}};
  // Strictly upper triangular 4x4 matrices, basis E12 E23 E34 E13 E24 E14.
  if (key == "n4")
    return {{"E12", "E23", "E34", "E13", "E24", "E14"},
            {1, 1, 1, 2, 2, 3},
            {SC{0, 1, 3, one}, SC{1, 2, 4, one}, SC{0, 4, 5, one}, SC{3, 2, 5, one}}};
  throw UnknownKey("no built-in nilpotent algebra named '" + key + "'");
}

}  // namespace nilgeo
