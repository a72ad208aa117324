#pragma once

#include "nilgeo/parabolic/parabolic.hpp"
#include "nilgeo/parabolic/semisimple_catalog.hpp"

namespace nilgeo {

/// One row of the table of parabolic geometries of the non-compact real
/// forms of SL(3,C) and SL(4,C).
struct TableRow {
  std::string family;
  std::string group;
  std::string sigma_text;  // as printed in the table
  std::vector<std::size_t> sigma;
  std::size_t expected_dim = 0;
  int expected_order = 0;
  std::size_t dim = 0;
  int order = 0;

  bool pass() const { return dim == expected_dim && order == expected_order; }
};

inline std::vector<TableRow> table1_expected() {
  return {
      {"sl3R", "SL(3,R)", "{}", {}, 3, 2},
      {"sl3R", "SL(3,R)", "{phi_i}", {0}, 2, 1},
      {"su21", "SU(2,1)", "{}", {}, 3, 2},
      {"sl4R", "SL(4,R)", "{}", {}, 6, 3},
      {"sl4R", "SL(4,R)", "{phi_i}", {0}, 5, 2},
      {"sl4R", "SL(4,R)", "{phi_i,phi_i+1}", {0, 1}, 4, 2},
      {"su31", "SU(3,1)", "{}", {}, 5, 2},
      {"sustar4", "SU*(4)", "{}", {}, 4, 1},
      {"su22", "SU(2,2)", "{}", {}, 6, 3},
      {"su22", "SU(2,2)", "{phi_2}", {1}, 5, 2},
      {"su22", "SU(2,2)", "{phi_1}", {0}, 4, 1},
  };
}

/// Root system of a catalog real form with its declared simple-root order.
inline RestrictedRootSystem catalog_root_system(const std::string& key) {
  return restricted_roots(load_algebra(key), real_form_spec(key).simple_roots);
}

/// Computes every row from the matrix realizations. An empty family selects all rows.
inline std::vector<TableRow> table1(const std::string& family = {}) {
  std::vector<TableRow> rows;
  std::map<std::string, RestrictedRootSystem> systems;
  for (auto row : table1_expected()) {
    if (!family.empty() && row.family != family) continue;
    auto it = systems.find(row.family);
    if (it == systems.end()) it = systems.emplace(row.family, catalog_root_system(row.family)).first;
    auto pd = parabolic(it->second, row.sigma);
    row.dim = pd.n_basis.size();
    row.order = pd.nil_order;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nilgeo
