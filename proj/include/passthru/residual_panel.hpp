#pragma once
// Residualized biennial growth observations: per household, the (wave, dy, dc)
// cells that survive first-stage regressions.  dy/dc are missing when the
// underlying variable is unobserved at the wave or at wave-2.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "passthru/common.hpp"

namespace passthru {

struct ResidualCell {
  int wave = 0;
  std::optional<double> dy;  // unexplained biennial income growth
  std::optional<double> dc;  // unexplained biennial consumption growth
};

struct HouseholdResiduals {
  std::string household_id;
  std::vector<ResidualCell> cells;  // sorted by wave, unique waves
};

struct ResidualPanel {
  std::vector<HouseholdResiduals> households;  // sorted by household_id
  std::vector<int> waves;                      // sorted distinct wave years

  // Deterministic ordering: households by id, cells by wave.  All moment
  // sums iterate this order, so permutations of the input are bit-neutral.
  void canonicalize() {
    for (auto& h : households) {
      std::sort(h.cells.begin(), h.cells.end(),
                [](const ResidualCell& a, const ResidualCell& b) { return a.wave < b.wave; });
      for (std::size_t i = 1; i < h.cells.size(); ++i) {
        if (h.cells[i].wave == h.cells[i - 1].wave)
          throw error("duplicate residual cell for household " + h.household_id +
                      " wave " + std::to_string(h.cells[i].wave));
      }
    }
    std::sort(households.begin(), households.end(),
              [](const HouseholdResiduals& a, const HouseholdResiduals& b) {
                return a.household_id < b.household_id;
              });
    std::set<int> ws;
    for (const auto& h : households)
      for (const auto& c : h.cells) ws.insert(c.wave);
    waves.assign(ws.begin(), ws.end());
  }

  std::size_t n_cells() const {
    std::size_t n = 0;
    for (const auto& h : households) n += h.cells.size();
    return n;
  }
};

}  // namespace passthru
