#pragma once

// Built-in benchmark knowledge: the Taxi and GridWorld action descriptions,
// their default maps, and the symbolic-action realization catalogs. The same
// content ships as text files under data/.

#include <string>

#include "peorl/env.hpp"
#include "peorl/hrl.hpp"

namespace peorl {

const std::string& taxi_domain_text();
const std::string& gridworld_domain_text();

GridMap default_taxi_map();
GridMap default_gridworld_map();

// Depot order: rd, gd, yd, bd (indices 0..3).
inline constexpr const char* kTaxiDepotNames[4] = {"rd", "gd", "yd", "bd"};

// Env action id layout, shared with the env implementations.
ActionCatalog taxi_catalog(int step_cap = 100);
ActionCatalog gridworld_catalog(int step_cap = 100);

}  // namespace peorl
