#pragma once

// The Taxi benchmark: a taxi on a 5x5 walled grid picks up a passenger at
// one depot and drops them at another. Movement costs -1, improper pickup
// or drop-off costs -10, successful drop-off pays 20. Scenario 2 adds a +30
// bonus when the drop-off happens with the corner cell already visited.

#include <cstdint>

#include "peorl/env.hpp"

namespace peorl {

struct TaxiConfig {
    int scenario = 1;  // 1 = plain, 2 = bonus for visiting the corner
    std::uint64_t seed = 0;
    Cell bonus_cell{5, 5};
};

class TaxiEnv : public Environment {
public:
    enum ActionId {
        kMoveEast = 0,
        kMoveNorth = 1,
        kMoveWest = 2,
        kMoveSouth = 3,
        kPickup = 4,
        kDropoff = 5,
    };
    static constexpr int kInTaxi = 4;  // passenger location index

    TaxiEnv(const GroundDomain& g, TaxiConfig cfg, GridMap map);
    TaxiEnv(const GroundDomain& g, TaxiConfig cfg);

    void reset() override;
    StepResult step(int action) override;
    bool done() const override { return done_; }

    std::int64_t state_id() const override;
    std::int64_t state_space_size() const override { return 25 * 5 * 4 * 2; }
    int action_count() const override { return 6; }
    const std::string& action_name(int action) const override;
    SymbolicState abstract_state() const override;

    int row() const { return row_; }
    int col() const { return col_; }
    int passenger() const { return passenger_; }       // 0..3 depot, 4 = in taxi
    int destination() const { return dest_; }          // 0..3
    bool reward_visited() const { return visited_; }
    const GridMap& map() const { return map_; }
    Cell depot_cell(int depot) const { return map_.depots[depot]; }

    // The seed-determined episode initial conditions.
    int initial_row() const { return init_row_; }
    int initial_col() const { return init_col_; }
    int initial_passenger() const { return init_passenger_; }

private:
    bool move_blocked(int action) const;

    const GroundDomain& domain_;
    TaxiConfig cfg_;
    GridMap map_;

    int init_row_ = 1, init_col_ = 1, init_passenger_ = 0;
    int row_ = 1, col_ = 1;
    int passenger_ = 0;
    int dest_ = 1;
    bool visited_ = false;
    bool done_ = false;

    // Cached symbolic universe ids.
    std::vector<int> taxiat_ids_;       // 25, row-major
    int passenger_fid_ = -1, dest_fid_ = -1, visited_fid_ = -1;
    std::vector<int> ploc_value_ids_;   // rd,gd,yd,bd,intaxi
    std::vector<int> depot_value_ids_;  // rd,gd,yd,bd
};

}  // namespace peorl
