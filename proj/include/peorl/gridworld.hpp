#pragma once

// The GridWorld benchmark: a 20x20 grid with bumper cells (-30 red, -15
// yellow, -1 elsewhere) and a door room. Entering the goal cell (9,10)
// requires the door at (9,9) to be grabbed with a workable force, rotated
// clockwise (activated) and pushed open with a workable force; every failed
// attempt costs -10 and leaves the state unchanged.

#include <cstdint>

#include "peorl/env.hpp"

namespace peorl {

struct GridWorldConfig {
    std::uint64_t seed = 0;
};

class GridWorldEnv : public Environment {
public:
    static constexpr int kMoveEast = 0;
    static constexpr int kMoveNorth = 1;
    static constexpr int kMoveWest = 2;
    static constexpr int kMoveSouth = 3;
    static constexpr int kForceMax = 60;
    static constexpr int kGrabBase = 4;              // grab(F) = 4 + F
    static constexpr int kRotateCw = kGrabBase + kForceMax + 1;   // 65
    static constexpr int kRotateCcw = kRotateCw + 1;              // 66
    static constexpr int kPushBase = kRotateCcw + 1;              // push(F) = 67 + F

    static constexpr int grab_action(int force) { return kGrabBase + force; }
    static constexpr int push_action(int force) { return kPushBase + force; }

    // ungrabbed -> grabbed -> active -> open
    enum DoorPhase { kPlain = 0, kGrabbed = 1, kActive = 2, kOpen = 3 };

    GridWorldEnv(const GroundDomain& g, GridWorldConfig cfg, GridMap map);
    GridWorldEnv(const GroundDomain& g, GridWorldConfig cfg);

    void reset() override;
    StepResult step(int action) override;
    bool done() const override { return done_; }

    std::int64_t state_id() const override;
    std::int64_t state_space_size() const override { return 20 * 20 * 4; }
    int action_count() const override { return kPushBase + kForceMax + 1; }
    const std::string& action_name(int action) const override;
    SymbolicState abstract_state() const override;

    int row() const { return row_; }
    int col() const { return col_; }
    DoorPhase door_phase() const { return phase_; }
    const GridMap& map() const { return map_; }
    Cell start_cell() const { return start_; }

    static bool force_works(int force) { return 20 <= force && force < 40; }

private:
    bool move_blocked(int action) const;
    double cell_reward(int row, int col) const;

    const GroundDomain& domain_;
    GridMap map_;
    Cell start_{9, 1};
    Cell door_{9, 9};
    Cell goal_{9, 10};

    int row_ = 9, col_ = 1;
    DoorPhase phase_ = kPlain;
    bool done_ = false;

    std::vector<int> pos_ids_;  // 400, row-major
    int active_fid_ = -1, open_fid_ = -1;
    std::vector<std::string> action_names_;
};

}  // namespace peorl
