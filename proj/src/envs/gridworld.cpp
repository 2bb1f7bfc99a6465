#include "peorl/gridworld.hpp"

#include <stdexcept>

#include "peorl/domains.hpp"
#include "peorl/rng.hpp"

namespace peorl {

GridWorldEnv::GridWorldEnv(const GroundDomain& g, GridWorldConfig cfg, GridMap map)
    : domain_(g), map_(std::move(map)) {
    pos_ids_.resize(400);
    for (int r = 1; r <= 20; ++r)
        for (int c = 1; c <= 20; ++c) {
            int id = g.fluent_id("pos(" + std::to_string(r) + "," + std::to_string(c) + ")");
            if (id < 0) throw std::runtime_error("gridworld domain lacks pos fluents");
            pos_ids_[(r - 1) * 20 + (c - 1)] = id;
        }
    active_fid_ = g.fluent_id("dooractive");
    open_fid_ = g.fluent_id("dooropen");
    if (active_fid_ < 0 || open_fid_ < 0)
        throw std::runtime_error("gridworld domain lacks door fluents");

    action_names_.resize(action_count());
    action_names_[kMoveEast] = "move(e)";
    action_names_[kMoveNorth] = "move(n)";
    action_names_[kMoveWest] = "move(w)";
    action_names_[kMoveSouth] = "move(s)";
    for (int f = 0; f <= kForceMax; ++f) {
        action_names_[grab_action(f)] = "grab(" + std::to_string(f) + ")";
        action_names_[push_action(f)] = "push(" + std::to_string(f) + ")";
    }
    action_names_[kRotateCw] = "rotate(cw)";
    action_names_[kRotateCcw] = "rotate(ccw)";

    if (map_.starts.empty()) throw std::runtime_error("gridworld map declares no START cells");
    Rng rng(derive_seed(cfg.seed, /*role=*/0x9b2));
    start_ = map_.starts[rng.next_below(map_.starts.size())];
    reset();
}

GridWorldEnv::GridWorldEnv(const GroundDomain& g, GridWorldConfig cfg)
    : GridWorldEnv(g, cfg, default_gridworld_map()) {}

void GridWorldEnv::reset() {
    row_ = start_.row;
    col_ = start_.col;
    phase_ = kPlain;
    done_ = false;
}

const std::string& GridWorldEnv::action_name(int action) const { return action_names_[action]; }

std::int64_t GridWorldEnv::state_id() const {
    return (static_cast<std::int64_t>(row_ - 1) * 20 + (col_ - 1)) * 4 + phase_;
}

bool GridWorldEnv::move_blocked(int action) const {
    int nr = row_, nc = col_;
    if (action == kMoveEast) ++nc;
    if (action == kMoveWest) --nc;
    if (action == kMoveNorth) --nr;
    if (action == kMoveSouth) ++nr;
    if (nr < 1 || nr > map_.rows || nc < 1 || nc > map_.cols) return true;
    const Cell from{row_, col_};
    const Cell to{nr, nc};
    // The door edge opens only in phase kOpen; the rest of the room boundary
    // is solid wall.
    auto is_door_edge = [&](const Cell& a, const Cell& b) {
        return (a == door_ && b == goal_) || (a == goal_ && b == door_);
    };
    if (is_door_edge(from, to)) return phase_ != kOpen;
    if (to == goal_ || from == goal_) return true;  // any other room edge
    if (action == kMoveEast && map_.wall_east_of(row_, col_)) return true;
    if (action == kMoveWest && map_.wall_east_of(row_, col_ - 1)) return true;
    return false;
}

double GridWorldEnv::cell_reward(int row, int col) const {
    if (map_.has(map_.red, row, col)) return -30.0;
    if (map_.has(map_.yellow, row, col)) return -15.0;
    return -1.0;
}

StepResult GridWorldEnv::step(int action) {
    if (done_) throw std::logic_error("step() on a finished gridworld episode");
    StepResult result;
    const Cell at{row_, col_};
    if (action >= kMoveEast && action <= kMoveSouth) {
        if (move_blocked(action)) {
            result.reward = -1.0;
            return result;
        }
        if (action == kMoveEast) ++col_;
        if (action == kMoveWest) --col_;
        if (action == kMoveNorth) --row_;
        if (action == kMoveSouth) ++row_;
        if (Cell{row_, col_} == goal_) {
            done_ = true;
            result.done = true;
            result.reward = 0.0;  // terminal step
        } else {
            result.reward = cell_reward(row_, col_);
        }
        return result;
    }
    auto fail = [&] {
        result.reward = -10.0;
        result.failed = true;
        return result;
    };
    if (action >= kGrabBase && action <= kGrabBase + kForceMax) {
        const int force = action - kGrabBase;
        if (at == door_ && phase_ == kPlain && force_works(force)) {
            phase_ = kGrabbed;
            result.reward = -1.0;
            return result;
        }
        return fail();
    }
    if (action == kRotateCw) {
        if (at == door_ && phase_ == kGrabbed) {
            phase_ = kActive;
            result.reward = -1.0;
            return result;
        }
        return fail();
    }
    if (action == kRotateCcw) return fail();  // turning the wrong way never works
    if (action >= kPushBase && action <= kPushBase + kForceMax) {
        const int force = action - kPushBase;
        if (at == door_ && phase_ == kActive && force_works(force)) {
            phase_ = kOpen;
            result.reward = -1.0;
            return result;
        }
        return fail();
    }
    throw std::logic_error("unknown gridworld action id");
}

SymbolicState GridWorldEnv::abstract_state() const {
    SymbolicState s;
    s.v.assign(domain_.fluents.size(), 0);
    s.v[pos_ids_[(row_ - 1) * 20 + (col_ - 1)]] = 1;
    s.v[active_fid_] = phase_ >= kActive ? 1 : 0;
    s.v[open_fid_] = phase_ == kOpen ? 1 : 0;
    return s;
}

}  // namespace peorl
