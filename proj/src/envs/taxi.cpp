#include "peorl/taxi.hpp"

#include <stdexcept>

#include "peorl/domains.hpp"
#include "peorl/rng.hpp"

namespace peorl {

namespace {

const std::string kActionNames[6] = {"move(e)", "move(n)", "move(w)",
                                     "move(s)", "pickup",  "dropoff"};

}  // namespace

TaxiEnv::TaxiEnv(const GroundDomain& g, TaxiConfig cfg, GridMap map)
    : domain_(g), cfg_(cfg), map_(std::move(map)) {
    taxiat_ids_.resize(25);
    for (int r = 1; r <= 5; ++r)
        for (int c = 1; c <= 5; ++c) {
            int id = g.fluent_id("taxiat(" + std::to_string(r) + "," + std::to_string(c) + ")");
            if (id < 0) throw std::runtime_error("taxi domain lacks taxiat fluents");
            taxiat_ids_[(r - 1) * 5 + (c - 1)] = id;
        }
    passenger_fid_ = g.fluent_id("passenger");
    dest_fid_ = g.fluent_id("dest");
    visited_fid_ = g.fluent_id("rewardvisited");
    if (passenger_fid_ < 0 || dest_fid_ < 0 || visited_fid_ < 0)
        throw std::runtime_error("taxi domain lacks passenger/dest/rewardvisited fluents");
    for (int d = 0; d < 4; ++d) {
        ploc_value_ids_.push_back(
            g.value_id(passenger_fid_, Constant::symbol(kTaxiDepotNames[d])));
        depot_value_ids_.push_back(g.value_id(dest_fid_, Constant::symbol(kTaxiDepotNames[d])));
    }
    ploc_value_ids_.push_back(g.value_id(passenger_fid_, Constant::symbol("intaxi")));

    // Episode initial conditions are a pure function of the seed: a uniform
    // taxi cell and two distinct depots.
    Rng rng(derive_seed(cfg_.seed, /*role=*/0x7a1));
    init_row_ = 1 + static_cast<int>(rng.next_below(5));
    init_col_ = 1 + static_cast<int>(rng.next_below(5));
    init_passenger_ = static_cast<int>(rng.next_below(4));
    do {
        dest_ = static_cast<int>(rng.next_below(4));
    } while (dest_ == init_passenger_);
    reset();
}

TaxiEnv::TaxiEnv(const GroundDomain& g, TaxiConfig cfg) : TaxiEnv(g, cfg, default_taxi_map()) {}

void TaxiEnv::reset() {
    row_ = init_row_;
    col_ = init_col_;
    passenger_ = init_passenger_;
    visited_ = false;
    done_ = false;
}

const std::string& TaxiEnv::action_name(int action) const { return kActionNames[action]; }

std::int64_t TaxiEnv::state_id() const {
    std::int64_t cell = (row_ - 1) * 5 + (col_ - 1);
    return ((cell * 5 + passenger_) * 4 + dest_) * 2 + (visited_ ? 1 : 0);
}

bool TaxiEnv::move_blocked(int action) const {
    switch (action) {
        case kMoveEast: return col_ == 5 || map_.wall_east_of(row_, col_);
        case kMoveWest: return col_ == 1 || map_.wall_east_of(row_, col_ - 1);
        case kMoveNorth: return row_ == 1;
        case kMoveSouth: return row_ == 5;
        default: return true;
    }
}

StepResult TaxiEnv::step(int action) {
    if (done_) throw std::logic_error("step() on a finished taxi episode");
    StepResult result;
    switch (action) {
        case kMoveEast:
        case kMoveNorth:
        case kMoveWest:
        case kMoveSouth: {
            result.reward = -1.0;
            if (!move_blocked(action)) {
                if (action == kMoveEast) ++col_;
                if (action == kMoveWest) --col_;
                if (action == kMoveNorth) --row_;
                if (action == kMoveSouth) ++row_;
                if (row_ == cfg_.bonus_cell.row && col_ == cfg_.bonus_cell.col) visited_ = true;
            }
            break;
        }
        case kPickup: {
            Cell at{row_, col_};
            if (passenger_ != kInTaxi && at == map_.depots[passenger_]) {
                passenger_ = kInTaxi;
                result.reward = -1.0;
            } else {
                result.reward = -10.0;
                result.failed = true;
            }
            break;
        }
        case kDropoff: {
            Cell at{row_, col_};
            if (passenger_ == kInTaxi && at == map_.depots[dest_]) {
                passenger_ = dest_;
                done_ = true;
                result.done = true;
                result.reward = 20.0 + (cfg_.scenario == 2 && visited_ ? 30.0 : 0.0);
            } else {
                result.reward = -10.0;
                result.failed = true;
            }
            break;
        }
        default:
            throw std::logic_error("unknown taxi action id");
    }
    return result;
}

SymbolicState TaxiEnv::abstract_state() const {
    SymbolicState s;
    s.v.assign(domain_.fluents.size(), 0);
    for (int id : taxiat_ids_) s.v[id] = 0;
    s.v[taxiat_ids_[(row_ - 1) * 5 + (col_ - 1)]] = 1;
    s.v[passenger_fid_] = ploc_value_ids_[passenger_];
    s.v[dest_fid_] = depot_value_ids_[dest_];
    s.v[visited_fid_] = visited_ ? 1 : 0;
    return s;
}

}  // namespace peorl
