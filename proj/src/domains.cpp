#include "peorl/domains.hpp"

#include "peorl/gridworld.hpp"
#include "peorl/taxi.hpp"

namespace peorl {

const std::string& taxi_domain_text() {
    static const std::string text = R"(% Taxi: 5x5 grid, four depots, one passenger.
% Rows grow southward, columns eastward, origin (1,1).
% Depots: rd=(1,1) gd=(1,5) yd=(5,1) bd=(5,4).

sort row = 1..5.
sort col = 1..5.
sort dir = {n, w, e, s}.
sort depot = {rd, gd, yd, bd}.
sort ploc = {rd, gd, yd, bd, intaxi}.

fluent taxiat(row, col).
fluent passenger : ploc.
fluent dest : depot.
fluent rewardvisited.

action move(dir).
action pickup.
action dropoff.

move(e) causes taxiat(X,Y+1) if taxiat(X,Y).
move(e) causes ~taxiat(X,Y) if taxiat(X,Y).
move(w) causes taxiat(X,Y-1) if taxiat(X,Y).
move(w) causes ~taxiat(X,Y) if taxiat(X,Y).
move(n) causes taxiat(X-1,Y) if taxiat(X,Y).
move(n) causes ~taxiat(X,Y) if taxiat(X,Y).
move(s) causes taxiat(X+1,Y) if taxiat(X,Y).
move(s) causes ~taxiat(X,Y) if taxiat(X,Y).

nonexecutable move(e) if taxiat(X,5).
nonexecutable move(w) if taxiat(X,1).
nonexecutable move(n) if taxiat(1,Y).
nonexecutable move(s) if taxiat(5,Y).

% wall segments of the standard map
nonexecutable move(e) if taxiat(1,2).
nonexecutable move(w) if taxiat(1,3).
nonexecutable move(e) if taxiat(2,2).
nonexecutable move(w) if taxiat(2,3).
nonexecutable move(e) if taxiat(4,1).
nonexecutable move(w) if taxiat(4,2).
nonexecutable move(e) if taxiat(5,1).
nonexecutable move(w) if taxiat(5,2).
nonexecutable move(e) if taxiat(4,3).
nonexecutable move(w) if taxiat(4,4).
nonexecutable move(e) if taxiat(5,3).
nonexecutable move(w) if taxiat(5,4).

% entering the bonus corner (5,5) flags the visit
move(s) causes rewardvisited if taxiat(4,5).
move(e) causes rewardvisited if taxiat(5,4).

pickup causes passenger=intaxi if taxiat(1,1), passenger=rd.
pickup causes passenger=intaxi if taxiat(1,5), passenger=gd.
pickup causes passenger=intaxi if taxiat(5,1), passenger=yd.
pickup causes passenger=intaxi if taxiat(5,4), passenger=bd.
nonexecutable pickup if passenger=intaxi.
nonexecutable pickup if passenger=rd, ~taxiat(1,1).
nonexecutable pickup if passenger=gd, ~taxiat(1,5).
nonexecutable pickup if passenger=yd, ~taxiat(5,1).
nonexecutable pickup if passenger=bd, ~taxiat(5,4).

dropoff causes passenger=rd if taxiat(1,1), passenger=intaxi, dest=rd.
dropoff causes passenger=gd if taxiat(1,5), passenger=intaxi, dest=gd.
dropoff causes passenger=yd if taxiat(5,1), passenger=intaxi, dest=yd.
dropoff causes passenger=bd if taxiat(5,4), passenger=intaxi, dest=bd.
nonexecutable dropoff if passenger=rd.
nonexecutable dropoff if passenger=gd.
nonexecutable dropoff if passenger=yd.
nonexecutable dropoff if passenger=bd.
nonexecutable dropoff if dest=rd, ~taxiat(1,1).
nonexecutable dropoff if dest=gd, ~taxiat(1,5).
nonexecutable dropoff if dest=yd, ~taxiat(5,1).
nonexecutable dropoff if dest=bd, ~taxiat(5,4).

inertial taxiat.
inertial passenger.
inertial dest.
inertial rewardvisited.

default ~taxiat(X,Y).
default ~rewardvisited.
)";
    return text;
}

const std::string& gridworld_domain_text() {
    static const std::string text = R"(% GridWorld: 20x20 grid; the room at (9,10) is entered through the
% door at (9,9), which must be activated and then pushed open.
% Rows grow southward, columns eastward, origin (1,1).

sort row = 1..20.
sort col = 1..20.
sort dir = {e, n, w, s}.

fluent pos(row, col).
fluent dooractive.
fluent dooropen.

action move(dir).
action activate.
action push.

move(e) causes pos(X,Y+1) if pos(X,Y).
move(e) causes ~pos(X,Y) if pos(X,Y).
move(w) causes pos(X,Y-1) if pos(X,Y).
move(w) causes ~pos(X,Y) if pos(X,Y).
move(n) causes pos(X-1,Y) if pos(X,Y).
move(n) causes ~pos(X,Y) if pos(X,Y).
move(s) causes pos(X+1,Y) if pos(X,Y).
move(s) causes ~pos(X,Y) if pos(X,Y).

nonexecutable move(e) if pos(X,20).
nonexecutable move(w) if pos(X,1).
nonexecutable move(n) if pos(1,Y).
nonexecutable move(s) if pos(20,Y).

% the room is sealed except for the door edge (9,9)-(9,10)
nonexecutable move(e) if pos(9,9), ~dooropen.
nonexecutable move(s) if pos(8,10).
nonexecutable move(n) if pos(10,10).
nonexecutable move(w) if pos(9,11).
nonexecutable move(n) if pos(9,10).
nonexecutable move(s) if pos(9,10).
nonexecutable move(e) if pos(9,10).

activate causes dooractive if pos(9,9), ~dooractive.
nonexecutable activate if ~pos(9,9).
nonexecutable activate if dooractive.

push causes dooropen if pos(9,9), dooractive.
nonexecutable push if ~pos(9,9).
nonexecutable push if ~dooractive.
nonexecutable push if dooropen.

inertial pos.
inertial dooractive.
inertial dooropen.

default ~pos(X,Y).
)";
    return text;
}

GridMap default_taxi_map() {
    GridMap map;
    map.rows = 5;
    map.cols = 5;
    map.depots = {{1, 1}, {1, 5}, {5, 1}, {5, 4}};  // rd, gd, yd, bd
    map.walls_east = {{1, 2}, {2, 2}, {4, 1}, {5, 1}, {4, 3}, {5, 3}};
    return map;
}

GridMap default_gridworld_map() {
    GridMap map;
    map.rows = 20;
    map.cols = 20;
    map.red = {{9, 4}, {8, 7}, {10, 7}};
    map.yellow = {{8, 4}, {10, 4}, {9, 7}};
    map.starts = {{5, 1}, {9, 1}, {13, 1}};
    return map;
}

ActionCatalog taxi_catalog(int step_cap) {
    ActionCatalog catalog;
    catalog.step_cap = step_cap;
    catalog.realizations["move(e)"] = {TaxiEnv::kMoveEast};
    catalog.realizations["move(n)"] = {TaxiEnv::kMoveNorth};
    catalog.realizations["move(w)"] = {TaxiEnv::kMoveWest};
    catalog.realizations["move(s)"] = {TaxiEnv::kMoveSouth};
    catalog.realizations["pickup"] = {TaxiEnv::kPickup};
    catalog.realizations["dropoff"] = {TaxiEnv::kDropoff};
    return catalog;
}

ActionCatalog gridworld_catalog(int step_cap) {
    ActionCatalog catalog;
    catalog.step_cap = step_cap;
    catalog.realizations["move(e)"] = {GridWorldEnv::kMoveEast};
    catalog.realizations["move(n)"] = {GridWorldEnv::kMoveNorth};
    catalog.realizations["move(w)"] = {GridWorldEnv::kMoveWest};
    catalog.realizations["move(s)"] = {GridWorldEnv::kMoveSouth};
    std::vector<int> activate;
    for (int f = 0; f <= GridWorldEnv::kForceMax; ++f)
        activate.push_back(GridWorldEnv::grab_action(f));
    activate.push_back(GridWorldEnv::kRotateCw);
    activate.push_back(GridWorldEnv::kRotateCcw);
    catalog.realizations["activate"] = std::move(activate);
    std::vector<int> push;
    for (int f = 0; f <= GridWorldEnv::kForceMax; ++f) push.push_back(GridWorldEnv::push_action(f));
    catalog.realizations["push"] = std::move(push);
    return catalog;
}

}  // namespace peorl
