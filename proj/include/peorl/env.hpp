#pragma once

// Environment interface shared by the benchmark MDPs and the agents, plus
// the line-oriented map file format (DEPOT/WALL/RED/YELLOW/START records,
// (row,col) coordinates with origin (1,1)).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "peorl/grounding.hpp"

namespace peorl {

struct StepResult {
    double reward = 0.0;
    bool done = false;
    bool failed = false;  // primitive execution failure (penalty, state unchanged)
};

class Environment {
public:
    virtual ~Environment() = default;

    virtual void reset() = 0;
    virtual StepResult step(int action) = 0;
    virtual bool done() const = 0;

    // Dense id of the current MDP state; < state_space_size().
    virtual std::int64_t state_id() const = 0;
    virtual std::int64_t state_space_size() const = 0;

    virtual int action_count() const = 0;
    virtual const std::string& action_name(int action) const = 0;

    // Total symbolic assignment the current MDP state abstracts to.
    virtual SymbolicState abstract_state() const = 0;
};

struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
};

// Wall segments block east-west movement between (row,col) and (row,col+1).
struct GridMap {
    int rows = 0;
    int cols = 0;
    std::vector<Cell> depots;
    std::vector<Cell> walls_east;  // wall on the east side of this cell
    std::vector<Cell> red;
    std::vector<Cell> yellow;
    std::vector<Cell> starts;

    bool wall_east_of(int row, int col) const;
    bool has(const std::vector<Cell>& cells, int row, int col) const;
};

GridMap parse_map(std::istream& in, int rows, int cols);
GridMap load_map_file(const std::string& path, int rows, int cols);
std::string map_to_string(const GridMap& map);

}  // namespace peorl
