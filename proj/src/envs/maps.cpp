#include "peorl/env.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace peorl {

bool GridMap::has(const std::vector<Cell>& cells, int row, int col) const {
    for (const auto& c : cells)
        if (c.row == row && c.col == col) return true;
    return false;
}

bool GridMap::wall_east_of(int row, int col) const { return has(walls_east, row, col); }

GridMap parse_map(std::istream& in, int rows, int cols) {
    GridMap map;
    map.rows = rows;
    map.cols = cols;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        int r = 0, c = 0;
        std::string dir;
        auto bad = [&](const std::string& why) {
            throw std::runtime_error("map line " + std::to_string(lineno) + ": " + why);
        };
        if (kind == "WALL") {
            if (!(ls >> r >> c >> dir)) bad("expected WALL <row> <col> <e|w>");
        } else if (!(ls >> r >> c)) {
            bad("expected " + kind + " <row> <col>");
        }
        if (r < 1 || r > rows || c < 1 || c > cols) bad("cell out of range");
        if (kind == "DEPOT") {
            map.depots.push_back({r, c});
        } else if (kind == "WALL") {
            // Normalized to "east side of": WALL r c w == WALL r c-1 e.
            if (dir == "e") {
                map.walls_east.push_back({r, c});
            } else if (dir == "w") {
                if (c < 2) bad("west wall at column 1");
                map.walls_east.push_back({r, c - 1});
            } else {
                bad("wall direction must be e or w");
            }
        } else if (kind == "RED") {
            map.red.push_back({r, c});
        } else if (kind == "YELLOW") {
            map.yellow.push_back({r, c});
        } else if (kind == "START") {
            map.starts.push_back({r, c});
        } else {
            bad("unknown record '" + kind + "'");
        }
    }
    return map;
}

GridMap load_map_file(const std::string& path, int rows, int cols) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
    return parse_map(in, rows, cols);
}

std::string map_to_string(const GridMap& map) {
    std::ostringstream os;
    for (const auto& c : map.depots) os << "DEPOT " << c.row << " " << c.col << "\n";
    for (const auto& c : map.walls_east) os << "WALL " << c.row << " " << c.col << " e\n";
    for (const auto& c : map.red) os << "RED " << c.row << " " << c.col << "\n";
    for (const auto& c : map.yellow) os << "YELLOW " << c.row << " " << c.col << "\n";
    for (const auto& c : map.starts) os << "START " << c.row << " " << c.col << "\n";
    return os.str();
}

}  // namespace peorl
