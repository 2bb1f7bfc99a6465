#pragma once

// Grounds a validated action description into an explicit finite transition
// system: ground fluent/action universes, instantiated laws, a deterministic
// successor function and reachable-state enumeration.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "peorl/action_language.hpp"

namespace peorl {

struct GroundingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroundFluent {
    std::string name;                // e.g. "pos(9,8)" or "passenger"
    int decl_index = -1;
    std::vector<Constant> args;
    std::vector<Constant> values;    // value domain; booleans are [false, true]
    bool is_boolean = true;
};

struct GroundAction {
    std::string name;                // e.g. "move(e)"
    int decl_index = -1;
    std::vector<Constant> args;
};

struct GroundAtom {
    int fluent = -1;
    int value = -1;  // index into the fluent's value domain

    bool operator==(const GroundAtom& o) const { return fluent == o.fluent && value == o.value; }
};

struct GroundLaw {
    CausalLaw::Kind kind = CausalLaw::Kind::Static;
    int action = -1;                 // Dynamic / Nonexecutable
    GroundAtom head;                 // Static / Dynamic / Default
    std::vector<GroundAtom> body;
    int source_law = -1;             // index into the description's law list
};

// Complete assignment of a value index to every ground fluent.
struct SymbolicState {
    std::vector<std::int32_t> v;

    bool operator==(const SymbolicState& o) const { return v == o.v; }
    bool operator!=(const SymbolicState& o) const { return v != o.v; }
};

struct SymbolicStateHash {
    size_t operator()(const SymbolicState& s) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int32_t x : s.v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ULL;
        }
        return static_cast<size_t>(h);
    }
};

struct GroundConfig {
    size_t max_law_instances = 2'000'000;
};

class GroundDomain {
public:
    std::vector<GroundFluent> fluents;
    std::vector<GroundAction> actions;
    std::vector<GroundLaw> laws;

    // Law indexes used by successor().
    std::vector<std::vector<int>> dynamic_by_action;
    std::vector<std::vector<int>> nonexecutable_by_action;
    std::vector<int> static_laws;
    std::vector<bool> inertial;            // per ground fluent
    std::vector<int> default_value;        // per ground fluent; -1 = none

    int fluent_id(const std::string& name) const;   // -1 if unknown
    int action_id(const std::string& name) const;   // -1 if unknown
    int value_id(int fluent, const Constant& value) const;  // -1 if not in domain

    // Resolves a ground written atom against the universe; throws on
    // unknown fluents, variables, arity or out-of-domain values.
    GroundAtom resolve_atom(const FluentAtom& atom) const;

    std::string atom_string(const GroundAtom& a) const;
    // Canonical state rendering: true booleans plus every non-boolean value,
    // comma-joined in fluent order ("pos(9,8),passenger=intaxi").
    std::string state_string(const SymbolicState& s) const;

    std::unordered_map<std::string, int> fluent_index;
    std::unordered_map<std::string, int> action_index;
};

// Instantiates every law over the declared sorts. Instances with a term
// falling outside its sort are dropped (out-of-range arithmetic). Throws
// GroundingError with a size report when the instance cap is exceeded.
GroundDomain ground(const ActionDescription& desc, const GroundConfig& cfg = {});

// Completes a partial assignment: given atoms, then defaults, then static
// closure. Throws GroundingError when fluents stay unvalued ("incomplete")
// or the closure contradicts the assignment ("contradictory").
SymbolicState initial_state(const GroundDomain& g, const std::vector<FluentAtom>& partial);
SymbolicState initial_state(const GroundDomain& g, const std::vector<GroundAtom>& partial);

// Deterministic successor. Returns nullopt when a nonexecutable law fires.
// Value resolution: dynamic effect > inertia > default > static closure;
// conflicting dynamic effects or unvalued fluents raise GroundingError.
std::optional<SymbolicState> successor(const GroundDomain& g, const SymbolicState& s, int action);

struct Transition {
    int from = -1;
    int action = -1;
    int to = -1;
};

struct ReachableGraph {
    std::vector<SymbolicState> states;  // discovery (BFS) order; index = state id
    std::unordered_map<SymbolicState, int, SymbolicStateHash> index;
    std::vector<Transition> transitions;           // grouped by source state
    std::vector<std::pair<int, int>> out_edges;    // per state: [begin, end) into transitions
    bool capped = false;

    int state_id(const SymbolicState& s) const {
        auto it = index.find(s);
        return it == index.end() ? -1 : it->second;
    }
};

struct EnumerateLimits {
    size_t max_states = 1'000'000;
};

// Fixed point of successor from I, deterministic ordering. Throws on cap.
ReachableGraph enumerate_reachable(const GroundDomain& g, const SymbolicState& I,
                                   const EnumerateLimits& limits = {});
// Same, but reports cap overflow through graph.capped instead of throwing.
ReachableGraph enumerate_reachable_capped(const GroundDomain& g, const SymbolicState& I,
                                          const EnumerateLimits& limits = {});

// Line-oriented debug dump: "STATE <id> <atom,...>" / "TRANS <from> <action> <to>".
void dump_transition_system(std::ostream& os, const GroundDomain& g, const ReachableGraph& graph);

}  // namespace peorl
