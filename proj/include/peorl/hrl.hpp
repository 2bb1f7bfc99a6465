#pragma once

// Options machinery and hierarchical R-learning. A symbolic transition
// ⟨s,a,t⟩ maps to an option: initiation state s, a set of admissible MDP
// actions realizing a, and a termination predicate that is true exactly on
// MDP states abstracting to t. Learning keeps average-adjusted values R and
// gain rewards ρ at two levels: per MDP step inside an option, and per
// option over symbolic states.

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "peorl/env.hpp"
#include "peorl/grounding.hpp"
#include "peorl/planner.hpp"
#include "peorl/rng.hpp"

namespace peorl {

struct OptionSpec {
    SymbolicState initiation;      // the transition's source state
    int action = -1;               // the ground action being realized
    SymbolicState target;          // termination: abstract(env state) == target
    std::vector<int> admissible;   // MDP action ids the option may take
    int step_cap = 100;
};

// Which MDP actions realize each symbolic action. Keys are ground action
// names ("move(e)", "push"); schematic entries keyed by the action's base
// name apply to every ground instance ("move" -> one id per direction is
// spelled out explicitly instead, so lookups try the full name first).
struct ActionCatalog {
    std::unordered_map<std::string, std::vector<int>> realizations;
    int step_cap = 100;
};

OptionSpec map_transition_to_option(const GroundDomain& g, const SymbolicState& from, int action,
                                    const SymbolicState& to, const ActionCatalog& catalog);
std::vector<OptionSpec> map_plan_to_options(const GroundDomain& g, const Plan& p,
                                            const ActionCatalog& catalog);

struct StateActionKey {
    SymbolicState state;
    int action = -1;
    bool operator==(const StateActionKey& o) const {
        return action == o.action && state == o.state;
    }
};
struct StateActionKeyHash {
    size_t operator()(const StateActionKey& k) const {
        return SymbolicStateHash{}(k.state) * 31 + static_cast<size_t>(k.action);
    }
};

struct EnvStateAction {
    std::int64_t state = 0;
    int action = -1;
    bool operator==(const EnvStateAction& o) const {
        return state == o.state && action == o.action;
    }
};
struct EnvStateActionHash {
    size_t operator()(const EnvStateAction& k) const {
        return static_cast<size_t>(k.state) * 131 + static_cast<size_t>(k.action);
    }
};

// Missing entries read as 0 everywhere.
struct LearningTables {
    using OptionTable = std::unordered_map<StateActionKey, double, StateActionKeyHash>;
    struct IntraTable {
        std::unordered_map<EnvStateAction, double, EnvStateActionHash> r;
        std::unordered_map<EnvStateAction, double, EnvStateActionHash> rho;
    };

    OptionTable option_r;
    OptionTable option_rho;
    std::unordered_map<StateActionKey, IntraTable, StateActionKeyHash> intra;

    double get_option_r(const SymbolicState& s, int action) const;
    double get_option_rho(const SymbolicState& s, int action) const;
    // Max of option-level R over the given ground actions; empty set -> 0.
    double max_option_r(const SymbolicState& s, const std::vector<int>& actions) const;
};

struct Rates {
    double alpha = 1.0;
    double beta = 0.5;
    double epsilon = 0.0;
};

// Linear anneal from initial to final over `horizon` steps, flat afterwards.
struct Schedule {
    double initial = 1.0;
    double final = 0.01;
    int horizon = 1;

    double at(int t) const {
        if (t >= horizon || horizon <= 0) return final;
        return initial + (final - initial) * (static_cast<double>(t) / horizon);
    }
    static Schedule constant(double v) { return {v, v, 0}; }
};

struct LearningConfig {
    Schedule alpha{1.0, 0.01, 1000};
    double beta = 0.5;
    Schedule epsilon_intra{0.2, 0.0, 500};
    int step_cap = 100;

    Rates at(int episode) const {
        return {alpha.at(episode), beta, epsilon_intra.at(episode)};
    }
};

// One MDP-level update inside an option (both R and ρ read the pre-update
// tables). Maxima range over the option's admissible actions only.
void intra_option_update(LearningTables& tables, const OptionSpec& option, std::int64_t x,
                         int env_action, double reward, std::int64_t y, const Rates& rates);

// Option-termination update over symbolic states; r_cum is the cumulative
// reward the option accrued. Maxima range over the ground actions executable
// in the respective states (graph out-edges).
void option_terminal_update(LearningTables& tables, const ReachableGraph& graph,
                            const SymbolicState& s_prev, int a_prev, double r_cum,
                            const SymbolicState& s_next, const Rates& rates);

struct OptionRunResult {
    double cumulative_reward = 0.0;
    int steps = 0;
    int failures = 0;
    bool terminated = false;
    std::int64_t final_state = 0;
};

// Runs one option to termination or step_cap: ε-greedy over the admissible
// actions by intra R, one intra_option_update per env step. The env's
// current state must abstract to the option's initiation state.
OptionRunResult run_option(const OptionSpec& option, Environment& env, LearningTables& tables,
                           const Rates& rates, Rng& rng);

// Plan quality: sum of option-level ρ over the plan's transitions.
double plan_quality(const Plan& p, const LearningTables& tables);

// Greedy (ε=0), update-free execution of a plan's options against the env
// (which is reset first). Used to measure a plan's actual cumulative reward.
struct GreedyRollout {
    double cum_reward = 0.0;
    int steps = 0;
    int failures = 0;
    bool completed = false;
};
GreedyRollout greedy_plan_rollout(const GroundDomain& g, const Plan& p,
                                  const ActionCatalog& catalog, Environment& env,
                                  const LearningTables& tables);

// Table snapshots, line oriented and sorted for byte-stable output:
//   R <state> <action> <value> / RHO <state> <action> <value>
//   IR <state> <action> <env-state-id> <env-action> <value> / IRHO ...
void save_tables(std::ostream& os, const GroundDomain& g, const Environment& env,
                 const LearningTables& tables);
LearningTables load_tables(std::istream& is, const GroundDomain& g, const Environment& env);

// Rebuilds a state from its canonical string (true booleans and non-boolean
// values; omitted booleans are false).
SymbolicState state_from_string(const GroundDomain& g, const std::string& text);

}  // namespace peorl
