#pragma once

// Quality-constrained symbolic planning over the grounded transition system:
// finds a loop-free path from the initial state to a goal-satisfying state
// maximizing the estimated quality (sum of gain-reward lookups, with an
// optimistic default for unexplored transitions), subject to a linear
// constraint. Ties break on shorter length, then a fixed action order.

#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "peorl/grounding.hpp"

namespace peorl {

struct QualityConstraint {
    enum class Cmp { Ge, Gt };
    Cmp cmp = Cmp::Ge;
    double threshold = -std::numeric_limits<double>::infinity();  // -inf = unconstrained

    bool satisfied(double quality) const {
        return cmp == Cmp::Ge ? quality >= threshold : quality > threshold;
    }
    static QualityConstraint none() { return {}; }
    static QualityConstraint at_least(double n) { return {Cmp::Ge, n}; }
    static QualityConstraint above(double n) { return {Cmp::Gt, n}; }
};

struct GoalSpec {
    std::vector<GroundAtom> goal_atoms;
    QualityConstraint constraint;

    bool satisfied_by(const SymbolicState& s) const {
        for (const auto& a : goal_atoms)
            if (s.v[a.fluent] != a.value) return false;
        return true;
    }
};

GoalSpec make_goal(const GroundDomain& g, const std::vector<FluentAtom>& atoms,
                   QualityConstraint constraint = QualityConstraint::none());

// Learned gain-reward facts keyed by (state, action); misses read as
// inf_value, the optimistic default that drives exploration.
class RhoFacts {
public:
    double inf_value = std::numeric_limits<double>::infinity();

    void set(const SymbolicState& s, int action, double value) { table_[{s, action}] = value; }
    const double* find(const SymbolicState& s, int action) const {
        auto it = table_.find({s, action});
        return it == table_.end() ? nullptr : &it->second;
    }
    size_t size() const { return table_.size(); }
    bool empty() const { return table_.empty(); }

    template <typename Fn>  // Fn(const SymbolicState&, int action, double value)
    void for_each(Fn&& fn) const {
        for (const auto& [key, value] : table_) fn(key.state, key.action, value);
    }

private:
    struct Key {
        SymbolicState state;
        int action;
        bool operator==(const Key& o) const { return action == o.action && state == o.state; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            return SymbolicStateHash{}(k.state) * 31 + static_cast<size_t>(k.action);
        }
    };
    std::unordered_map<Key, double, KeyHash> table_;

    friend class RhoFactsTestPeek;
};

double rho_lookup(const RhoFacts& facts, const SymbolicState& s, int action);

struct Plan {
    std::vector<SymbolicState> states;  // s1..sl; states.size() == actions.size() + 1
    std::vector<int> actions;           // ground action ids
    double estimated_quality = 0.0;

    size_t length() const { return actions.size(); }
    bool empty() const { return actions.empty(); }
    bool operator==(const Plan& o) const { return states == o.states && actions == o.actions; }
};

struct PlannerConfig {
    int max_horizon = 64;
    size_t state_cap = 1'000'000;
    std::vector<int> tie_break;  // action exploration order; empty = id order
};

struct PlanResult {
    std::optional<Plan> plan;
    // Set when the search was cut by the horizon or state cap while a
    // qualifying plan might still exist beyond it; distinguishes caps from
    // genuine unsatisfiability.
    bool truncated = false;
};

PlanResult plan(const SymbolicState& I, const GoalSpec& goal, const GroundDomain& g,
                const RhoFacts& facts, const PlannerConfig& cfg);

// Same search over a pre-enumerated graph (the training loop reuses one
// graph across all episodes). initial_id must be a state of the graph.
PlanResult plan_on_graph(const ReachableGraph& graph, int initial_id, const GoalSpec& goal,
                         const RhoFacts& facts, const PlannerConfig& cfg, bool graph_capped);

double plan_quality_estimate(const Plan& p, const RhoFacts& facts);

// Transition-by-transition soundness: every step validates against
// successor() and the final state satisfies the goal atoms.
bool plan_is_sound(const GroundDomain& g, const Plan& p, const GoalSpec& goal);

std::string plan_to_string(const GroundDomain& g, const Plan& p);

}  // namespace peorl
