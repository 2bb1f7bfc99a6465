#pragma once

// The training loop: plan under the current gain-reward facts, execute the
// plan's options with hierarchical R-learning, recompute the plan quality,
// tighten the goal's quality constraint to beat it, export the learned gain
// rewards as planner facts, repeat until the planner reports that no better
// plan exists.

#include <optional>
#include <vector>

#include "peorl/hrl.hpp"
#include "peorl/planner.hpp"

namespace peorl {

struct LoopConfig {
    double epsilon_plan = 0.5;  // probability of invoking the planner per episode
    int max_episodes = 2000;
    LearningConfig learning;
    PlannerConfig planner;
};

struct EpisodeOutcome {
    int episode = 0;
    double cum_reward = 0.0;
    int plan_length = 0;
    int failures = 0;
    double quality = 0.0;       // plan quality under the tables after the episode
    bool executed_fully = false;
    bool replanned = false;
};

struct TrainResult {
    std::optional<Plan> final_plan;
    bool converged = false;     // planner reported genuine unsatisfiability
    std::vector<EpisodeOutcome> log;
    LearningTables tables;
    RhoFacts facts;
};

struct EpisodeExec {
    double cum_reward = 0.0;
    int failures = 0;
    size_t options_completed = 0;
    bool fully = false;
};

// Executes one plan against the env (which is reset first): options run in
// plan order with intra-option updates, each termination followed by the
// option-level update. An option that fails to terminate ends the episode
// early.
EpisodeExec run_episode(const GroundDomain& g, const ReachableGraph& graph, const Plan& p,
                        const ActionCatalog& catalog, Environment& env, LearningTables& tables,
                        const Rates& rates, Rng& rng);

// Writes one fact per transition of p (up to the first `upto` transitions)
// with the current option-level ρ; later exports overwrite earlier values
// for the same key.
void export_facts(RhoFacts& facts, const LearningTables& tables, const Plan& p, size_t upto);

TrainResult peorl_train(const GroundDomain& g, const ReachableGraph& graph, int initial_id,
                        const std::vector<GroundAtom>& goal_atoms, const ActionCatalog& catalog,
                        Environment& env, const LoopConfig& cfg, Rng& rng);

}  // namespace peorl
