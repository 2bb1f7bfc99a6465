#include "peorl/peorl_loop.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace peorl {

EpisodeExec run_episode(const GroundDomain& g, const ReachableGraph& graph, const Plan& p,
                        const ActionCatalog& catalog, Environment& env, LearningTables& tables,
                        const Rates& rates, Rng& rng) {
    env.reset();
    EpisodeExec exec;
    for (size_t i = 0; i < p.actions.size(); ++i) {
        if (env.done()) break;
        OptionSpec option =
            map_transition_to_option(g, p.states[i], p.actions[i], p.states[i + 1], catalog);
        if (env.abstract_state() != option.initiation) break;  // off the symbolic track
        OptionRunResult run = run_option(option, env, tables, rates, rng);
        exec.cum_reward += run.cumulative_reward;
        exec.failures += run.failures;
        if (!run.terminated) break;
        option_terminal_update(tables, graph, p.states[i], p.actions[i], run.cumulative_reward,
                               p.states[i + 1], rates);
        ++exec.options_completed;
    }
    exec.fully = exec.options_completed == p.actions.size();
    return exec;
}

void export_facts(RhoFacts& facts, const LearningTables& tables, const Plan& p, size_t upto) {
    const size_t n = std::min(upto, p.actions.size());
    for (size_t i = 0; i < n; ++i)
        facts.set(p.states[i], p.actions[i], tables.get_option_rho(p.states[i], p.actions[i]));
}

TrainResult peorl_train(const GroundDomain& g, const ReachableGraph& graph, int initial_id,
                        const std::vector<GroundAtom>& goal_atoms, const ActionCatalog& catalog,
                        Environment& env, const LoopConfig& cfg, Rng& rng) {
    TrainResult result;
    QualityConstraint constraint = QualityConstraint::none();  // G0 = (A, ∅)

    std::optional<Plan> current;
    bool force_replan = true;  // the first iteration always plans
    std::vector<Plan> executed_distinct;
    std::unordered_set<std::string> executed_keys;

    auto plan_key = [&](const Plan& p) {
        std::string key;
        for (int a : p.actions) key += g.actions[a].name + ";";
        key += "@" + g.state_string(p.states.front());
        return key;
    };

    for (int episode = 0; episode < cfg.max_episodes; ++episode) {
        const Rates rates = cfg.learning.at(episode);
        bool replanned = false;

        const bool want_plan = force_replan || rng.next_bernoulli(cfg.epsilon_plan);
        if (want_plan) {
            GoalSpec goal{goal_atoms, constraint};
            PlanResult planned = plan_on_graph(graph, initial_id, goal, result.facts, cfg.planner,
                                               /*graph_capped=*/false);
            if (planned.plan) {
                if (!plan_is_sound(g, *planned.plan, goal))
                    throw std::logic_error("planner returned an unsound plan");
                current = std::move(planned.plan);
                replanned = true;
                force_replan = false;
            } else if (!planned.truncated) {
                // Genuinely nothing beats the constraint: return the plan in
                // hand (Π_o) as converged.
                result.converged = true;
                break;
            } else if (!current) {
                // Truncated with no plan to fall back on; try again next
                // episode rather than terminating.
                force_replan = true;
                continue;
            }
            // Truncated but a current plan exists: keep executing it.
        }

        EpisodeExec exec =
            run_episode(g, graph, *current, catalog, env, result.tables, rates, rng);
        if (exec.fully) {
            const double q = plan_quality(*current, result.tables);
            constraint = QualityConstraint::above(q);
            export_facts(result.facts, result.tables, *current, current->actions.size());
            if (executed_keys.insert(plan_key(*current)).second)
                executed_distinct.push_back(*current);
        } else {
            export_facts(result.facts, result.tables, *current, exec.options_completed);
            force_replan = true;
        }

        result.log.push_back({episode, exec.cum_reward, static_cast<int>(current->length()),
                              exec.failures, plan_quality(*current, result.tables), exec.fully,
                              replanned});
    }

    if (result.converged) {
        result.final_plan = current;
    } else if (!executed_distinct.empty()) {
        // Out of episodes: the table estimates of rarely re-executed plans
        // are still partial (β blends toward the target), so rank the
        // executed candidates by their measured greedy rollout reward.
        // First-executed wins ties.
        size_t best = 0;
        double best_reward = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < executed_distinct.size(); ++i) {
            GreedyRollout rollout =
                greedy_plan_rollout(g, executed_distinct[i], catalog, env, result.tables);
            double measured = rollout.completed
                                  ? rollout.cum_reward
                                  : -std::numeric_limits<double>::infinity();
            if (measured > best_reward) {
                best_reward = measured;
                best = i;
            }
        }
        result.final_plan = executed_distinct[best];
    } else {
        result.final_plan = current;
    }

    if (result.final_plan) {
        GoalSpec goal{goal_atoms, QualityConstraint::none()};
        if (!plan_is_sound(g, *result.final_plan, goal))
            throw std::logic_error("trained plan failed the soundness check");
    }
    return result;
}

}  // namespace peorl
