#pragma once

// Experiment harness: configuration, the four agents (PEORL, flat Q-learning,
// pure planning, hand-crafted-options hierarchical Q-learning), seed
// management and CSV logging. CSV rows are byte-stable for a fixed config.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peorl/domains.hpp"
#include "peorl/peorl_loop.hpp"
#include "peorl/taxi.hpp"

namespace peorl {

enum class AgentKind { Peorl, Q, Planner, Hrl };
enum class DomainKind { Taxi1, Taxi2, GridWorld };

std::optional<AgentKind> parse_agent(const std::string& name);
std::optional<DomainKind> parse_domain(const std::string& name);
const char* agent_name(AgentKind kind);
const char* domain_name(DomainKind kind);

struct ExperimentConfig {
    AgentKind agent = AgentKind::Peorl;
    DomainKind domain = DomainKind::Taxi1;
    int episodes = 2000;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    Schedule alpha{1.0, 0.01, 0};          // horizon 0 = episodes/2
    double beta = 0.5;
    double gamma = 0.95;                   // Q-learning baselines only
    double epsilon_plan = 0.3;
    Schedule epsilon_action{1.0, 0.0, 0};  // flat/hierarchical Q exploration
    Schedule epsilon_intra{0.2, 0.0, 0};   // intra-option exploration
    int step_cap = 100;                    // per-option env step cap
    int max_steps = 0;                     // flat/HRL episode cap; 0 = domain default
    int planner_horizon = 0;               // 0 = domain default

    std::string out_path;
    std::string save_tables_path;          // peorl, single seed: final table snapshot
    bool timing = false;                   // real ms column (breaks byte-stability)
    int threads = 1;
};

struct EpisodeRecord {
    std::uint64_t seed = 0;
    int episode = 0;
    double cum_reward = 0.0;
    int plan_len = 0;
    int failures = 0;
    double quality = 0.0;
    long long ms = 0;
};

// Shared per-domain fixture (immutable once built; seeds share it).
struct ExperimentContext {
    DomainKind kind = DomainKind::Taxi1;
    ActionDescription description;
    GroundDomain grounded;
    ActionCatalog catalog;
    int default_horizon = 20;
    int default_max_steps = 500;
};

ExperimentContext make_context(DomainKind kind);
std::unique_ptr<Environment> make_env(const ExperimentContext& ctx, std::uint64_t seed);
std::vector<GroundAtom> goal_atoms_for(const ExperimentContext& ctx, const Environment& env);

// ---------------------------------------------------------------------------
// Agents. Each episode function runs one episode and leaves learned state in
// the caller-owned tables.

struct QTable {
    std::vector<double> values;
    int n_actions = 0;

    QTable(std::int64_t n_states, int actions)
        : values(static_cast<size_t>(n_states) * actions, 0.0), n_actions(actions) {}
    double& at(std::int64_t s, int a) { return values[static_cast<size_t>(s) * n_actions + a]; }
    double get(std::int64_t s, int a) const {
        return values[static_cast<size_t>(s) * n_actions + a];
    }
    int argmax(std::int64_t s) const;   // ties -> lowest action id
    double max(std::int64_t s) const;
};

EpisodeRecord q_agent_episode(Environment& env, QTable& q, double alpha, double epsilon,
                              double gamma, Rng& rng, int max_steps);

struct PAgentEpisode {
    EpisodeRecord record;
    bool visited_bonus = false;
    bool reached_goal = false;
};

// The pure planning agent: shortest plans (all-optimistic facts), a fixed
// uniform-random intra-option policy, no learning, replanning from the
// observed state whenever an option fails to complete.
PAgentEpisode p_agent_episode(const ExperimentContext& ctx, const ReachableGraph& graph,
                              const std::vector<GroundAtom>& goal_atoms, Environment& env,
                              const PlannerConfig& pcfg, Rng& rng, int max_steps,
                              const ActionCatalog* catalog_override = nullptr);

// Hierarchical Q-learning over hand-crafted Taxi options: go-to-depot(d),
// pickup, dropoff; intra-option policies are themselves Q-learned.
struct HrlTables {
    QTable option_q;
    std::vector<QTable> goto_q;  // one per depot, over the 4 move actions

    explicit HrlTables(std::int64_t n_states)
        : option_q(n_states, 6), goto_q(4, QTable(n_states, 4)) {}
};

EpisodeRecord hrl_agent_episode(TaxiEnv& env, HrlTables& tables, double alpha, double epsilon,
                                double gamma, Rng& rng, int max_steps);

// Greedy (ε=0), update-free execution of a plan's options against the env.
struct RolloutResult {
    double cum_reward = 0.0;
    int steps = 0;
    int failures = 0;
    bool completed = false;
    bool visited_bonus = false;
};
RolloutResult evaluate_plan_rollout(const GroundDomain& g, const Plan& p,
                                  const ActionCatalog& catalog, Environment& env,
                                  const LearningTables& tables);

RhoFacts facts_from_tables(const LearningTables& tables, double inf_value);

// ---------------------------------------------------------------------------

struct SeedRun {
    std::vector<EpisodeRecord> records;
    std::optional<Plan> final_plan;       // peorl only
    bool converged = false;               // peorl only
    LearningTables tables;                // peorl only
};

SeedRun run_seed(const ExperimentContext& ctx, const ExperimentConfig& cfg, std::uint64_t seed);

std::vector<EpisodeRecord> run_experiment_records(const ExperimentConfig& cfg);
void write_csv(std::ostream& os, const std::vector<EpisodeRecord>& records);
// Runs the experiment and writes the CSV to cfg.out_path (or stdout when
// empty). Returns a process exit code.
int run_experiment(const ExperimentConfig& cfg);

// Facts loader for the CLI: reads RHO lines of a table snapshot.
RhoFacts load_rho_facts(std::istream& is, const GroundDomain& g);

}  // namespace peorl
