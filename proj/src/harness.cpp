#include "peorl/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "peorl/gridworld.hpp"
#include "peorl/taxi.hpp"

namespace peorl {

namespace {

constexpr std::uint64_t kEnvRole = 0x7a1;  // shared with env seed derivation
constexpr std::uint64_t kAgentRole = 0x11;

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

Schedule resolve_schedule(Schedule s, int episodes) {
    if (s.horizon <= 0) s.horizon = std::max(1, episodes / 2);
    return s;
}

}  // namespace

std::optional<AgentKind> parse_agent(const std::string& name) {
    if (name == "peorl") return AgentKind::Peorl;
    if (name == "q") return AgentKind::Q;
    if (name == "planner") return AgentKind::Planner;
    if (name == "hrl") return AgentKind::Hrl;
    return std::nullopt;
}

std::optional<DomainKind> parse_domain(const std::string& name) {
    if (name == "taxi1") return DomainKind::Taxi1;
    if (name == "taxi2") return DomainKind::Taxi2;
    if (name == "gridworld") return DomainKind::GridWorld;
    return std::nullopt;
}

const char* agent_name(AgentKind kind) {
    switch (kind) {
        case AgentKind::Peorl: return "peorl";
        case AgentKind::Q: return "q";
        case AgentKind::Planner: return "planner";
        case AgentKind::Hrl: return "hrl";
    }
    return "?";
}

const char* domain_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::Taxi1: return "taxi1";
        case DomainKind::Taxi2: return "taxi2";
        case DomainKind::GridWorld: return "gridworld";
    }
    return "?";
}

ExperimentContext make_context(DomainKind kind) {
    ExperimentContext ctx;
    ctx.kind = kind;
    const std::string& text =
        kind == DomainKind::GridWorld ? gridworld_domain_text() : taxi_domain_text();
    ParseResult parsed = parse_action_description(text);
    if (!parsed.ok())
        throw std::runtime_error("builtin domain failed to parse:\n" +
                                 format_diagnostics(parsed.diagnostics));
    ctx.description = std::move(*parsed.description);
    ctx.grounded = ground(ctx.description);
    if (kind == DomainKind::GridWorld) {
        ctx.catalog = gridworld_catalog();
        ctx.default_horizon = 20;
        ctx.default_max_steps = 1000;
    } else {
        ctx.catalog = taxi_catalog();
        ctx.default_horizon = 24;
        ctx.default_max_steps = 500;
    }
    return ctx;
}

std::unique_ptr<Environment> make_env(const ExperimentContext& ctx, std::uint64_t seed) {
    if (ctx.kind == DomainKind::GridWorld)
        return std::make_unique<GridWorldEnv>(ctx.grounded, GridWorldConfig{seed});
    TaxiConfig cfg;
    cfg.scenario = ctx.kind == DomainKind::Taxi2 ? 2 : 1;
    cfg.seed = seed;
    return std::make_unique<TaxiEnv>(ctx.grounded, cfg);
}

std::vector<GroundAtom> goal_atoms_for(const ExperimentContext& ctx, const Environment& env) {
    std::vector<Diagnostic> diags;
    std::string text;
    if (ctx.kind == DomainKind::GridWorld) {
        text = "pos(9,10), dooractive, dooropen";
    } else {
        const auto& taxi = dynamic_cast<const TaxiEnv&>(env);
        text = std::string("passenger=") + kTaxiDepotNames[taxi.destination()];
    }
    auto atoms = parse_fluent_atoms(text, diags);
    std::vector<GroundAtom> out;
    for (const auto& a : atoms) out.push_back(ctx.grounded.resolve_atom(a));
    return out;
}

int QTable::argmax(std::int64_t s) const {
    int best = 0;
    double best_v = get(s, 0);
    for (int a = 1; a < n_actions; ++a) {
        double v = get(s, a);
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    return best;
}

double QTable::max(std::int64_t s) const {
    double best = get(s, 0);
    for (int a = 1; a < n_actions; ++a) best = std::max(best, get(s, a));
    return best;
}

EpisodeRecord q_agent_episode(Environment& env, QTable& q, double alpha, double epsilon,
                              double gamma, Rng& rng, int max_steps) {
    env.reset();
    EpisodeRecord record;
    int steps = 0;
    while (!env.done() && steps < max_steps) {
        const std::int64_t s = env.state_id();
        int a = rng.next_bernoulli(epsilon) ? static_cast<int>(rng.next_below(q.n_actions))
                                            : q.argmax(s);
        StepResult res = env.step(a);
        const std::int64_t y = env.state_id();
        const double target = res.reward + (res.done ? 0.0 : gamma * q.max(y));
        q.at(s, a) += alpha * (target - q.at(s, a));
        record.cum_reward += res.reward;
        record.failures += res.failed ? 1 : 0;
        ++steps;
    }
    return record;
}

PAgentEpisode p_agent_episode(const ExperimentContext& ctx, const ReachableGraph& graph,
                              const std::vector<GroundAtom>& goal_atoms, Environment& env,
                              const PlannerConfig& pcfg, Rng& rng, int max_steps,
                              const ActionCatalog* catalog_override) {
    env.reset();
    PAgentEpisode out;
    RhoFacts optimistic;  // empty: every transition reads as INF
    GoalSpec goal{goal_atoms, QualityConstraint::none()};
    const ActionCatalog& catalog = catalog_override ? *catalog_override : ctx.catalog;

    int total_steps = 0;
    while (!env.done() && total_steps < max_steps) {
        const SymbolicState current = env.abstract_state();
        const int sid = graph.state_id(current);
        if (sid < 0) break;
        PlanResult planned = plan_on_graph(graph, sid, goal, optimistic, pcfg, false);
        if (!planned.plan) break;
        if (out.record.plan_len == 0) out.record.plan_len = static_cast<int>(planned.plan->length());
        if (planned.plan->empty()) break;

        bool track_lost = false;
        for (size_t i = 0; i < planned.plan->actions.size() && !track_lost; ++i) {
            OptionSpec option =
                map_transition_to_option(ctx.grounded, planned.plan->states[i],
                                         planned.plan->actions[i], planned.plan->states[i + 1],
                                         catalog);
            if (env.abstract_state() != option.initiation) {
                track_lost = true;
                break;
            }
            int option_steps = 0;
            bool terminated = false;
            while (total_steps < max_steps) {
                if (env.abstract_state() == option.target) {
                    terminated = true;
                    break;
                }
                if (option_steps >= option.step_cap || env.done()) break;
                int a = option.admissible[rng.next_below(option.admissible.size())];
                StepResult res = env.step(a);
                out.record.cum_reward += res.reward;
                out.record.failures += res.failed ? 1 : 0;
                ++option_steps;
                ++total_steps;
            }
            if (!terminated) track_lost = true;  // replan from wherever we are
        }
        if (ctx.kind != DomainKind::GridWorld)
            out.visited_bonus |= dynamic_cast<TaxiEnv&>(env).reward_visited();
        if (!track_lost) break;
    }
    out.reached_goal = env.done();
    if (ctx.kind != DomainKind::GridWorld)
        out.visited_bonus |= dynamic_cast<TaxiEnv&>(env).reward_visited();
    return out;
}

namespace {

// Option availability: go-to-depot(d) anywhere except at d itself;
// pickup/dropoff anywhere.
std::vector<int> hrl_available_options(const TaxiEnv& env) {
    std::vector<int> available;
    for (int d = 0; d < 4; ++d) {
        Cell depot = env.depot_cell(d);
        if (!(env.row() == depot.row && env.col() == depot.col)) available.push_back(d);
    }
    available.push_back(4);
    available.push_back(5);
    return available;
}

double hrl_max_available(const QTable& q, const TaxiEnv& env) {
    double best = -std::numeric_limits<double>::infinity();
    for (int o : hrl_available_options(env)) best = std::max(best, q.get(env.state_id(), o));
    return best;
}

}  // namespace

EpisodeRecord hrl_agent_episode(TaxiEnv& env, HrlTables& tables, double alpha, double epsilon,
                                double gamma, Rng& rng, int max_steps) {
    env.reset();
    EpisodeRecord record;
    int steps = 0;
    constexpr int kGotoCap = 100;

    while (!env.done() && steps < max_steps) {
        const std::int64_t s = env.state_id();
        std::vector<int> available = hrl_available_options(env);

        int option;
        if (rng.next_bernoulli(epsilon)) {
            option = available[rng.next_below(available.size())];
        } else {
            option = available.front();
            double best = tables.option_q.get(s, option);
            for (int o : available) {
                double v = tables.option_q.get(s, o);
                if (v > best) {
                    best = v;
                    option = o;
                }
            }
        }

        double r_cum = 0.0;  // discounted inside the option
        double discount = 1.0;
        int tau = 0;
        bool env_done = false;
        if (option < 4) {
            QTable& intra = tables.goto_q[option];
            const Cell depot = env.depot_cell(option);
            while (steps < max_steps && tau < kGotoCap) {
                if (env.row() == depot.row && env.col() == depot.col) break;
                const std::int64_t x = env.state_id();
                int a = rng.next_bernoulli(epsilon) ? static_cast<int>(rng.next_below(4))
                                                    : intra.argmax(x);
                StepResult res = env.step(a);
                const std::int64_t y = env.state_id();
                const bool at_depot = env.row() == depot.row && env.col() == depot.col;
                const double target = res.reward + (at_depot ? 0.0 : gamma * intra.max(y));
                intra.at(x, a) += alpha * (target - intra.at(x, a));
                record.cum_reward += res.reward;
                record.failures += res.failed ? 1 : 0;
                r_cum += discount * res.reward;
                discount *= gamma;
                ++tau;
                ++steps;
                if (res.done) {
                    env_done = true;
                    break;
                }
            }
        } else {
            StepResult res = env.step(option == 4 ? TaxiEnv::kPickup : TaxiEnv::kDropoff);
            record.cum_reward += res.reward;
            record.failures += res.failed ? 1 : 0;
            r_cum = res.reward;
            discount = gamma;
            tau = 1;
            ++steps;
            env_done = res.done;
        }

        const double bootstrap =
            env_done ? 0.0 : discount * hrl_max_available(tables.option_q, env);
        tables.option_q.at(s, option) += alpha * (r_cum + bootstrap - tables.option_q.at(s, option));
        if (env_done) break;
    }
    return record;
}

RolloutResult evaluate_plan_rollout(const GroundDomain& g, const Plan& p,
                                  const ActionCatalog& catalog, Environment& env,
                                  const LearningTables& tables) {
    GreedyRollout run = peorl::greedy_plan_rollout(g, p, catalog, env, tables);
    RolloutResult out;
    out.cum_reward = run.cum_reward;
    out.steps = run.steps;
    out.failures = run.failures;
    out.completed = run.completed;
    if (auto* taxi = dynamic_cast<TaxiEnv*>(&env)) out.visited_bonus = taxi->reward_visited();
    return out;
}

RhoFacts facts_from_tables(const LearningTables& tables, double inf_value) {
    RhoFacts facts;
    facts.inf_value = inf_value;
    for (const auto& [key, value] : tables.option_rho) facts.set(key.state, key.action, value);
    return facts;
}

SeedRun run_seed(const ExperimentContext& ctx, const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedRun run;
    std::unique_ptr<Environment> env = make_env(ctx, seed);
    Rng rng(derive_seed(seed, kAgentRole));

    const Schedule alpha = resolve_schedule(cfg.alpha, cfg.episodes);
    const Schedule eps_action = resolve_schedule(cfg.epsilon_action, cfg.episodes);
    const Schedule eps_intra = resolve_schedule(cfg.epsilon_intra, cfg.episodes);
    const int horizon = cfg.planner_horizon > 0 ? cfg.planner_horizon : ctx.default_horizon;
    const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : ctx.default_max_steps;

    auto stamp = [&](EpisodeRecord& r, int episode, long long ms) {
        r.seed = seed;
        r.episode = episode;
        r.ms = cfg.timing ? ms : 0;
    };
    auto now = [] { return std::chrono::steady_clock::now(); };
    auto ms_between = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    };

    ActionCatalog catalog = ctx.catalog;
    catalog.step_cap = cfg.step_cap;

    switch (cfg.agent) {
        case AgentKind::Peorl: {
            const SymbolicState I = env->abstract_state();
            ReachableGraph graph = enumerate_reachable(ctx.grounded, I);
            const std::vector<GroundAtom> goal = goal_atoms_for(ctx, *env);

            LoopConfig lc;
            lc.epsilon_plan = cfg.epsilon_plan;
            lc.max_episodes = cfg.episodes;
            lc.learning = {alpha, cfg.beta, eps_intra, cfg.step_cap};
            lc.planner.max_horizon = horizon;
            lc.planner.state_cap = 1'000'000;

            auto t0 = now();
            TrainResult trained =
                peorl_train(ctx.grounded, graph, 0, goal, catalog, *env, lc, rng);
            auto elapsed = ms_between(t0, now());

            for (const auto& e : trained.log) {
                EpisodeRecord r;
                r.cum_reward = e.cum_reward;
                r.plan_len = e.plan_length;
                r.failures = e.failures;
                r.quality = e.quality;
                stamp(r, e.episode, elapsed / std::max<long long>(1, cfg.episodes));
                run.records.push_back(r);
            }
            // The loop may converge early; keep executing the final plan so
            // every (seed, episode) pair gets a row.
            for (int episode = static_cast<int>(trained.log.size());
                 trained.final_plan && episode < cfg.episodes; ++episode) {
                const Rates rates = lc.learning.at(episode);
                auto e0 = now();
                EpisodeExec exec = run_episode(ctx.grounded, graph, *trained.final_plan,
                                               catalog, *env, trained.tables, rates, rng);
                EpisodeRecord r;
                r.cum_reward = exec.cum_reward;
                r.plan_len = static_cast<int>(trained.final_plan->length());
                r.failures = exec.failures;
                r.quality = plan_quality(*trained.final_plan, trained.tables);
                stamp(r, episode, ms_between(e0, now()));
                run.records.push_back(r);
            }
            run.final_plan = trained.final_plan;
            run.converged = trained.converged;
            run.tables = std::move(trained.tables);
            break;
        }
        case AgentKind::Q: {
            QTable q(env->state_space_size(), env->action_count());
            for (int episode = 0; episode < cfg.episodes; ++episode) {
                auto e0 = now();
                EpisodeRecord r = q_agent_episode(*env, q, alpha.at(episode),
                                                  eps_action.at(episode), cfg.gamma, rng, max_steps);
                stamp(r, episode, ms_between(e0, now()));
                run.records.push_back(r);
            }
            break;
        }
        case AgentKind::Planner: {
            const SymbolicState I = env->abstract_state();
            ReachableGraph graph = enumerate_reachable(ctx.grounded, I);
            const std::vector<GroundAtom> goal = goal_atoms_for(ctx, *env);
            PlannerConfig pcfg;
            pcfg.max_horizon = horizon;
            for (int episode = 0; episode < cfg.episodes; ++episode) {
                auto e0 = now();
                PAgentEpisode e =
                    p_agent_episode(ctx, graph, goal, *env, pcfg, rng, max_steps, &catalog);
                stamp(e.record, episode, ms_between(e0, now()));
                run.records.push_back(e.record);
            }
            break;
        }
        case AgentKind::Hrl: {
            if (ctx.kind == DomainKind::GridWorld)
                throw std::runtime_error("the hrl agent supports the taxi domains only");
            auto& taxi = dynamic_cast<TaxiEnv&>(*env);
            HrlTables tables(env->state_space_size());
            for (int episode = 0; episode < cfg.episodes; ++episode) {
                auto e0 = now();
                EpisodeRecord r = hrl_agent_episode(taxi, tables, alpha.at(episode),
                                                    eps_action.at(episode), cfg.gamma, rng,
                                                    max_steps);
                stamp(r, episode, ms_between(e0, now()));
                run.records.push_back(r);
            }
            break;
        }
    }
    return run;
}

std::vector<EpisodeRecord> run_experiment_records(const ExperimentConfig& cfg) {
    if (cfg.episodes < 1) throw std::runtime_error("episodes must be >= 1");
    if (cfg.seeds.empty()) throw std::runtime_error("at least one seed is required");

    const ExperimentContext ctx = make_context(cfg.domain);
    std::vector<std::vector<EpisodeRecord>> per_seed(cfg.seeds.size());

    const int workers =
        std::max(1, cfg.threads > 0
                        ? cfg.threads
                        : static_cast<int>(std::thread::hardware_concurrency()));
    if (workers <= 1 || cfg.seeds.size() == 1) {
        for (size_t i = 0; i < cfg.seeds.size(); ++i)
            per_seed[i] = run_seed(ctx, cfg, cfg.seeds[i]).records;
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= cfg.seeds.size()) return;
                    per_seed[i] = run_seed(ctx, cfg, cfg.seeds[i]).records;
                }
            });
        for (auto& t : pool) t.join();
    }

    std::vector<EpisodeRecord> all;
    for (auto& rs : per_seed)
        for (auto& r : rs) all.push_back(r);
    return all;
}

void write_csv(std::ostream& os, const std::vector<EpisodeRecord>& records) {
    os << "seed,episode,cum_reward,plan_len,failures,quality,ms\n";
    for (const auto& r : records) {
        os << r.seed << "," << r.episode << "," << format_number(r.cum_reward) << "," << r.plan_len
           << "," << r.failures << "," << format_number(r.quality) << "," << r.ms << "\n";
    }
}

int run_experiment(const ExperimentConfig& cfg) {
    if (!cfg.save_tables_path.empty()) {
        if (cfg.agent != AgentKind::Peorl || cfg.seeds.size() != 1) {
            std::cerr << "--save-tables needs the peorl agent and exactly one seed\n";
            return 1;
        }
        const ExperimentContext ctx = make_context(cfg.domain);
        SeedRun run = run_seed(ctx, cfg, cfg.seeds[0]);
        std::ofstream snap(cfg.save_tables_path, std::ios::binary);
        if (!snap) {
            std::cerr << "cannot open '" << cfg.save_tables_path << "'\n";
            return 2;
        }
        auto env = make_env(ctx, cfg.seeds[0]);
        save_tables(snap, ctx.grounded, *env, run.tables);
        if (cfg.out_path.empty()) {
            write_csv(std::cout, run.records);
            return 0;
        }
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open output file '" << cfg.out_path << "'\n";
            return 2;
        }
        write_csv(out, run.records);
        return 0;
    }

    std::vector<EpisodeRecord> records = run_experiment_records(cfg);
    if (cfg.out_path.empty()) {
        write_csv(std::cout, records);
        return 0;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file '" << cfg.out_path << "'\n";
        return 2;
    }
    write_csv(out, records);
    return out ? 0 : 2;
}

RhoFacts load_rho_facts(std::istream& is, const GroundDomain& g) {
    RhoFacts facts;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind != "RHO") continue;
        std::string state_str, action_str;
        double value;
        if (!(ls >> state_str >> action_str >> value))
            throw std::runtime_error("facts line " + std::to_string(lineno) + ": malformed");
        int action = g.action_id(action_str);
        if (action < 0)
            throw std::runtime_error("facts line " + std::to_string(lineno) + ": unknown action '" +
                                     action_str + "'");
        facts.set(state_from_string(g, state_str), action, value);
    }
    return facts;
}

}  // namespace peorl
