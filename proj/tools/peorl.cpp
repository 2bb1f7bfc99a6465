// peorl — command line front end.
//
//   peorl plan  --domain <file> --init <atoms> --goal <atoms> [--quality-min n]
//   peorl train --agent {peorl|q|planner|hrl} --domain {taxi1|taxi2|gridworld}
//               --episodes N --seeds a,b,c --out results.csv
//   peorl eval  --tables <snapshot> --domain {taxi1|taxi2|gridworld} --seed S --greedy
//
// Exit codes: 0 ok, 1 usage error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "peorl/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<peorl::FluentAtom> parse_atoms_or_throw(const std::string& text) {
    std::vector<peorl::Diagnostic> diags;
    auto atoms = peorl::parse_fluent_atoms(text, diags);
    if (!diags.empty())
        throw std::runtime_error("bad atom list '" + text + "':\n" +
                                 peorl::format_diagnostics(diags));
    return atoms;
}

int cmd_plan(const std::string& domain_path, const std::string& init_text,
             const std::string& goal_text, double quality_min, double quality_above,
             const std::string& facts_path, int horizon, const std::string& dump_path) {
    const std::string text = read_file(domain_path);
    peorl::ParseResult parsed = peorl::parse_action_description(text);
    if (!parsed.ok()) {
        std::cerr << domain_path << ": parse failed\n"
                  << peorl::format_diagnostics(parsed.diagnostics);
        return 2;
    }
    peorl::GroundDomain g = peorl::ground(*parsed.description);
    peorl::SymbolicState I = peorl::initial_state(g, parse_atoms_or_throw(init_text));

    peorl::QualityConstraint constraint = peorl::QualityConstraint::none();
    if (quality_above > -1e300) constraint = peorl::QualityConstraint::above(quality_above);
    if (quality_min > -1e300) constraint = peorl::QualityConstraint::at_least(quality_min);
    peorl::GoalSpec goal = peorl::make_goal(g, parse_atoms_or_throw(goal_text), constraint);

    peorl::RhoFacts facts;
    if (!facts_path.empty()) {
        std::ifstream fin(facts_path);
        if (!fin) throw std::runtime_error("cannot open '" + facts_path + "'");
        facts = peorl::load_rho_facts(fin, g);
    }

    peorl::PlannerConfig cfg;
    cfg.max_horizon = horizon;

    if (!dump_path.empty()) {
        peorl::ReachableGraph graph = peorl::enumerate_reachable(g, I);
        std::ofstream dump(dump_path);
        peorl::dump_transition_system(dump, g, graph);
    }

    peorl::PlanResult result = peorl::plan(I, goal, g, facts, cfg);
    if (!result.plan) {
        std::cout << (result.truncated ? "no plan (search truncated by caps)\n" : "no plan\n");
        return 0;
    }
    std::cout << peorl::plan_to_string(g, *result.plan);
    return 0;
}

int cmd_eval(const std::string& tables_path, const std::string& domain_str, std::uint64_t seed,
             bool greedy, int horizon) {
    (void)greedy;  // evaluation is always greedy; the flag documents intent
    auto kind = peorl::parse_domain(domain_str);
    if (!kind) throw std::runtime_error("unknown domain '" + domain_str + "'");
    peorl::ExperimentContext ctx = peorl::make_context(*kind);
    auto env = peorl::make_env(ctx, seed);

    std::ifstream in(tables_path);
    if (!in) throw std::runtime_error("cannot open '" + tables_path + "'");
    peorl::LearningTables tables = peorl::load_tables(in, ctx.grounded, *env);

    // Exploit-only planning: unexplored transitions repel instead of attract.
    peorl::RhoFacts facts = peorl::facts_from_tables(tables, -1e300);
    peorl::ReachableGraph graph =
        peorl::enumerate_reachable(ctx.grounded, env->abstract_state());
    peorl::GoalSpec goal{peorl::goal_atoms_for(ctx, *env), peorl::QualityConstraint::none()};
    peorl::PlannerConfig pcfg;
    pcfg.max_horizon = horizon > 0 ? horizon : ctx.default_horizon;

    peorl::PlanResult planned = peorl::plan_on_graph(graph, 0, goal, facts, pcfg, false);
    if (!planned.plan) {
        std::cout << "no evaluable plan (tables cover no goal-reaching path)\n";
        return 0;
    }
    peorl::RolloutResult rollout =
        peorl::evaluate_plan_rollout(ctx.grounded, *planned.plan, ctx.catalog, *env, tables);
    std::cout << "plan length: " << planned.plan->length() << "\n"
              << "greedy rollout reward: " << rollout.cum_reward << "\n"
              << "steps: " << rollout.steps << ", failures: " << rollout.failures
              << ", completed: " << (rollout.completed ? "yes" : "no") << "\n";
    return 0;
}

// Flat key=value config: every key names a train flag; values given on the
// command line win over the file.
void apply_config_file(const std::string& path, const CLI::App& train_cmd, std::string& agent,
                       std::string& domain, std::string& out, std::string& seeds,
                       peorl::ExperimentConfig& cfg, double& alpha_initial, double& alpha_final,
                       double& eps_action_initial, double& eps_action_final,
                       double& eps_intra_initial, double& eps_intra_final) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");

    auto given = [&](const char* flag) { return train_cmd.count(flag) > 0; };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));

        if (key == "agent") {
            if (!given("--agent")) agent = value;
        } else if (key == "domain") {
            if (!given("--domain")) domain = value;
        } else if (key == "episodes") {
            if (!given("--episodes")) cfg.episodes = std::stoi(value);
        } else if (key == "seeds") {
            if (!given("--seeds")) seeds = value;
        } else if (key == "out") {
            if (!given("--out")) out = value;
        } else if (key == "alpha-initial") {
            if (!given("--alpha-initial")) alpha_initial = std::stod(value);
        } else if (key == "alpha-final") {
            if (!given("--alpha-final")) alpha_final = std::stod(value);
        } else if (key == "beta") {
            if (!given("--beta")) cfg.beta = std::stod(value);
        } else if (key == "gamma") {
            if (!given("--gamma")) cfg.gamma = std::stod(value);
        } else if (key == "epsilon-plan") {
            if (!given("--epsilon-plan")) cfg.epsilon_plan = std::stod(value);
        } else if (key == "epsilon-action-initial") {
            if (!given("--epsilon-action-initial")) eps_action_initial = std::stod(value);
        } else if (key == "epsilon-action-final") {
            if (!given("--epsilon-action-final")) eps_action_final = std::stod(value);
        } else if (key == "epsilon-intra-initial") {
            if (!given("--epsilon-intra-initial")) eps_intra_initial = std::stod(value);
        } else if (key == "epsilon-intra-final") {
            if (!given("--epsilon-intra-final")) eps_intra_final = std::stod(value);
        } else if (key == "step-cap") {
            if (!given("--step-cap")) cfg.step_cap = std::stoi(value);
        } else if (key == "max-steps") {
            if (!given("--max-steps")) cfg.max_steps = std::stoi(value);
        } else if (key == "horizon") {
            if (!given("--horizon")) cfg.planner_horizon = std::stoi(value);
        } else if (key == "threads") {
            if (!given("--threads")) cfg.threads = std::stoi(value);
        } else if (key == "save-tables") {
            if (!given("--save-tables")) cfg.save_tables_path = value;
        } else if (key == "timing") {
            if (!given("--timing")) cfg.timing = value == "true" || value == "1";
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" +
                                     key + "'");
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic planning + hierarchical R-learning toolkit"};
    app.require_subcommand(1);

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "solve a symbolic planning problem");
    std::string domain_path, init_text, goal_text, facts_path, dump_path;
    double quality_min = -1e301, quality_above = -1e301;
    int horizon = 64;
    plan_cmd->add_option("--domain", domain_path, "action description file")->required();
    plan_cmd->add_option("--init", init_text, "initial state atoms, comma separated")->required();
    plan_cmd->add_option("--goal", goal_text, "goal atoms, comma separated")->required();
    plan_cmd->add_option("--quality-min", quality_min, "require quality >= n");
    plan_cmd->add_option("--quality-above", quality_above, "require quality > n");
    plan_cmd->add_option("--facts", facts_path, "gain-reward facts file (RHO lines)");
    plan_cmd->add_option("--horizon", horizon, "maximum plan length");
    plan_cmd->add_option("--dump-ts", dump_path, "write the transition system to a file");

    // train
    auto* train_cmd = app.add_subcommand("train", "run a learning experiment");
    std::string config_path;
    train_cmd->add_option("--config", config_path, "flat key=value config file");
    std::string agent_str = "peorl", domain_str = "taxi1", out_path, seeds_str = "1,2,3,4,5,6,7,8,9,10";
    peorl::ExperimentConfig cfg;
    double alpha_initial = 1.0, alpha_final = 0.01;
    double eps_action_initial = 1.0, eps_action_final = 0.0;
    double eps_intra_initial = 0.2, eps_intra_final = 0.0;
    train_cmd->add_option("--agent", agent_str, "peorl|q|planner|hrl");
    train_cmd->add_option("--domain", domain_str, "taxi1|taxi2|gridworld");
    train_cmd->add_option("--episodes", cfg.episodes, "episodes per seed");
    train_cmd->add_option("--seeds", seeds_str, "comma-separated seed list");
    train_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
    train_cmd->add_option("--alpha-initial", alpha_initial);
    train_cmd->add_option("--alpha-final", alpha_final);
    train_cmd->add_option("--beta", cfg.beta);
    train_cmd->add_option("--gamma", cfg.gamma, "discount for the Q baselines");
    train_cmd->add_option("--epsilon-plan", cfg.epsilon_plan);
    train_cmd->add_option("--epsilon-action-initial", eps_action_initial);
    train_cmd->add_option("--epsilon-action-final", eps_action_final);
    train_cmd->add_option("--epsilon-intra-initial", eps_intra_initial);
    train_cmd->add_option("--epsilon-intra-final", eps_intra_final);
    train_cmd->add_option("--step-cap", cfg.step_cap, "per-option env step cap");
    train_cmd->add_option("--max-steps", cfg.max_steps, "flat/hrl episode step cap");
    train_cmd->add_option("--horizon", cfg.planner_horizon, "planner horizon");
    train_cmd->add_option("--threads", cfg.threads, "parallel seed workers");
    train_cmd->add_option("--save-tables", cfg.save_tables_path,
                          "write the final table snapshot (peorl, single seed)");
    train_cmd->add_flag("--timing", cfg.timing, "emit real per-episode ms (not byte-stable)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "greedy rollout from a table snapshot");
    std::string tables_path, eval_domain = "taxi1";
    std::uint64_t eval_seed = 1;
    bool greedy = false;
    int eval_horizon = 0;
    eval_cmd->add_option("--tables", tables_path, "table snapshot file")->required();
    eval_cmd->add_option("--domain", eval_domain, "taxi1|taxi2|gridworld");
    eval_cmd->add_option("--seed", eval_seed, "seed (fixes the episode configuration)");
    eval_cmd->add_flag("--greedy", greedy, "greedy execution (the default and only mode)");
    eval_cmd->add_option("--horizon", eval_horizon, "planner horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (plan_cmd->parsed())
            return cmd_plan(domain_path, init_text, goal_text, quality_min, quality_above,
                            facts_path, horizon, dump_path);
        if (train_cmd->parsed()) {
            if (!config_path.empty())
                apply_config_file(config_path, *train_cmd, agent_str, domain_str, out_path,
                                  seeds_str, cfg, alpha_initial, alpha_final, eps_action_initial,
                                  eps_action_final, eps_intra_initial, eps_intra_final);
            auto agent = peorl::parse_agent(agent_str);
            auto domain = peorl::parse_domain(domain_str);
            if (!agent || !domain) {
                std::cerr << "unknown agent or domain\n";
                return 1;
            }
            cfg.agent = *agent;
            cfg.domain = *domain;
            cfg.out_path = out_path;
            cfg.alpha = {alpha_initial, alpha_final, 0};
            cfg.epsilon_action = {eps_action_initial, eps_action_final, 0};
            cfg.epsilon_intra = {eps_intra_initial, eps_intra_final, 0};
            cfg.seeds.clear();
            std::stringstream ss(seeds_str);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) cfg.seeds.push_back(std::stoull(item));
            }
            return peorl::run_experiment(cfg);
        }
        if (eval_cmd->parsed())
            return cmd_eval(tables_path, eval_domain, eval_seed, greedy, eval_horizon);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
