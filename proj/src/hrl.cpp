#include "peorl/hrl.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace peorl {

namespace {

double table_get(const LearningTables::OptionTable& t, const StateActionKey& k) {
    auto it = t.find(k);
    return it == t.end() ? 0.0 : it->second;
}

double intra_get(const std::unordered_map<EnvStateAction, double, EnvStateActionHash>& t,
                 std::int64_t state, int action) {
    auto it = t.find({state, action});
    return it == t.end() ? 0.0 : it->second;
}

double intra_max(const std::unordered_map<EnvStateAction, double, EnvStateActionHash>& t,
                 std::int64_t state, const std::vector<int>& actions) {
    double best = 0.0;
    bool first = true;
    for (int a : actions) {
        double v = intra_get(t, state, a);
        if (first || v > best) best = v;
        first = false;
    }
    return first ? 0.0 : best;
}

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double LearningTables::get_option_r(const SymbolicState& s, int action) const {
    return table_get(option_r, {s, action});
}

double LearningTables::get_option_rho(const SymbolicState& s, int action) const {
    return table_get(option_rho, {s, action});
}

double LearningTables::max_option_r(const SymbolicState& s, const std::vector<int>& actions) const {
    double best = 0.0;
    bool first = true;
    for (int a : actions) {
        double v = get_option_r(s, a);
        if (first || v > best) best = v;
        first = false;
    }
    return first ? 0.0 : best;
}

OptionSpec map_transition_to_option(const GroundDomain& g, const SymbolicState& from, int action,
                                    const SymbolicState& to, const ActionCatalog& catalog) {
    const std::string& name = g.actions[action].name;
    auto it = catalog.realizations.find(name);
    if (it == catalog.realizations.end())
        throw std::runtime_error("no realization for symbolic action '" + name + "'");
    OptionSpec option;
    option.initiation = from;
    option.action = action;
    option.target = to;
    option.admissible = it->second;
    option.step_cap = catalog.step_cap;
    return option;
}

std::vector<OptionSpec> map_plan_to_options(const GroundDomain& g, const Plan& p,
                                            const ActionCatalog& catalog) {
    std::vector<OptionSpec> options;
    options.reserve(p.actions.size());
    for (size_t i = 0; i < p.actions.size(); ++i)
        options.push_back(
            map_transition_to_option(g, p.states[i], p.actions[i], p.states[i + 1], catalog));
    return options;
}

void intra_option_update(LearningTables& tables, const OptionSpec& option, std::int64_t x,
                         int env_action, double reward, std::int64_t y, const Rates& rates) {
    auto& intra = tables.intra[{option.initiation, option.action}];
    const double r_old = intra_get(intra.r, x, env_action);
    const double rho_old = intra_get(intra.rho, x, env_action);
    const double max_y = intra_max(intra.r, y, option.admissible);
    const double max_x = intra_max(intra.r, x, option.admissible);

    const double r_new = (1.0 - rates.alpha) * r_old + rates.alpha * (reward - rho_old + max_y);
    const double rho_new = (1.0 - rates.beta) * rho_old + rates.beta * (reward + max_y - max_x);
    intra.r[{x, env_action}] = r_new;
    intra.rho[{x, env_action}] = rho_new;
}

void option_terminal_update(LearningTables& tables, const ReachableGraph& graph,
                            const SymbolicState& s_prev, int a_prev, double r_cum,
                            const SymbolicState& s_next, const Rates& rates) {
    auto executable = [&](const SymbolicState& s) {
        std::vector<int> actions;
        int id = graph.state_id(s);
        if (id < 0) return actions;
        const auto [begin, end] = graph.out_edges[id];
        for (int e = begin; e < end; ++e) actions.push_back(graph.transitions[e].action);
        return actions;
    };

    const StateActionKey key{s_prev, a_prev};
    const double r_old = table_get(tables.option_r, key);
    const double rho_old = table_get(tables.option_rho, key);
    const double max_next = tables.max_option_r(s_next, executable(s_next));
    const double max_prev = tables.max_option_r(s_prev, executable(s_prev));

    const double r_new = (1.0 - rates.alpha) * r_old + rates.alpha * (r_cum - rho_old + max_next);
    const double rho_new = (1.0 - rates.beta) * rho_old + rates.beta * (r_cum + max_next - max_prev);
    tables.option_r[key] = r_new;
    tables.option_rho[key] = rho_new;
}

OptionRunResult run_option(const OptionSpec& option, Environment& env, LearningTables& tables,
                           const Rates& rates, Rng& rng) {
    if (env.abstract_state() != option.initiation)
        throw std::logic_error("option started outside its initiation state");

    OptionRunResult result;
    auto& intra = tables.intra[{option.initiation, option.action}];
    for (;;) {
        if (env.abstract_state() == option.target) {
            result.terminated = true;
            break;
        }
        if (result.steps >= option.step_cap) break;
        if (env.done()) break;

        const std::int64_t x = env.state_id();
        int chosen;
        if (rng.next_bernoulli(rates.epsilon)) {
            chosen = option.admissible[rng.next_below(option.admissible.size())];
        } else {
            chosen = option.admissible.front();
            double best = intra_get(intra.r, x, chosen);
            for (int a : option.admissible) {
                double v = intra_get(intra.r, x, a);
                if (v > best) {
                    best = v;
                    chosen = a;
                }
            }
        }
        StepResult step = env.step(chosen);
        const std::int64_t y = env.state_id();
        intra_option_update(tables, option, x, chosen, step.reward, y, rates);
        result.cumulative_reward += step.reward;
        result.failures += step.failed ? 1 : 0;
        ++result.steps;
    }
    result.final_state = env.state_id();
    return result;
}

double plan_quality(const Plan& p, const LearningTables& tables) {
    double q = 0.0;
    for (size_t i = 0; i < p.actions.size(); ++i)
        q += tables.get_option_rho(p.states[i], p.actions[i]);
    return q;
}

GreedyRollout greedy_plan_rollout(const GroundDomain& g, const Plan& p,
                                  const ActionCatalog& catalog, Environment& env,
                                  const LearningTables& tables) {
    env.reset();
    GreedyRollout out;
    for (size_t i = 0; i < p.actions.size(); ++i) {
        OptionSpec option =
            map_transition_to_option(g, p.states[i], p.actions[i], p.states[i + 1], catalog);
        if (env.abstract_state() != option.initiation) return out;
        auto intra_it = tables.intra.find({option.initiation, option.action});
        int option_steps = 0;
        bool terminated = false;
        for (;;) {
            if (env.abstract_state() == option.target) {
                terminated = true;
                break;
            }
            if (option_steps >= option.step_cap || env.done()) break;
            const std::int64_t x = env.state_id();
            int chosen = option.admissible.front();
            double best = -std::numeric_limits<double>::infinity();
            for (int a : option.admissible) {
                double v = 0.0;
                if (intra_it != tables.intra.end()) v = intra_get(intra_it->second.r, x, a);
                if (v > best) {
                    best = v;
                    chosen = a;
                }
            }
            StepResult res = env.step(chosen);
            out.cum_reward += res.reward;
            out.failures += res.failed ? 1 : 0;
            ++out.steps;
            ++option_steps;
        }
        if (!terminated) return out;
    }
    out.completed = true;
    return out;
}

void save_tables(std::ostream& os, const GroundDomain& g, const Environment& env,
                 const LearningTables& tables) {
    std::vector<std::string> lines;
    for (const auto& [key, value] : tables.option_r)
        lines.push_back("R " + g.state_string(key.state) + " " + g.actions[key.action].name + " " +
                        format_value(value));
    for (const auto& [key, value] : tables.option_rho)
        lines.push_back("RHO " + g.state_string(key.state) + " " + g.actions[key.action].name +
                        " " + format_value(value));
    for (const auto& [key, intra] : tables.intra) {
        const std::string prefix =
            g.state_string(key.state) + " " + g.actions[key.action].name + " ";
        for (const auto& [esa, value] : intra.r)
            lines.push_back("IR " + prefix + std::to_string(esa.state) + " " +
                            env.action_name(esa.action) + " " + format_value(value));
        for (const auto& [esa, value] : intra.rho)
            lines.push_back("IRHO " + prefix + std::to_string(esa.state) + " " +
                            env.action_name(esa.action) + " " + format_value(value));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& line : lines) os << line << "\n";
}

SymbolicState state_from_string(const GroundDomain& g, const std::string& text) {
    std::vector<std::int32_t> v(g.fluents.size(), -1);
    for (size_t f = 0; f < g.fluents.size(); ++f)
        if (g.fluents[f].is_boolean) v[f] = 0;  // false unless listed

    std::vector<Diagnostic> diags;
    auto atoms = parse_fluent_atoms(text, diags);
    if (!diags.empty())
        throw std::runtime_error("bad state string '" + text + "': " + format_diagnostics(diags));
    for (const auto& atom : atoms) {
        GroundAtom ga = g.resolve_atom(atom);
        v[ga.fluent] = ga.value;
    }
    for (size_t f = 0; f < v.size(); ++f)
        if (v[f] < 0)
            throw std::runtime_error("state string misses a value for '" + g.fluents[f].name + "'");
    return SymbolicState{std::move(v)};
}

LearningTables load_tables(std::istream& is, const GroundDomain& g, const Environment& env) {
    std::unordered_map<std::string, int> env_actions;
    for (int a = 0; a < env.action_count(); ++a) env_actions[env.action_name(a)] = a;

    LearningTables tables;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind, state_str, action_str;
        if (!(ls >> kind >> state_str >> action_str))
            throw std::runtime_error("snapshot line " + std::to_string(lineno) + ": malformed");
        SymbolicState state = state_from_string(g, state_str);
        int action = g.action_id(action_str);
        if (action < 0)
            throw std::runtime_error("snapshot line " + std::to_string(lineno) +
                                     ": unknown action '" + action_str + "'");
        if (kind == "R" || kind == "RHO") {
            double value;
            if (!(ls >> value))
                throw std::runtime_error("snapshot line " + std::to_string(lineno) + ": no value");
            (kind == "R" ? tables.option_r : tables.option_rho)[{state, action}] = value;
        } else if (kind == "IR" || kind == "IRHO") {
            std::int64_t env_state;
            std::string env_action_str;
            double value;
            if (!(ls >> env_state >> env_action_str >> value))
                throw std::runtime_error("snapshot line " + std::to_string(lineno) + ": malformed");
            auto it = env_actions.find(env_action_str);
            if (it == env_actions.end())
                throw std::runtime_error("snapshot line " + std::to_string(lineno) +
                                         ": unknown env action '" + env_action_str + "'");
            auto& intra = tables.intra[{state, action}];
            (kind == "IR" ? intra.r : intra.rho)[{env_state, it->second}] = value;
        } else {
            throw std::runtime_error("snapshot line " + std::to_string(lineno) +
                                     ": unknown record '" + kind + "'");
        }
    }
    return tables;
}

}  // namespace peorl
