#include "peorl/planner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace peorl {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

struct SearchContext {
    SearchContext(const ReachableGraph& graph_in, const GoalSpec& goal_in,
                  const PlannerConfig& cfg_in)
        : graph(graph_in), goal(goal_in), cfg(cfg_in) {}

    const ReachableGraph& graph;
    const GoalSpec& goal;
    const PlannerConfig& cfg;

    int horizon = 0;                     // effective horizon (≤ loop-free max)
    std::vector<char> goal_sat;          // per state
    std::vector<double> edge_rho;        // per transition
    std::vector<char> edge_inf;          // per transition: unexplored, +inf tier
    std::vector<int> dist_goal;          // per state: BFS distance to any goal
    std::vector<int> dist_flag;          // per state: min steps to goal via ≥1 inf edge
    std::vector<std::vector<int>> order; // per state: transition indices, goal-greedy
    std::vector<int> rank;               // per action: position in the tie-break order
    std::vector<std::vector<double>> w;  // w[r][s]: best known-edge quality to goal in ≤ r steps

    // Search state.
    std::vector<char> visited;
    std::vector<int> path_actions;
    std::vector<int> path_states;

    bool found = false;
    double best_q = kNegInf;
    int best_len = 0;
    std::vector<int> best_actions;
    std::vector<int> best_states;
    bool horizon_cut = false;

    // Ties on (quality, length) resolve by the tie-break rank sequence, so
    // the exploration order is free to chase the goal first.
    bool lex_smaller(const std::vector<int>& actions) const {
        for (size_t i = 0; i < actions.size() && i < best_actions.size(); ++i) {
            int a = rank[actions[i]];
            int b = rank[best_actions[i]];
            if (a != b) return a < b;
        }
        return false;  // equal length, equal prefix
    }
};

void compute_reverse_bfs(const ReachableGraph& graph, const std::vector<char>& goal_sat,
                         std::vector<int>& dist) {
    const size_t n = graph.states.size();
    std::vector<std::vector<int>> rev(n);
    for (size_t e = 0; e < graph.transitions.size(); ++e)
        rev[graph.transitions[e].to].push_back(static_cast<int>(e));

    dist.assign(n, kUnreachable);
    std::deque<int> queue;
    for (size_t s = 0; s < n; ++s) {
        if (goal_sat[s]) {
            dist[s] = 0;
            queue.push_back(static_cast<int>(s));
        }
    }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int e : rev[t]) {
            int s = graph.transitions[e].from;
            if (dist[s] == kUnreachable) {
                dist[s] = dist[t] + 1;
                queue.push_back(s);
            }
        }
    }
}

// Product-graph distance: fewest steps from s to a goal state along a walk
// that traverses at least one unexplored edge.
void compute_flag_distance(const SearchContext& ctx, std::vector<int>& dist_flag) {
    const auto& graph = ctx.graph;
    const size_t n = graph.states.size();
    std::vector<std::vector<int>> rev(n);
    for (size_t e = 0; e < graph.transitions.size(); ++e)
        rev[graph.transitions[e].to].push_back(static_cast<int>(e));

    // Node ids: s*2 + flag. Flag 1 = an unexplored edge already traversed.
    std::vector<int> dist(2 * n, kUnreachable);
    std::deque<int> queue;
    for (size_t s = 0; s < n; ++s) {
        if (ctx.goal_sat[s]) {
            dist[2 * s + 1] = 0;
            queue.push_back(static_cast<int>(2 * s + 1));
        }
    }
    while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        int t = node / 2;
        int flag = node % 2;
        for (int e : rev[t]) {
            int s = graph.transitions[e].from;
            if (ctx.goal_sat[s]) continue;  // no walk continues past a goal
            if (ctx.edge_inf[e]) {
                if (flag == 1) {
                    for (int pred : {2 * s, 2 * s + 1}) {
                        if (dist[pred] == kUnreachable) {
                            dist[pred] = dist[node] + 1;
                            queue.push_back(pred);
                        }
                    }
                }
            } else {
                int pred = 2 * s + flag;
                if (dist[pred] == kUnreachable) {
                    dist[pred] = dist[node] + 1;
                    queue.push_back(pred);
                }
            }
        }
    }
    dist_flag.assign(n, kUnreachable);
    for (size_t s = 0; s < n; ++s) dist_flag[s] = dist[2 * s];
}

void compute_known_walk_bound(SearchContext& ctx) {
    const auto& graph = ctx.graph;
    const size_t n = graph.states.size();
    ctx.w.assign(ctx.horizon + 1, std::vector<double>(n, kNegInf));
    for (size_t s = 0; s < n; ++s)
        if (ctx.goal_sat[s]) ctx.w[0][s] = 0.0;
    for (int r = 1; r <= ctx.horizon; ++r) {
        ctx.w[r] = ctx.w[r - 1];
        for (size_t e = 0; e < graph.transitions.size(); ++e) {
            if (ctx.edge_inf[e]) continue;
            const Transition& tr = graph.transitions[e];
            if (ctx.goal_sat[tr.from]) continue;  // plans stop at goal states
            double via = ctx.edge_rho[e] + ctx.w[r - 1][tr.to];
            if (via > ctx.w[r][tr.from]) ctx.w[r][tr.from] = via;
        }
    }
}

bool replaces_incumbent(const SearchContext& ctx, double q, int len) {
    if (!ctx.found) return true;
    if (q != ctx.best_q) return q > ctx.best_q;
    if (len != ctx.best_len) return len < ctx.best_len;
    return ctx.lex_smaller(ctx.path_actions);
}

void consider_candidate(SearchContext& ctx, int state, int len, double qk, int kinf) {
    if (!ctx.goal_sat[state]) return;
    double q = kinf > 0 ? kPosInf : qk;
    if (!ctx.goal.constraint.satisfied(q)) return;
    if (!replaces_incumbent(ctx, q, len)) return;
    ctx.found = true;
    ctx.best_q = q;
    ctx.best_len = len;
    ctx.best_actions = ctx.path_actions;
    ctx.best_states = ctx.path_states;
}

void dfs(SearchContext& ctx, int state, int len, double qk, int kinf) {
    if (len == ctx.horizon) {
        // Cannot extend; note whether a longer horizon might have helped.
        if (!ctx.horizon_cut) {
            const auto [begin, end] = ctx.graph.out_edges[state];
            for (int e = begin; e < end; ++e) {
                int t = ctx.graph.transitions[e].to;
                if (!ctx.visited[t] && ctx.dist_goal[t] != kUnreachable) {
                    ctx.horizon_cut = true;
                    break;
                }
            }
        }
        return;
    }
    const int rem_after = ctx.horizon - len - 1;
    for (int e : ctx.order[state]) {
        const Transition& tr = ctx.graph.transitions[e];
        const int t = tr.to;
        if (ctx.visited[t]) continue;
        if (ctx.dist_goal[t] > rem_after) {
            if (ctx.dist_goal[t] != kUnreachable) ctx.horizon_cut = true;
            continue;
        }
        const int nk = kinf + (ctx.edge_inf[e] ? 1 : 0);
        const double nq = qk + (ctx.edge_inf[e] ? 0.0 : ctx.edge_rho[e]);

        double ub;
        int min_completion;
        if (nk > 0) {
            ub = kPosInf;
            min_completion = ctx.dist_goal[t];
        } else if (ctx.dist_flag[t] <= rem_after) {
            ub = kPosInf;
            min_completion = ctx.dist_flag[t];
        } else {
            const double w = ctx.w[rem_after][t];
            if (w == kNegInf) continue;  // no completion inside the horizon
            ub = nq + w;
            min_completion = ctx.dist_goal[t];
        }

        if (ctx.found) {
            if (ub < ctx.best_q) continue;
            // Exact length ties stay alive: they can still win on the
            // tie-break rank.
            if (ub == ctx.best_q && len + 1 + min_completion > ctx.best_len) continue;
        } else if (!ctx.goal.constraint.satisfied(ub)) {
            continue;
        }

        ctx.visited[t] = 1;
        ctx.path_actions.push_back(tr.action);
        ctx.path_states.push_back(t);
        consider_candidate(ctx, t, len + 1, nq, nk);
        // Goal states end the plan: the episodic envs terminate there, so a
        // path through a goal-satisfying state could never be executed.
        if (!ctx.goal_sat[t]) dfs(ctx, t, len + 1, nq, nk);
        ctx.path_states.pop_back();
        ctx.path_actions.pop_back();
        ctx.visited[t] = 0;
    }
}

}  // namespace

GoalSpec make_goal(const GroundDomain& g, const std::vector<FluentAtom>& atoms,
                   QualityConstraint constraint) {
    GoalSpec goal;
    goal.constraint = constraint;
    for (const auto& a : atoms) goal.goal_atoms.push_back(g.resolve_atom(a));
    return goal;
}

double rho_lookup(const RhoFacts& facts, const SymbolicState& s, int action) {
    const double* v = facts.find(s, action);
    return v ? *v : facts.inf_value;
}

double plan_quality_estimate(const Plan& p, const RhoFacts& facts) {
    double q = 0.0;
    for (size_t i = 0; i < p.actions.size(); ++i) q += rho_lookup(facts, p.states[i], p.actions[i]);
    return q;
}

PlanResult plan_on_graph(const ReachableGraph& graph, int initial_id, const GoalSpec& goal,
                         const RhoFacts& facts, const PlannerConfig& cfg, bool graph_capped) {
    assert(initial_id >= 0 && static_cast<size_t>(initial_id) < graph.states.size());
    const size_t n = graph.states.size();
    const bool inf_tier = std::isinf(facts.inf_value) && facts.inf_value > 0;

    SearchContext ctx(graph, goal, cfg);
    // Loop-free paths never exceed n-1 steps, so clamp the horizon.
    ctx.horizon = static_cast<int>(std::min<long long>(cfg.max_horizon,
                                                       static_cast<long long>(n) - 1));
    if (ctx.horizon < 0) ctx.horizon = 0;

    ctx.goal_sat.resize(n);
    for (size_t s = 0; s < n; ++s) ctx.goal_sat[s] = goal.satisfied_by(graph.states[s]);

    const size_t m = graph.transitions.size();
    ctx.edge_rho.resize(m);
    ctx.edge_inf.assign(m, 0);
    for (size_t e = 0; e < m; ++e) {
        const Transition& tr = graph.transitions[e];
        const double* v = facts.find(graph.states[tr.from], tr.action);
        if (v) {
            ctx.edge_rho[e] = *v;
        } else if (inf_tier) {
            ctx.edge_inf[e] = 1;
            ctx.edge_rho[e] = facts.inf_value;
        } else {
            ctx.edge_rho[e] = facts.inf_value;
        }
    }

    compute_reverse_bfs(graph, ctx.goal_sat, ctx.dist_goal);
    if (ctx.dist_goal[initial_id] == kUnreachable) {
        // No goal state reachable at all; only a cap could hide one.
        return {std::nullopt, graph_capped};
    }

    bool any_inf = false;
    for (char f : ctx.edge_inf) any_inf |= (f != 0);
    if (any_inf) {
        compute_flag_distance(ctx, ctx.dist_flag);
    } else {
        ctx.dist_flag.assign(n, kUnreachable);
    }
    compute_known_walk_bound(ctx);

    int max_action = 0;
    for (const auto& tr : graph.transitions) max_action = std::max(max_action, tr.action);
    ctx.rank.resize(max_action + 1);
    for (int a = 0; a <= max_action; ++a) ctx.rank[a] = a;  // default: declaration order
    if (!cfg.tie_break.empty()) {
        ctx.rank.assign(max_action + 1, std::numeric_limits<int>::max());
        for (size_t i = 0; i < cfg.tie_break.size(); ++i)
            if (cfg.tie_break[i] >= 0 && cfg.tie_break[i] <= max_action)
                ctx.rank[cfg.tie_break[i]] = static_cast<int>(i);
    }
    // Goal-greedy exploration: reach some incumbent fast so the bounds have
    // teeth; ties resolve by rank, so this order never changes the result.
    ctx.order.resize(n);
    for (size_t s = 0; s < n; ++s) {
        const auto [begin, end] = graph.out_edges[s];
        auto& ord = ctx.order[s];
        ord.reserve(end - begin);
        for (int e = begin; e < end; ++e) ord.push_back(e);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
            int da = ctx.dist_goal[graph.transitions[a].to];
            int db = ctx.dist_goal[graph.transitions[b].to];
            if (da != db) return da < db;
            return ctx.rank[graph.transitions[a].action] < ctx.rank[graph.transitions[b].action];
        });
    }

    ctx.visited.assign(n, 0);
    ctx.visited[initial_id] = 1;
    ctx.path_states.push_back(initial_id);
    consider_candidate(ctx, initial_id, 0, 0.0, 0);
    if (!ctx.goal_sat[initial_id]) dfs(ctx, initial_id, 0, 0.0, 0);

    if (!ctx.found) return {std::nullopt, ctx.horizon_cut || graph_capped};

    Plan p;
    p.states.reserve(ctx.best_states.size());
    for (int sid : ctx.best_states) p.states.push_back(graph.states[sid]);
    p.actions = ctx.best_actions;
    p.estimated_quality = ctx.best_q;
    return {std::move(p), graph_capped};
}

PlanResult plan(const SymbolicState& I, const GoalSpec& goal, const GroundDomain& g,
                const RhoFacts& facts, const PlannerConfig& cfg) {
    ReachableGraph graph = enumerate_reachable_capped(g, I, {cfg.state_cap});
    return plan_on_graph(graph, 0, goal, facts, cfg, graph.capped);
}

bool plan_is_sound(const GroundDomain& g, const Plan& p, const GoalSpec& goal) {
    if (p.states.size() != p.actions.size() + 1) return false;
    std::unordered_set<SymbolicState, SymbolicStateHash> seen;
    for (const auto& s : p.states)
        if (!seen.insert(s).second) return false;  // loop-free
    for (size_t i = 0; i < p.actions.size(); ++i) {
        if (goal.satisfied_by(p.states[i])) return false;  // goals are absorbing
        auto next = successor(g, p.states[i], p.actions[i]);
        if (!next || *next != p.states[i + 1]) return false;
    }
    return goal.satisfied_by(p.states.back());
}

std::string plan_to_string(const GroundDomain& g, const Plan& p) {
    std::ostringstream os;
    for (size_t i = 0; i < p.actions.size(); ++i) {
        os << (i + 1) << ". " << g.actions[p.actions[i]].name;
        std::string diff;
        const auto& a = p.states[i].v;
        const auto& b = p.states[i + 1].v;
        for (size_t f = 0; f < a.size(); ++f) {
            if (a[f] == b[f]) continue;
            if (!diff.empty()) diff += " ";
            const GroundFluent& gf = g.fluents[f];
            if (gf.is_boolean) {
                diff += (b[f] == 1 ? "+" : "-") + gf.name;
            } else {
                diff += gf.name + ": " + gf.values[a[f]].to_string() + "->" +
                        gf.values[b[f]].to_string();
            }
        }
        os << "  " << diff << "\n";
    }
    os << "estimated quality: " << p.estimated_quality << "\n";
    return os.str();
}

}  // namespace peorl
