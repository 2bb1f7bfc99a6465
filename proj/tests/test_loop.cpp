#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "peorl/domains.hpp"
#include "peorl/peorl_loop.hpp"

using namespace peorl;

namespace {

ActionDescription parse_ok(const std::string& text) {
    ParseResult r = parse_action_description(text);
    REQUIRE(r.ok());
    return *r.description;
}

std::vector<FluentAtom> atoms(const std::string& text) {
    std::vector<Diagnostic> diags;
    auto out = parse_fluent_atoms(text, diags);
    REQUIRE(diags.empty());
    return out;
}

// Deterministic test env over a reachable graph: one MDP action per ground
// action, per-transition rewards, episode ends on the goal condition.
// Actions listed in `failing` pay -10 and leave the state unchanged.
class GraphEnv : public Environment {
public:
    GraphEnv(const GroundDomain& g, ReachableGraph graph, GoalSpec goal,
             std::map<std::pair<int, int>, double> rewards, std::set<int> failing = {})
        : g_(g),
          graph_(std::move(graph)),
          goal_(std::move(goal)),
          rewards_(std::move(rewards)),
          failing_(std::move(failing)) {
        reset();
    }

    void reset() override {
        current_ = 0;
        done_ = goal_.satisfied_by(graph_.states[0]);
    }

    StepResult step(int action) override {
        if (done_) throw std::logic_error("step() on a finished episode");
        if (failing_.count(action)) return {-10.0, false, true};
        auto [begin, end] = graph_.out_edges[current_];
        for (int e = begin; e < end; ++e) {
            if (graph_.transitions[e].action != action) continue;
            current_ = graph_.transitions[e].to;
            auto it = rewards_.find({graph_.transitions[e].from, action});
            double reward = it == rewards_.end() ? -1.0 : it->second;
            done_ = goal_.satisfied_by(graph_.states[current_]);
            return {reward, done_, false};
        }
        return {-10.0, false, true};  // inapplicable primitive
    }

    bool done() const override { return done_; }
    std::int64_t state_id() const override { return current_; }
    std::int64_t state_space_size() const override {
        return static_cast<std::int64_t>(graph_.states.size());
    }
    int action_count() const override { return static_cast<int>(g_.actions.size()); }
    const std::string& action_name(int action) const override { return g_.actions[action].name; }
    SymbolicState abstract_state() const override { return graph_.states[current_]; }

private:
    const GroundDomain& g_;
    ReachableGraph graph_;
    GoalSpec goal_;
    std::map<std::pair<int, int>, double> rewards_;
    std::set<int> failing_;
    int current_ = 0;
    bool done_ = false;
};

ActionCatalog one_to_one_catalog(const GroundDomain& g, int step_cap = 20) {
    ActionCatalog catalog;
    catalog.step_cap = step_cap;
    for (size_t a = 0; a < g.actions.size(); ++a)
        catalog.realizations[g.actions[a].name] = {static_cast<int>(a)};
    return catalog;
}

// Two routes to the goal: a single expensive hop, or two cheap ones.
const char* kTwoPlans = R"(
sort node = 0..3.
fluent at : node.
action a.
action b.
action c.
a causes at=3 if at=0.
b causes at=1 if at=0.
c causes at=3 if at=1.
nonexecutable a if at=1.
nonexecutable a if at=2.
nonexecutable a if at=3.
nonexecutable b if at=1.
nonexecutable b if at=2.
nonexecutable b if at=3.
nonexecutable c if at=0.
nonexecutable c if at=2.
nonexecutable c if at=3.
)";

double rollout_reward(GraphEnv& env, const Plan& p) {
    env.reset();
    double total = 0.0;
    for (int action : p.actions) total += env.step(action).reward;
    return total;
}

}  // namespace

TEST_SUITE("peorl_loop") {

TEST_CASE("the loop converges to the plan with the better true reward") {
    GroundDomain g = ground(parse_ok(kTwoPlans));
    SymbolicState I = initial_state(g, atoms("at=0"));
    ReachableGraph graph = enumerate_reachable(g, I);
    GoalSpec goal = make_goal(g, atoms("at=3"));

    std::map<std::pair<int, int>, double> rewards{
        {{graph.state_id(I), g.action_id("a")}, -5.0},
        {{graph.state_id(I), g.action_id("b")}, -1.0},
    };  // c defaults to -1: route b,c totals -2

    GraphEnv env(g, graph, goal, rewards);
    ActionCatalog catalog = one_to_one_catalog(g);

    LoopConfig cfg;
    cfg.epsilon_plan = 1.0;
    cfg.max_episodes = 50;
    cfg.learning.alpha = {1.0, 0.05, 20};
    cfg.learning.epsilon_intra = Schedule::constant(0.0);
    cfg.planner.max_horizon = 8;

    Rng rng(2024);
    TrainResult result = peorl_train(g, graph, 0, goal.goal_atoms, catalog, env, cfg, rng);

    CHECK(result.converged);
    REQUIRE(result.final_plan.has_value());
    REQUIRE(result.final_plan->length() == 2);  // the cheap two-hop route

    // Rollout oracle: both routes measured directly on the env.
    Plan direct{{I, *successor(g, I, g.action_id("a"))}, {g.action_id("a")}, 0.0};
    CHECK(rollout_reward(env, direct) == -5.0);
    CHECK(rollout_reward(env, *result.final_plan) == -2.0);

    // The first episode must have started from the shortest plan.
    REQUIRE(!result.log.empty());
    CHECK(result.log[0].plan_length == 1);
    CHECK(result.log[0].cum_reward == -5.0);
}

TEST_CASE("a start that satisfies the goal runs the empty plan and terminates") {
    GroundDomain g = ground(parse_ok(kTwoPlans));
    SymbolicState I = initial_state(g, atoms("at=3"));
    ReachableGraph graph = enumerate_reachable(g, I);
    GoalSpec goal = make_goal(g, atoms("at=3"));

    GraphEnv env(g, graph, goal, {});
    LoopConfig cfg;
    cfg.max_episodes = 10;
    cfg.planner.max_horizon = 8;
    Rng rng(1);
    TrainResult result =
        peorl_train(g, graph, 0, goal.goal_atoms, one_to_one_catalog(g), env, cfg, rng);

    CHECK(result.converged);
    REQUIRE(result.final_plan.has_value());
    CHECK(result.final_plan->empty());
    REQUIRE(!result.log.empty());
    CHECK(result.log[0].cum_reward == 0.0);
    CHECK(result.log[0].quality == 0.0);
}

TEST_CASE("export_facts writes one fact per transition and overwrites on re-export") {
    GroundDomain g = ground(parse_ok(kTwoPlans));
    SymbolicState I = initial_state(g, atoms("at=0"));
    auto s1 = successor(g, I, g.action_id("b"));
    REQUIRE(s1.has_value());
    auto s2 = successor(g, *s1, g.action_id("c"));
    REQUIRE(s2.has_value());
    Plan p{{I, *s1, *s2}, {g.action_id("b"), g.action_id("c")}, 0.0};

    LearningTables tables;
    tables.option_rho[{I, g.action_id("b")}] = -0.5;
    tables.option_rho[{*s1, g.action_id("c")}] = -0.25;

    RhoFacts facts;
    export_facts(facts, tables, p, p.actions.size());
    CHECK(facts.size() == 2);
    CHECK(*facts.find(I, g.action_id("b")) == -0.5);

    tables.option_rho[{I, g.action_id("b")}] = -0.75;
    export_facts(facts, tables, p, p.actions.size());
    CHECK(facts.size() == 2);  // same keys, updated values
    CHECK(*facts.find(I, g.action_id("b")) == -0.75);

    SUBCASE("a prefix export covers only executed transitions") {
        RhoFacts prefix;
        export_facts(prefix, tables, p, 1);
        CHECK(prefix.size() == 1);
        CHECK(prefix.find(*s1, g.action_id("c")) == nullptr);
    }

    SUBCASE("exported facts steer the planner toward what is still unexplored") {
        GoalSpec goal = make_goal(g, atoms("at=3"));
        PlannerConfig pcfg;
        pcfg.max_horizon = 8;
        ReachableGraph graph = enumerate_reachable(g, I);
        PlanResult with_facts = plan_on_graph(graph, 0, goal, facts, pcfg, false);
        REQUIRE(with_facts.plan.has_value());
        // Route a is still unexplored, so it dominates the known -1.0 route.
        CHECK(with_facts.plan->length() == 1);
        CHECK(with_facts.plan->estimated_quality ==
              std::numeric_limits<double>::infinity());
    }
}

TEST_CASE("an option that cannot terminate aborts the episode and forces a replan") {
    GroundDomain g = ground(parse_ok(kTwoPlans));
    SymbolicState I = initial_state(g, atoms("at=0"));
    ReachableGraph graph = enumerate_reachable(g, I);
    GoalSpec goal = make_goal(g, atoms("at=3"));

    // Action c fails env-side forever: route b,c can never complete.
    GraphEnv env(g, graph, goal, {}, {g.action_id("c")});
    ActionCatalog catalog = one_to_one_catalog(g, /*step_cap=*/4);

    LoopConfig cfg;
    cfg.epsilon_plan = 1.0;
    cfg.max_episodes = 6;
    cfg.planner.max_horizon = 8;
    Rng rng(3);
    TrainResult result = peorl_train(g, graph, 0, goal.goal_atoms, catalog, env, cfg, rng);

    // Episode 0 takes the shortest plan [a]; exploration then proposes
    // [b,c], which aborts at the step cap and forces a replan next episode.
    bool saw_abort = false;
    for (size_t i = 0; i + 1 < result.log.size(); ++i) {
        if (!result.log[i].executed_fully) {
            saw_abort = true;
            CHECK(result.log[i].failures == 4);  // step_cap failures
            CHECK(result.log[i + 1].replanned);
        }
    }
    CHECK(saw_abort);
}

TEST_CASE("re-executing a fixed plan yields a convergent quality sequence") {
    GroundDomain g = ground(parse_ok(kTwoPlans));
    SymbolicState I = initial_state(g, atoms("at=0"));
    ReachableGraph graph = enumerate_reachable(g, I);
    GoalSpec goal = make_goal(g, atoms("at=3"));
    GraphEnv env(g, graph, goal, {});

    LoopConfig cfg;
    cfg.epsilon_plan = 0.0;  // plan once, then re-execute forever
    cfg.max_episodes = 120;
    cfg.learning.alpha = {1.0, 0.01, 60};
    cfg.planner.max_horizon = 8;
    Rng rng(4);
    TrainResult result =
        peorl_train(g, graph, 0, goal.goal_atoms, one_to_one_catalog(g), env, cfg, rng);

    REQUIRE(result.log.size() >= 100);
    for (size_t i = 1; i < result.log.size(); ++i)
        CHECK(result.log[i].plan_length == result.log[0].plan_length);
    double last_delta =
        std::abs(result.log.back().quality - result.log[result.log.size() - 2].quality);
    CHECK(last_delta < 1e-3);
    // Quality settles on the plan's actual cumulative reward.
    CHECK(result.log.back().quality ==
          doctest::Approx(result.log.back().cum_reward).epsilon(1e-2));
}

}  // TEST_SUITE
