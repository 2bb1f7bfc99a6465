#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "peorl/domains.hpp"
#include "peorl/gridworld.hpp"
#include "peorl/harness.hpp"
#include "peorl/hrl.hpp"
#include "peorl/taxi.hpp"

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

struct GridFixture {
    GroundDomain g;
    GridFixture() : g(ground(parse_ok(gridworld_domain_text()))) {}
    SymbolicState state(const std::string& text) { return initial_state(g, atoms(text)); }
};

}  // namespace

TEST_SUITE("hrl") {

TEST_CASE("push maps to the force-parameterized option") {
    GridFixture fx;
    SymbolicState from = fx.state("pos(9,9), dooractive, ~dooropen");
    SymbolicState to = fx.state("pos(9,9), dooractive, dooropen");
    OptionSpec option = map_transition_to_option(fx.g, from, fx.g.action_id("push"), to,
                                                 gridworld_catalog());
    CHECK(option.admissible.size() == 61);
    for (int a : option.admissible) {
        CHECK(a >= GridWorldEnv::push_action(0));
        CHECK(a <= GridWorldEnv::push_action(60));
    }
    CHECK(option.initiation == from);
    CHECK(option.target == to);
}

TEST_CASE("taxi moves map one-to-one") {
    GroundDomain g = ground(parse_ok(taxi_domain_text()));
    SymbolicState from =
        initial_state(g, atoms("taxiat(3,2), passenger=yd, dest=gd, ~rewardvisited"));
    auto to = successor(g, from, g.action_id("move(e)"));
    REQUIRE(to.has_value());
    OptionSpec option =
        map_transition_to_option(g, from, g.action_id("move(e)"), *to, taxi_catalog());
    CHECK(option.admissible == std::vector<int>{TaxiEnv::kMoveEast});
}

TEST_CASE("unknown symbolic actions are rejected") {
    GridFixture fx;
    SymbolicState s = fx.state("pos(9,9), dooractive, ~dooropen");
    ActionCatalog empty;
    CHECK_THROWS_WITH(map_transition_to_option(fx.g, s, fx.g.action_id("push"), s, empty),
                      doctest::Contains("no realization"));
}

TEST_CASE("plans map to one option per transition, in order") {
    GridFixture fx;
    SymbolicState I = fx.state("pos(9,8), ~dooractive, ~dooropen");
    GoalSpec goal = make_goal(fx.g, atoms("pos(9,10), dooractive, dooropen"));
    PlannerConfig cfg;
    cfg.max_horizon = 10;
    PlanResult planned = plan(I, goal, fx.g, RhoFacts{}, cfg);
    REQUIRE(planned.plan.has_value());
    auto options = map_plan_to_options(fx.g, *planned.plan, gridworld_catalog());
    REQUIRE(options.size() == 4);
    for (size_t i = 0; i < options.size(); ++i) {
        CHECK(options[i].initiation == planned.plan->states[i]);
        CHECK(options[i].target == planned.plan->states[i + 1]);
    }

    CHECK(map_plan_to_options(fx.g, Plan{{I}, {}, 0.0}, gridworld_catalog()).empty());
}

TEST_CASE("unit-rate updates hit the closed forms") {
    GridFixture fx;
    OptionSpec option;
    option.initiation = fx.state("pos(9,9), dooractive, ~dooropen");
    option.action = fx.g.action_id("push");
    option.target = fx.state("pos(9,9), dooractive, dooropen");
    option.admissible = {0, 1, 2};

    LearningTables tables;
    Rates unit{1.0, 1.0, 0.0};
    intra_option_update(tables, option, 7, 1, 5.0, 8, unit);
    auto& intra = tables.intra[{option.initiation, option.action}];
    CHECK(intra.r[{7, 1}] == 5.0);
    CHECK(intra.rho[{7, 1}] == 5.0);

    SUBCASE("alpha = 0 and beta = 0 freeze the tables") {
        LearningTables frozen;
        intra_option_update(frozen, option, 7, 1, 5.0, 8, Rates{0.0, 0.0, 0.0});
        auto& t = frozen.intra[{option.initiation, option.action}];
        CHECK(t.r[{7, 1}] == 0.0);
        CHECK(t.rho[{7, 1}] == 0.0);
    }
}

TEST_CASE("randomized single-step updates match the update laws exactly") {
    // The acceptance suite runs this at n=1000; keep a smaller copy here.
    GridFixture fx;
    Rng rng(424242);
    OptionSpec option;
    option.initiation = fx.state("pos(9,9), dooractive, ~dooropen");
    option.action = fx.g.action_id("push");
    option.target = fx.state("pos(9,9), dooractive, dooropen");
    option.admissible = {0, 1, 2, 3};

    LearningTables tables;
    for (int i = 0; i < 200; ++i) {
        std::int64_t x = static_cast<std::int64_t>(rng.next_below(4));
        std::int64_t y = static_cast<std::int64_t>(rng.next_below(4));
        int a = static_cast<int>(rng.next_below(4));
        double r = -10.0 + 20.0 * rng.next_double();

        auto& intra = tables.intra[{option.initiation, option.action}];
        auto read = [&](const auto& table, std::int64_t s, int act) {
            auto it = table.find(EnvStateAction{s, act});
            return it == table.end() ? 0.0 : it->second;
        };
        double max_y = 0.0, max_x = 0.0;
        for (int act : option.admissible) {
            max_y = std::max(max_y, read(intra.r, y, act));
            max_x = std::max(max_x, read(intra.r, x, act));
        }
        double rho_old = read(intra.rho, x, a);
        double expect_r = r - rho_old + max_y;
        double expect_rho = r + max_y - max_x;

        intra_option_update(tables, option, x, a, r, y, Rates{1.0, 1.0, 0.0});
        auto& after = tables.intra[{option.initiation, option.action}];
        CHECK(after.r[{x, a}] == doctest::Approx(expect_r).epsilon(1e-12));
        CHECK(after.rho[{x, a}] == doctest::Approx(expect_rho).epsilon(1e-12));
    }
}

TEST_CASE("two-state chain: gain rewards settle onto the average-reward line") {
    // One action per state, deterministic cycle x0 -> x1 -> x0 with rewards
    // r_a, r_b. At the update laws' fixed point rho0 = r_a - d and
    // rho1 = r_b + d for the settled R-difference d, so mean(rho) must land
    // on the chain's per-step average reward.
    GridFixture fx;
    OptionSpec option;
    option.initiation = fx.state("pos(9,9), dooractive, ~dooropen");
    option.action = fx.g.action_id("push");
    option.target = fx.state("pos(9,9), dooractive, dooropen");
    option.admissible = {0};

    const double r_a = 2.0, r_b = -1.0;
    LearningTables tables;
    // Independent flat-arithmetic replication of the same updates.
    double R0 = 0, R1 = 0, rho0 = 0, rho1 = 0;
    for (int t = 0; t < 1000; ++t) {
        double alpha = std::max(0.01, 1.0 - t / 500.0);
        double beta = 0.5;
        Rates rates{alpha, beta, 0.0};

        intra_option_update(tables, option, 0, 0, r_a, 1, rates);
        double nR0 = (1 - alpha) * R0 + alpha * (r_a - rho0 + R1);
        double nrho0 = (1 - beta) * rho0 + beta * (r_a + R1 - R0);
        R0 = nR0;
        rho0 = nrho0;

        intra_option_update(tables, option, 1, 0, r_b, 0, rates);
        double nR1 = (1 - alpha) * R1 + alpha * (r_b - rho1 + R0);
        double nrho1 = (1 - beta) * rho1 + beta * (r_b + R0 - R1);
        R1 = nR1;
        rho1 = nrho1;
    }
    auto& intra = tables.intra[{option.initiation, option.action}];
    CHECK(intra.r[{0, 0}] == doctest::Approx(R0).epsilon(1e-9));
    CHECK(intra.rho[{0, 0}] == doctest::Approx(rho0).epsilon(1e-9));
    CHECK(intra.rho[{1, 0}] == doctest::Approx(rho1).epsilon(1e-9));

    const double mean_rho = (intra.rho[{0, 0}] + intra.rho[{1, 0}]) / 2.0;
    CHECK(mean_rho == doctest::Approx((r_a + r_b) / 2.0).epsilon(1e-3));
}

TEST_CASE("option-level unit-rate update matches the closed form") {
    GroundDomain g = ground(parse_ok(taxi_domain_text()));
    SymbolicState s =
        initial_state(g, atoms("taxiat(3,2), passenger=yd, dest=gd, ~rewardvisited"));
    ReachableGraph graph = enumerate_reachable(g, s);
    auto next = successor(g, s, g.action_id("move(e)"));
    REQUIRE(next.has_value());

    LearningTables tables;
    option_terminal_update(tables, graph, s, g.action_id("move(e)"), -3.0, *next,
                           Rates{1.0, 1.0, 0.0});
    CHECK(tables.get_option_r(s, g.action_id("move(e)")) == -3.0);
    CHECK(tables.get_option_rho(s, g.action_id("move(e)")) == -3.0);

    SUBCASE("beta = 0 freezes rho") {
        option_terminal_update(tables, graph, s, g.action_id("move(e)"), -7.0, *next,
                               Rates{1.0, 0.0, 0.0});
        CHECK(tables.get_option_rho(s, g.action_id("move(e)")) == -3.0);
    }
}

TEST_CASE("repeated plan execution: sum of gain rewards converges to plan reward") {
    // Deterministic two-option plan with fixed per-option rewards; with all
    // rewards negative the unexecuted actions keep every max at 0 and the
    // rho sum telescopes to the total plan reward.
    GroundDomain g = ground(parse_ok(taxi_domain_text()));
    SymbolicState s0 =
        initial_state(g, atoms("taxiat(3,2), passenger=yd, dest=gd, ~rewardvisited"));
    ReachableGraph graph = enumerate_reachable(g, s0);
    auto s1 = successor(g, s0, g.action_id("move(w)"));
    REQUIRE(s1.has_value());
    auto s2 = successor(g, *s1, g.action_id("move(s)"));
    REQUIRE(s2.has_value());

    const double r1 = -1.5, r2 = -2.5;
    LearningTables tables;
    for (int t = 0; t < 800; ++t) {
        double alpha = std::max(0.01, 1.0 - t / 400.0);
        Rates rates{alpha, 0.5, 0.0};
        option_terminal_update(tables, graph, s0, g.action_id("move(w)"), r1, *s1, rates);
        option_terminal_update(tables, graph, *s1, g.action_id("move(s)"), r2, *s2, rates);
    }
    double sum = tables.get_option_rho(s0, g.action_id("move(w)")) +
                 tables.get_option_rho(*s1, g.action_id("move(s)"));
    CHECK(sum == doctest::Approx(r1 + r2).epsilon(1e-3));
}

TEST_CASE("run_option executes a taxi move in exactly one step") {
    ExperimentContext ctx = make_context(DomainKind::Taxi1);
    auto env = make_env(ctx, 3);
    SymbolicState from = env->abstract_state();
    // Find an applicable move from the initial state.
    int action = -1;
    std::optional<SymbolicState> to;
    for (size_t a = 0; a < ctx.grounded.actions.size(); ++a) {
        if (ctx.grounded.actions[a].name.rfind("move(", 0) != 0) continue;
        to = successor(ctx.grounded, from, static_cast<int>(a));
        if (to) {
            action = static_cast<int>(a);
            break;
        }
    }
    REQUIRE(action >= 0);

    OptionSpec option = map_transition_to_option(ctx.grounded, from, action, *to, ctx.catalog);
    LearningTables tables;
    Rng rng(9);
    OptionRunResult run = run_option(option, *env, tables, Rates{1.0, 0.5, 0.0}, rng);
    CHECK(run.terminated);
    CHECK(run.steps == 1);
    CHECK(run.cumulative_reward == -1.0);
    CHECK(run.failures == 0);
    CHECK(env->abstract_state() == *to);
}

TEST_CASE("run_option on push: learned tables pick a workable force") {
    ExperimentContext ctx = make_context(DomainKind::GridWorld);
    GridWorldEnv env(ctx.grounded, GridWorldConfig{1});
    // Drive the env to the door, grabbed and active.
    while (env.col() < 9) env.step(GridWorldEnv::kMoveEast);
    while (env.row() > 9) env.step(GridWorldEnv::kMoveNorth);
    while (env.row() < 9) env.step(GridWorldEnv::kMoveSouth);
    REQUIRE(env.step(GridWorldEnv::grab_action(25)).reward == -1.0);
    REQUIRE(env.step(GridWorldEnv::kRotateCw).reward == -1.0);

    SymbolicState from = env.abstract_state();
    SymbolicState to = from;
    to.v[ctx.grounded.fluent_id("dooropen")] = 1;
    OptionSpec option =
        map_transition_to_option(ctx.grounded, from, ctx.grounded.action_id("push"), to,
                                 ctx.catalog);

    SUBCASE("greedy after learning terminates in one step without failures") {
        LearningTables tables;
        auto& intra = tables.intra[{from, ctx.grounded.action_id("push")}];
        for (int f = 0; f <= 60; ++f)
            intra.r[{env.state_id(), GridWorldEnv::push_action(f)}] =
                GridWorldEnv::force_works(f) ? -1.0 : -10.0;
        Rng rng(4);
        OptionRunResult run = run_option(option, env, tables, Rates{0.5, 0.5, 0.0}, rng);
        CHECK(run.terminated);
        CHECK(run.steps == 1);
        CHECK(run.failures == 0);
        CHECK(env.door_phase() == GridWorldEnv::kOpen);
    }

    SUBCASE("a rigged table forcing F=10 fails, stays put and retries") {
        LearningTables tables;
        auto& intra = tables.intra[{from, ctx.grounded.action_id("push")}];
        intra.r[{env.state_id(), GridWorldEnv::push_action(10)}] = 100.0;  // looks great, is not
        Rng rng(4);
        Rates rates{0.0, 0.0, 0.0};  // frozen tables: it keeps choosing F=10
        OptionSpec capped = option;
        capped.step_cap = 5;
        OptionRunResult run = run_option(capped, env, tables, rates, rng);
        CHECK(!run.terminated);
        CHECK(run.steps == 5);
        CHECK(run.failures == 5);
        CHECK(run.cumulative_reward == -50.0);
        CHECK(env.door_phase() == GridWorldEnv::kActive);  // unchanged by failures
    }
}

TEST_CASE("run_option refuses to start outside its initiation state") {
    ExperimentContext ctx = make_context(DomainKind::Taxi1);
    auto env = make_env(ctx, 3);
    SymbolicState from = env->abstract_state();
    SymbolicState other = from;
    other.v[ctx.grounded.fluent_id("rewardvisited")] = 1;
    OptionSpec option;
    option.initiation = other;
    option.action = 0;
    option.target = from;
    option.admissible = {0};
    LearningTables tables;
    Rng rng(1);
    CHECK_THROWS_AS(run_option(option, *env, tables, Rates{}, rng), std::logic_error);
}

TEST_CASE("a from==to option terminates immediately and still respects the cap") {
    ExperimentContext ctx = make_context(DomainKind::Taxi1);
    auto env = make_env(ctx, 3);
    SymbolicState here = env->abstract_state();
    OptionSpec option;
    option.initiation = here;
    option.action = ctx.grounded.action_id("pickup");
    option.target = here;
    option.admissible = {TaxiEnv::kPickup};
    option.step_cap = 3;
    LearningTables tables;
    Rng rng(1);
    OptionRunResult run = run_option(option, *env, tables, Rates{}, rng);
    CHECK(run.terminated);
    CHECK(run.steps == 0);
    CHECK(run.cumulative_reward == 0.0);
}

TEST_CASE("epsilon = 0 makes run_option deterministic") {
    ExperimentContext ctx = make_context(DomainKind::GridWorld);
    auto run_once = [&] {
        GridWorldEnv env(ctx.grounded, GridWorldConfig{1});
        while (env.col() < 9) env.step(GridWorldEnv::kMoveEast);
        while (env.row() > 9) env.step(GridWorldEnv::kMoveNorth);
        while (env.row() < 9) env.step(GridWorldEnv::kMoveSouth);
        SymbolicState from = env.abstract_state();
        SymbolicState to = from;
        to.v[ctx.grounded.fluent_id("dooractive")] = 1;
        OptionSpec option = map_transition_to_option(
            ctx.grounded, from, ctx.grounded.action_id("activate"), to, ctx.catalog);
        LearningTables tables;
        Rng rng(77);
        OptionRunResult run = run_option(option, env, tables, Rates{1.0, 0.5, 0.0}, rng);
        return std::make_pair(run.steps, run.cumulative_reward);
    };
    auto a = run_once();
    auto b = run_once();
    CHECK(a == b);
}

TEST_CASE("plan_quality sums option-level rho with zero defaults") {
    GroundDomain g = ground(parse_ok(taxi_domain_text()));
    SymbolicState s0 =
        initial_state(g, atoms("taxiat(3,2), passenger=yd, dest=gd, ~rewardvisited"));
    auto s1 = successor(g, s0, g.action_id("move(w)"));
    auto s2 = successor(g, *s1, g.action_id("move(s)"));
    auto s3 = successor(g, *s2, g.action_id("move(s)"));
    Plan p{{s0, *s1, *s2, *s3},
           {g.action_id("move(w)"), g.action_id("move(s)"), g.action_id("move(s)")},
           0.0};

    LearningTables tables;
    tables.option_rho[{s0, g.action_id("move(w)")}] = 2.0;
    tables.option_rho[{*s1, g.action_id("move(s)")}] = 3.0;
    tables.option_rho[{*s2, g.action_id("move(s)")}] = -1.0;
    CHECK(plan_quality(p, tables) == 4.0);
    CHECK(plan_quality(Plan{{s0}, {}, 0.0}, tables) == 0.0);

    SUBCASE("quality is additive over disjoint segments") {
        Plan head{{s0, *s1}, {g.action_id("move(w)")}, 0.0};
        Plan tail{{*s1, *s2, *s3}, {g.action_id("move(s)"), g.action_id("move(s)")}, 0.0};
        CHECK(plan_quality(head, tables) + plan_quality(tail, tables) ==
              plan_quality(p, tables));
    }
}

TEST_CASE("table snapshots round-trip through save and load") {
    ExperimentContext ctx = make_context(DomainKind::Taxi1);
    auto env = make_env(ctx, 5);
    SymbolicState s = env->abstract_state();

    LearningTables tables;
    tables.option_r[{s, ctx.grounded.action_id("move(e)")}] = -1.25;
    tables.option_rho[{s, ctx.grounded.action_id("move(e)")}] = -0.5;
    auto& intra = tables.intra[{s, ctx.grounded.action_id("move(e)")}];
    intra.r[{env->state_id(), TaxiEnv::kMoveEast}] = 0.125;
    intra.rho[{env->state_id(), TaxiEnv::kMoveEast}] = -3.0625;

    std::ostringstream os;
    save_tables(os, ctx.grounded, *env, tables);
    std::istringstream is(os.str());
    LearningTables loaded = load_tables(is, ctx.grounded, *env);

    CHECK(loaded.option_r == tables.option_r);
    CHECK(loaded.option_rho == tables.option_rho);
    REQUIRE(loaded.intra.size() == 1);
    const auto& li = loaded.intra.at({s, ctx.grounded.action_id("move(e)")});
    CHECK(li.r == intra.r);
    CHECK(li.rho == intra.rho);

    std::ostringstream os2;
    save_tables(os2, ctx.grounded, *env, loaded);
    CHECK(os2.str() == os.str());
}

}  // TEST_SUITE
