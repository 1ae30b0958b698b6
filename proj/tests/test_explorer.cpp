#include <set>

#include "helpers.hpp"
#include "loglessraft/explorer.hpp"
#include "loglessraft/json_io.hpp"

using namespace loglessraft;
using namespace loglessraft::testing;

namespace {

// Independent oracle for the reachable set: plain recursive enumeration
// with a std::set of serialized states, no packing, no BFS machinery.
void enumerate_rec(const GlobalState& g, const Bounds& bounds, const Semantics& sem,
                   std::set<std::string>& seen) {
    const std::string key = to_json(g).dump();
    if (!seen.insert(key).second) return;
    for (const auto& d : enabled_transitions(g, bounds, sem)) {
        GlobalState next = g;
        REQUIRE(apply_action_inplace(next, d, sem) == Guard::Ok);
        enumerate_rec(next, bounds, sem, seen);
    }
}

std::set<std::string> naive_reachable(const Bounds& bounds, const Semantics& sem = {}) {
    std::set<std::string> seen;
    enumerate_rec(initial_state(bounds.server_count, bounds.init_members()), bounds, sem, seen);
    return seen;
}

Bounds tiny_bounds() {
    Bounds b;
    b.server_count = 2;
    b.max_term = 1;
    b.max_log_len = 0;
    b.max_config_version = 1;
    return b;
}

Bounds small_bounds() {
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_log_len = 1;
    b.max_config_version = 2;
    return b;
}

}  // namespace

TEST_CASE("BFS state set equals the naive recursive enumerator") {
    Bounds b = tiny_bounds();
    ExploreOptions opt;
    opt.collect_states = true;
    auto report = explore(ProtocolMode::Full, b, {"all"}, false, opt);
    CHECK(report.all_hold);

    auto oracle = naive_reachable(b);
    CHECK(report.distinct_states == oracle.size());
    std::set<std::string> bfs;
    for (const auto& s : report.states) bfs.insert(to_json(s).dump());
    CHECK(bfs == oracle);
}

TEST_CASE("exploration at small bounds holds every invariant") {
    auto report = explore(ProtocolMode::Full, small_bounds(), {"all"}, false, {});
    CHECK(report.all_hold);
    CHECK(report.counterexample == std::nullopt);
    CHECK(report.distinct_states > 100);
    // Every selected invariant saw every distinct state.
    for (const auto& [name, checks] : report.per_invariant) {
        CAPTURE(name);
        if (name != "configs-monotonic" && name != "deactivation-stability")
            CHECK(checks == report.distinct_states);
    }
}

TEST_CASE("unknown invariant names are rejected") {
    CHECK_THROWS_AS(explore(ProtocolMode::Full, tiny_bounds(), {"nope"}, false, {}),
                    std::invalid_argument);
}

TEST_CASE("canonicalize") {
    SplitMix64 rng(2);
    std::vector<ServerId> swap01 = {1, 0, 2};
    for (int round = 0; round < 100; ++round) {
        GlobalState g = arbitrary_state(rng, 3);
        GlobalState c = canonicalize(g);
        CHECK(canonicalize(c) == c);                       // idempotent
        CHECK(canonicalize(permute_state(g, swap01)) == c);  // orbit-invariant
    }
    GlobalState init = fresh(3);
    CHECK(canonicalize(init) == init);  // symmetric initial state is a fixed point
}

TEST_CASE("symmetry reduction preserves verdicts and shrinks counts") {
    Bounds b = small_bounds();
    auto plain = explore(ProtocolMode::Full, b, {"election-safety", "leader-completeness"},
                         false, {});
    auto sym = explore(ProtocolMode::Full, b, {"election-safety", "leader-completeness"},
                       true, {});
    CHECK(plain.all_hold == sym.all_hold);
    CHECK(sym.distinct_states <= plain.distinct_states);
    CHECK(sym.distinct_states >= plain.distinct_states / 7);  // at most |perms| collapse
    CHECK(plain.max_depth == sym.max_depth);

    Bounds lg;
    lg.server_count = 3;
    lg.max_term = 2;
    lg.max_config_version = 2;
    auto lplain = explore(ProtocolMode::LoglessOnly, lg, {"election-safety"}, false, {});
    auto lsym = explore(ProtocolMode::LoglessOnly, lg, {"election-safety"}, true, {});
    CHECK(lplain.all_hold == lsym.all_hold);
    CHECK(lsym.distinct_states <= lplain.distinct_states);
}

TEST_CASE("logless exploration ignores log actions") {
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_config_version = 2;
    ExploreOptions opt;
    opt.collect_states = true;
    auto report = explore(ProtocolMode::LoglessOnly, b, {"all"}, false, opt);
    CHECK(report.all_hold);
    for (const auto& s : report.states) {
        CHECK(s.committed.empty());
        for (const auto& srv : s.servers) CHECK(srv.log.empty());
    }
}

TEST_CASE("replay") {
    Trace t;
    t.init = fresh(3);
    t.steps.push_back({ActionKind::BecomeLeader, 0, 0, ms({0, 1})});
    auto r = replay(t);
    CHECK(r.valid);
    CHECK(r.final.at(0).role == Role::Primary);

    Trace bad;
    bad.init = fresh(3);
    bad.steps.push_back({ActionKind::Reconfig, 0, 0, ms({0, 1, 2})});
    auto rb = replay(bad);
    CHECK_FALSE(rb.valid);
    CHECK(rb.failed_step == 1);
    CHECK(rb.reason == Guard::NotPrimary);
}

TEST_CASE("mutation runs produce replayable counterexamples") {
    Bounds b;
    b.server_count = 4;
    b.max_term = 3;
    b.max_log_len = 2;
    b.max_config_version = 3;
    ExploreOptions opt;
    opt.mutations.drop_q1 = true;
    auto report = explore(ProtocolMode::Full, b, {"all"}, false, opt);
    REQUIRE_FALSE(report.all_hold);
    REQUIRE(report.counterexample.has_value());
    auto rr = replay(*report.counterexample);
    REQUIRE(rr.valid);
    auto final_report = check_state_invariant(report.violated_invariant, rr.final);
    // Transition-lemma violations end on the offending edge instead.
    if (report.violated_invariant != "configs-monotonic" &&
        report.violated_invariant != "deactivation-stability")
        CHECK_FALSE(final_report.holds);
}

TEST_CASE("counterexamples found under symmetry still replay") {
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_log_len = 1;
    b.max_config_version = 2;
    ExploreOptions opt;
    opt.mutations.drop_config_term_rewrite = true;
    auto plain = explore(ProtocolMode::Full, b, {"all"}, false, opt);
    auto sym = explore(ProtocolMode::Full, b, {"all"}, true, opt);
    CHECK(plain.all_hold == sym.all_hold);
    if (!sym.all_hold) {
        REQUIRE(sym.counterexample.has_value());
        auto rr = replay(*sym.counterexample);
        CHECK(rr.valid);
    }
}

TEST_CASE("refinement of hand-built traces") {
    SUBCASE("log-only traces are stutters") {
        GlobalState init = fresh(3);
        Trace t;
        t.init = init;
        t.steps.push_back({ActionKind::BecomeLeader, 0, 0, ms({0, 1})});
        t.steps.push_back({ActionKind::ClientRequest, 0, 0, {}});
        t.steps.push_back({ActionKind::GetEntries, 1, 0, {}});
        CHECK(project_and_check_refinement(t).refines);
    }
    SUBCASE("election, propagation, reconfig") {
        Trace t;
        t.init = fresh(4, ms({0, 1, 2}));
        t.steps.push_back({ActionKind::BecomeLeader, 0, 0, ms({0, 1})});
        t.steps.push_back({ActionKind::SendConfig, 0, 1, {}});
        t.steps.push_back({ActionKind::Reconfig, 0, 0, ms({0, 1, 2, 3})});
        REQUIRE(replay(t).valid);
        CHECK(project_and_check_refinement(t).refines);
    }
    SUBCASE("a non-initial starting state is rejected") {
        Trace t;
        t.init = fresh(2);
        t.init.at(0).term = 1;
        auto r = project_and_check_refinement(t);
        CHECK_FALSE(r.refines);
        CHECK(r.failed_step == 0);
    }
}

TEST_CASE("random full traces refine the logless machine") {
    Bounds b;
    b.server_count = 3;
    b.max_term = 3;
    b.max_log_len = 3;
    b.max_config_version = 3;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Trace t = random_trace(b, 20, seed);
        REQUIRE(replay(t).valid);
        auto r = project_and_check_refinement(t);
        CAPTURE(seed);
        CAPTURE(r.failed_step);
        CAPTURE(r.reason);
        CHECK(r.refines);
    }
}

TEST_CASE("exploration reports are deterministic") {
    Bounds b = small_bounds();
    auto r1 = explore(ProtocolMode::Full, b, {"all"}, true, {});
    auto r2 = explore(ProtocolMode::Full, b, {"all"}, true, {});
    CHECK(to_json(r1, ProtocolMode::Full, b, true).dump() ==
          to_json(r2, ProtocolMode::Full, b, true).dump());
}

TEST_CASE("trace json round-trips") {
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_log_len = 2;
    b.max_config_version = 2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Trace t = random_trace(b, 10, seed);
        json j = to_json(t);
        Trace back = trace_from_json(j);
        CHECK(back.init == t.init);
        REQUIRE(back.steps.size() == t.steps.size());
        for (std::size_t k = 0; k < t.steps.size(); ++k) CHECK(back.steps[k] == t.steps[k]);
        CHECK(to_json(back).dump() == j.dump());
    }
}
