#include "helpers.hpp"
#include "loglessraft/invariants.hpp"

using namespace loglessraft;
using namespace loglessraft::testing;

TEST_CASE("is_deactivated") {
    GlobalState g = fresh(3);
    CHECK_FALSE(is_deactivated(g, g.at(0).config));

    SUBCASE("everyone moved on") {
        for (auto& s : g.servers) s.config.version = 2;
        CHECK(is_deactivated(g, Config{ms({0, 1, 2}), 1, 0}));
    }
    SUBCASE("one straggler quorum keeps it active") {
        g.at(0).config.version = 2;
        // The quorum {1,2} holds no newer config.
        CHECK_FALSE(is_deactivated(g, Config{ms({0, 1, 2}), 1, 0}));
    }
}

TEST_CASE("election_safety") {
    GlobalState g = fresh(3);
    CHECK(election_safety(g).holds);

    g.at(0) = {1, Role::Primary, g.at(0).config, {}};
    g.at(1) = {2, Role::Primary, g.at(1).config, {}};
    CHECK(election_safety(g).holds);  // different terms

    g.at(1).term = 1;
    auto r = election_safety(g);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].servers == std::vector<ServerId>{0, 1});
}

TEST_CASE("leader_completeness") {
    GlobalState g = fresh(3);
    g.at(0).role = Role::Primary;
    CHECK(leader_completeness(g).holds);  // nothing committed

    g.add_committed({1, 1});
    g.at(0).term = 2;
    CHECK_FALSE(leader_completeness(g).holds);  // log [] misses (1,1)

    g.at(0).term = 1;
    CHECK(leader_completeness(g).holds);  // strict: cterm < term required
}

TEST_CASE("log_matching") {
    GlobalState g = fresh(2);
    g.at(0).log = {1, 2};
    g.at(1).log = {1, 3};
    CHECK(log_matching(g).holds);

    g.at(1).log = {3, 2};
    auto r = log_matching(g);
    CHECK_FALSE(r.holds);
    CHECK(*r.witnesses[0].index == 2);

    GlobalState h = fresh(3);
    h.at(0).log = {1, 1, 2};
    CHECK(log_matching(h).holds);  // one non-empty log is vacuous
}

TEST_CASE("state lemma suite on the initial state") {
    auto reports = state_lemma_suite(fresh(3));
    CHECK(reports.size() == 13);
    for (const auto& r : reports) CHECK(r.holds);
}

TEST_CASE("state lemma suite flags hand-built contradictions") {
    SUBCASE("primary whose config term lags its term") {
        GlobalState g = fresh(3);
        g.at(0).role = Role::Primary;
        g.at(0).term = 1;  // config term still 0
        auto r = check_state_invariant("primary-term-equals-config-term", g);
        CHECK_FALSE(r.holds);
    }
    SUBCASE("same (version, term) with different members") {
        GlobalState g = fresh(3);
        g.at(1).config.members = ms({0, 1});
        CHECK_FALSE(check_state_invariant("config-version-term-unique", g).holds);
    }
    SUBCASE("another server outruns the primary's version in its term") {
        GlobalState g = fresh(3);
        g.at(0) = {1, Role::Primary, {ms({0, 1, 2}), 1, 1}, {}};
        g.at(1) = {1, Role::Secondary, {ms({0, 1, 2}), 2, 1}, {}};
        CHECK_FALSE(check_state_invariant("primary-newest-config-of-term", g).holds);
    }
    SUBCASE("decreasing log terms") {
        GlobalState g = fresh(2);
        g.at(0).log = {2, 1};
        CHECK_FALSE(check_state_invariant("log-terms-monotonic", g).holds);
    }
    SUBCASE("primary below its own log") {
        GlobalState g = fresh(2);
        g.at(0) = {1, Role::Primary, {ms({0, 1}), 1, 1}, {3}};
        CHECK_FALSE(check_state_invariant("primary-term-gte-log-term", g).holds);
    }
    SUBCASE("committed entry missing under a later-term log") {
        GlobalState g = fresh(2);
        g.at(0).log = {2};
        g.add_committed({1, 1});
        CHECK_FALSE(check_state_invariant("newer-logs-have-committed", g).holds);
    }
    SUBCASE("stale primary still commands a quorum") {
        GlobalState g = fresh(3);
        g.at(0) = {1, Role::Primary, {ms({0, 1, 2}), 1, 1}, {}};
        g.at(1).config.term = 2;
        CHECK_FALSE(check_state_invariant("newer-configs-disable-commits", g).holds);
    }
    SUBCASE("unknown names are rejected") {
        CHECK_THROWS_AS(check_state_invariant("no-such-lemma", fresh(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("transition lemmas") {
    GlobalState g = fresh(3);

    SUBCASE("send_config steps are monotonic") {
        GlobalState pre = g;
        pre.at(0).config.version = 2;
        auto r = apply_send_config(pre, 0, 1);
        REQUIRE(r.ok());
        for (const auto& rep : transition_lemma_suite(pre, r.state)) CHECK(rep.holds);
    }
    SUBCASE("stutter is fine") {
        for (const auto& rep : transition_lemma_suite(g, g)) CHECK(rep.holds);
    }
    SUBCASE("a config term going backwards is flagged") {
        GlobalState pre = g;
        pre.at(0).config.term = 3;
        GlobalState post = g;
        post.at(0).config.term = 1;
        CHECK_FALSE(check_transition_invariant("configs-monotonic", pre, post).holds);
    }
    SUBCASE("reactivating a dead config is flagged") {
        GlobalState pre = fresh(2);
        pre.at(0).config.version = 2;
        pre.at(1).config.version = 2;
        // Hold a stale config on a third server to witness deactivation.
        pre.servers.push_back(ServerState{0, Role::Secondary, {ms({0, 1}), 1, 0}, {}});
        REQUIRE(is_deactivated(pre, Config{ms({0, 1}), 1, 0}));
        GlobalState post = pre;
        post.at(0).config.version = 1;  // illegal regression
        post.at(1).config.version = 1;
        CHECK_FALSE(check_transition_invariant("deactivation-stability", pre, post).holds);
    }
}

TEST_CASE("checkers never mutate their input") {
    SplitMix64 rng(5);
    for (int round = 0; round < 50; ++round) {
        GlobalState g = arbitrary_state(rng, 3);
        GlobalState copy = g;
        election_safety(g);
        leader_completeness(g);
        log_matching(g);
        state_lemma_suite(g);
        transition_lemma_suite(g, g);
        CHECK(g == copy);
    }
}

TEST_CASE("invariant registry is complete and consistent") {
    CHECK(state_invariant_names().size() == 16);  // 3 headline + 13 lemmas
    CHECK(transition_invariant_names().size() == 2);
    GlobalState g = fresh(2);
    for (const auto& name : state_invariant_names())
        CHECK(check_state_invariant(name, g).name == name);
}

TEST_CASE("every reachable state at tiny bounds satisfies the suite") {
    // Random walks standing in for exhaustive exploration; the acceptance
    // suite does the exhaustive version at larger bounds.
    SplitMix64 rng(17);
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_log_len = 1;
    b.max_config_version = 2;
    for (int round = 0; round < 120; ++round) {
        GlobalState g = reachable_state(rng, b, static_cast<std::uint32_t>(rng.bounded(0, 20)));
        CHECK(election_safety(g).holds);
        CHECK(leader_completeness(g).holds);
        CHECK(log_matching(g).holds);
        for (const auto& rep : state_lemma_suite(g)) CHECK(rep.holds);
    }
}
