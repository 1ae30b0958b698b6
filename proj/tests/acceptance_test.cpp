// Acceptance suite: every criterion below runs at its stated bounds and
// tolerance and prints one PASS/FAIL line. Criterion 8 re-runs the
// serializable workloads and compares output bytes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "loglessraft/experiment.hpp"
#include "loglessraft/json_io.hpp"
#include "loglessraft/simnet.hpp"

using namespace loglessraft;

namespace {

std::map<std::string, std::string> g_digests;

void report_line(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- criterion 1 -------------------------------------------------------------

std::string run_exhaustive_small(bool& pass) {
    Bounds b;
    b.server_count = 3;
    b.max_term = 2;
    b.max_log_len = 1;
    b.max_config_version = 2;
    auto report = explore(ProtocolMode::Full, b, {"all"}, false, {});
    pass = report.all_hold;
    // Every state invariant saw every state; transition lemmas saw edges.
    for (const auto& [name, checks] : report.per_invariant) {
        if (name == "configs-monotonic" || name == "deactivation-stability")
            pass = pass && checks > report.distinct_states;
        else
            pass = pass && checks == report.distinct_states;
    }
    return to_json(report, ProtocolMode::Full, b, false).dump();
}

// --- criterion 3 oracle -------------------------------------------------------

void enumerate_rec(const GlobalState& g, const Bounds& bounds, std::set<std::string>& seen) {
    if (!seen.insert(to_json(g).dump()).second) return;
    for (const auto& d : enabled_transitions(g, bounds)) {
        GlobalState next = g;
        apply_action_inplace(next, d);
        enumerate_rec(next, bounds, seen);
    }
}

// --- criterion 5 -------------------------------------------------------------

std::string run_refinement_corpus(bool& pass) {
    Bounds b;
    b.server_count = 3;
    b.max_term = 3;
    b.max_log_len = 3;
    b.max_config_version = 3;
    json all = json::array();
    pass = true;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Trace t = random_trace(b, 20, seed);
        auto rr = project_and_check_refinement(t);
        pass = pass && rr.refines && replay(t).valid;
        all.push_back({{"seed", seed},
                       {"steps", t.steps.size()},
                       {"refines", rr.refines},
                       {"trace", to_json(t)}});
    }
    return all.dump();
}

// --- criterion 6 -------------------------------------------------------------

std::string run_simulator_corpus(bool& pass) {
    pass = true;
    json all = json::array();
    SplitMix64 meta(77001);
    for (int k = 0; k < 100; ++k) {
        const std::uint64_t seed = meta.next();
        const std::uint32_t servers = 3 + static_cast<std::uint32_t>(k % 3);
        SimConfig cfg;
        cfg.seed = seed;
        cfg.universe = servers;
        cfg.duration_ms = 6000;
        ClientWorkload client;
        client.start_ms = 400;
        FaultSchedule faults;
        const std::uint32_t windows = static_cast<std::uint32_t>(meta.bounded(0, 2));
        for (std::uint32_t w = 0; w < windows; ++w) {
            const std::uint64_t start = 500 + meta.bounded(0, 4000);
            faults.push_back(
                {start, start + meta.bounded(200, 1800),
                 MemberSet(static_cast<std::uint32_t>(meta.bounded(1, (1u << servers) - 1))),
                 FaultKind::PauseReplication});
        }
        auto out = run_simulation(cfg, faults, client);
        // The observer covers election safety, leader completeness, and
        // acknowledged-write durability at every state change.
        pass = pass && out.all_hold;
        all.push_back({{"seed", seed},
                       {"servers", servers},
                       {"verdict", out.all_hold ? "AllHold" : out.violation_invariant},
                       {"events", out.stats.events_processed},
                       {"commits", out.stats.commit_actions},
                       {"committedWrites", out.stats.writes_committed},
                       {"timedOutWrites", out.stats.writes_timed_out}});
    }
    return all.dump();
}

// --- criterion 7 -------------------------------------------------------------

// A write issued at or after the onset that committed before the phase end.
bool committed_inside(const ExperimentResult& r, const PhaseStats& phase) {
    for (const auto& rec : r.records) {
        if (rec.outcome != WriteOutcome::Committed) continue;
        if (rec.issued_at_ms < phase.start_ms || rec.issued_at_ms >= phase.end_ms) continue;
        if (rec.issued_at_ms + rec.latency_ms < phase.end_ms) return true;
    }
    return false;
}

std::string run_experiment_corpus(bool& pass) {
    std::string digest;
    std::uint32_t logless_recovered = 0, logless_total = 0;
    std::uint32_t raft_clean = 0, raft_total = 0;
    bool safe = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ExperimentParams params;
        params.seed = seed;
        auto lg = run_availability_experiment(Backend::Logless, params);
        auto ro = run_availability_experiment(Backend::RaftOplog, params);
        safe = safe && lg.all_hold && ro.all_hold;
        for (const auto& phase : lg.stats.phases) {
            ++logless_total;
            if (committed_inside(lg, phase)) ++logless_recovered;
        }
        for (const auto& phase : ro.stats.phases) {
            ++raft_total;
            if (!committed_inside(ro, phase)) ++raft_clean;
        }
        for (const auto* r : {&lg, &ro}) {
            digest += "issued_at_ms,latency_ms,outcome\n";
            for (const auto& rec : r->records)
                digest += std::to_string(rec.issued_at_ms) + "," +
                          std::to_string(rec.latency_ms) + "," +
                          (rec.outcome == WriteOutcome::Committed ? "committed" : "timeout") +
                          "\n";
            json phases = json::array();
            for (const auto& p : r->stats.phases)
                phases.push_back(
                    {{"startMs", p.start_ms},
                     {"endMs", p.end_ms},
                     {"recoveryMs", p.recovery_ms ? json(*p.recovery_ms) : json(nullptr)},
                     {"timeouts", p.timeouts},
                     {"committed", p.committed},
                     {"reconfigCompletionsMs", p.reconfig_completions_ms}});
            digest += phases.dump() + "\n";
        }
    }
    // Logless recovers in at least 9 of 10 phases; the oplog-gated backend
    // never commits a post-onset write inside a degraded phase.
    pass = safe && logless_total > 0 && raft_total > 0 &&
           10 * logless_recovered >= 9 * logless_total && raft_clean == raft_total;
    std::printf("        logless recovered %u/%u phases; raft-oplog clean %u/%u phases\n",
                logless_recovered, logless_total, raft_clean, raft_total);
    return digest;
}

}  // namespace

TEST_CASE("criterion 1: exhaustive safety at small bounds") {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    g_digests["c1"] = run_exhaustive_small(pass);
    const double secs = seconds_since(t0);
    pass = pass && secs < 600.0;
    report_line(1, pass,
                "full mode, 3 servers, maxTerm 2, maxLogLen 1, maxConfigVersion 2, all "
                "invariants AllHold (" + std::to_string(secs) + "s)");
    CHECK(pass);
}

TEST_CASE("criterion 2: logless subprotocol at moderate bounds") {
    auto t0 = std::chrono::steady_clock::now();
    Bounds b;
    b.server_count = 4;
    b.max_term = 3;
    b.max_log_len = 0;
    b.max_config_version = 3;
    auto report = explore(ProtocolMode::LoglessOnly, b, {"election-safety"}, true, {});
    const double secs = seconds_since(t0);
    const bool pass = report.all_hold && secs < 1800.0;
    report_line(2, pass,
                "logless mode, 4 servers, maxTerm 3, maxConfigVersion 3, symmetry, "
                "election-safety AllHold over " + std::to_string(report.distinct_states) +
                " states (" + std::to_string(secs) + "s)");
    CHECK(pass);
}

TEST_CASE("criterion 3: BFS equals an independent recursive enumeration") {
    Bounds b;
    b.server_count = 2;
    b.max_term = 1;
    b.max_log_len = 0;
    b.max_config_version = 1;
    ExploreOptions opt;
    opt.collect_states = true;
    auto report = explore(ProtocolMode::Full, b, {"all"}, false, opt);

    std::set<std::string> oracle;
    enumerate_rec(initial_state(2, MemberSet::universe(2)), b, oracle);

    std::set<std::string> bfs;
    for (const auto& s : report.states) bfs.insert(to_json(s).dump());

    const bool pass = report.all_hold && bfs == oracle &&
                      report.distinct_states == oracle.size();
    report_line(3, pass,
                "BFS state set matches the naive enumerator exactly (" +
                    std::to_string(oracle.size()) + " states)");
    CHECK(pass);
}

TEST_CASE("criterion 4: every dropped guard is caught with a replayable trace") {
    // Minimal bounds per mutation, pinned from the first successful runs;
    // all within the (4 servers, maxTerm 3, maxLogLen 2, maxConfigVersion 3)
    // envelope. Each mutation breaks a headline theorem, not just a lemma.
    struct Pin {
        const char* mutation;
        const char* invariant;
        Bounds bounds;
    };
    const Bounds b3{3, 3, 1, 3, {}};
    const Pin pins[] = {
        {"drop-q1", "election-safety", b3},
        {"drop-q2", "election-safety", b3},
        {"drop-p1", "leader-completeness", b3},
        {"drop-config-vote-guard", "election-safety", b3},
        {"drop-config-term-rewrite", "election-safety", b3},
    };
    bool pass = true;
    for (const auto& pin : pins) {
        ExploreOptions opt;
        opt.mutations = semantics_with_mutations({pin.mutation}, false);
        auto report = explore(ProtocolMode::Full, pin.bounds,
                              {"election-safety", "leader-completeness"}, false, opt);
        bool found = !report.all_hold && report.violated_invariant == pin.invariant &&
                     report.counterexample.has_value();
        if (found) {
            auto rr = replay(*report.counterexample);
            found = rr.valid && !check_state_invariant(pin.invariant, rr.final).holds;
        }
        std::printf("        %-26s -> %-20s trace length %zu\n", pin.mutation,
                    report.violated_invariant.c_str(),
                    report.counterexample ? report.counterexample->steps.size() : 0);
        pass = pass && found;
    }
    report_line(4, pass, "all five guard mutations violated and replayed at (3, T3, L1, V3)");
    CHECK(pass);
}

TEST_CASE("criterion 5: 1000 random behaviors project onto the config machine") {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    g_digests["c5"] = run_refinement_corpus(pass);
    const double secs = seconds_since(t0);
    pass = pass && secs < 60.0;
    report_line(5, pass, "1000 traces of length <= 20 at 3 servers all refine (" +
                             std::to_string(secs) + "s)");
    CHECK(pass);
}

TEST_CASE("criterion 6: simulator safety corpus") {
    bool pass = false;
    g_digests["c6"] = run_simulator_corpus(pass);
    report_line(6, pass,
                "100 seeds x 3-5 servers x random faults: observer AllHold incl. "
                "acknowledged-write durability");
    CHECK(pass);
}

TEST_CASE("criterion 7: degraded-replication availability, both backends") {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    g_digests["c7"] = run_experiment_corpus(pass);
    const double secs = seconds_since(t0);
    pass = pass && secs < 120.0;
    report_line(7, pass, "10 seeds, default parameters, qualitative contrast reproduced (" +
                             std::to_string(secs) + "s)");
    CHECK(pass);
}

TEST_CASE("criterion 8: byte-identical outputs on repeat runs") {
    bool pass = true;
    bool sub = false;
    pass = pass && g_digests.count("c1") && run_exhaustive_small(sub) == g_digests["c1"];
    pass = pass && g_digests.count("c5") && run_refinement_corpus(sub) == g_digests["c5"];
    pass = pass && g_digests.count("c6") && run_simulator_corpus(sub) == g_digests["c6"];
    pass = pass && g_digests.count("c7") && run_experiment_corpus(sub) == g_digests["c7"];
    report_line(8, pass, "criteria 1, 5, 6, 7 reproduce byte-identical JSON/CSV outputs");
    CHECK(pass);
}
