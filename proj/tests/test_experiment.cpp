#include "helpers.hpp"
#include "loglessraft/experiment.hpp"

using namespace loglessraft;

namespace {

ExperimentParams quick_params(std::uint64_t seed) {
    ExperimentParams p;
    p.total_ms = 16000;  // two degraded phases
    p.seed = seed;
    return p;
}

// A write committed strictly inside [start, end), issued at or after start.
bool recovered_in_phase(const ExperimentResult& r, const PhaseStats& phase) {
    for (const auto& rec : r.records) {
        if (rec.outcome != WriteOutcome::Committed) continue;
        if (rec.issued_at_ms < phase.start_ms) continue;
        if (rec.issued_at_ms + rec.latency_ms < phase.end_ms) return true;
    }
    return false;
}

std::uint32_t commits_inside_phase(const ExperimentResult& r, const PhaseStats& phase) {
    std::uint32_t n = 0;
    for (const auto& rec : r.records)
        if (rec.outcome == WriteOutcome::Committed && rec.issued_at_ms >= phase.start_ms &&
            rec.issued_at_ms < phase.end_ms && rec.issued_at_ms + rec.latency_ms < phase.end_ms)
            ++n;
    return n;
}

}  // namespace

TEST_CASE("logless reconfiguration restores write availability mid-phase") {
    auto r = run_availability_experiment(Backend::Logless, quick_params(7));
    REQUIRE(r.all_hold);
    REQUIRE(r.stats.phases.size() == 2);
    for (const auto& phase : r.stats.phases) {
        CAPTURE(phase.start_ms);
        CHECK(recovered_in_phase(r, phase));
        CHECK(phase.recovery_ms.has_value());
        // The swap completes within the phase.
        CHECK(phase.reconfig_completions_ms.size() == 4);
        for (std::uint64_t t : phase.reconfig_completions_ms) CHECK(t < phase.end_ms);
    }
    CHECK(r.stats.total_reconfigs == 8);
}

TEST_CASE("oplog-gated reconfiguration stalls until the degradation lifts") {
    auto r = run_availability_experiment(Backend::RaftOplog, quick_params(7));
    REQUIRE(r.all_hold);
    REQUIRE(r.stats.phases.size() == 2);
    for (const auto& phase : r.stats.phases) {
        CAPTURE(phase.start_ms);
        CHECK(commits_inside_phase(r, phase) == 0);
        // No reconfiguration completes inside the degraded window either.
        for (std::uint64_t t : phase.reconfig_completions_ms) CHECK(t >= phase.end_ms);
        CHECK(phase.timeouts > 50);
    }
    // The stalled swaps complete after each phase ends.
    CHECK(r.stats.total_reconfigs > 0);
}

TEST_CASE("no degradation, no timeouts, either backend") {
    ExperimentParams p;
    p.degraded_ms = 0;
    p.total_ms = 12000;
    p.seed = 3;
    for (Backend b : {Backend::Logless, Backend::RaftOplog}) {
        auto r = run_availability_experiment(b, p);
        REQUIRE(r.all_hold);
        CHECK(r.stats.total_timeouts == 0);
        CHECK(r.stats.total_committed > 400);
        CHECK(r.stats.phases.empty());
        CHECK(r.stats.total_reconfigs == 0);
    }
}

TEST_CASE("identical parameters reproduce identical records") {
    auto a = run_availability_experiment(Backend::Logless, quick_params(11));
    auto b = run_availability_experiment(Backend::Logless, quick_params(11));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].issued_at_ms == b.records[i].issued_at_ms);
        CHECK(a.records[i].latency_ms == b.records[i].latency_ms);
        CHECK(a.records[i].outcome == b.records[i].outcome);
    }
}

TEST_CASE("summarize") {
    SUBCASE("empty records give zero counts") {
        auto stats = summarize({}, {});
        CHECK(stats.total_committed == 0);
        CHECK(stats.total_timeouts == 0);
        CHECK(stats.phases.empty());
    }
    SUBCASE("recovery is the first committed issue offset") {
        FaultSchedule phases;
        phases.push_back({1000, 2000, MemberSet::of({1, 2}), FaultKind::PauseReplication});
        std::vector<LatencyRecord> records = {
            {1100, 100, WriteOutcome::Timeout},
            {1200, 40, WriteOutcome::Committed},
            {1300, 30, WriteOutcome::Committed},
        };
        auto stats = summarize(records, phases);
        REQUIRE(stats.phases.size() == 1);
        CHECK(stats.phases[0].recovery_ms == 200);
        CHECK(stats.phases[0].timeouts == 1);
        CHECK(stats.phases[0].committed == 2);
    }
    SUBCASE("unordered records are a domain error") {
        std::vector<LatencyRecord> bad = {
            {200, 10, WriteOutcome::Committed},
            {100, 10, WriteOutcome::Committed},
        };
        CHECK_THROWS_AS(summarize(bad, {}), std::invalid_argument);
    }
}

TEST_CASE("logless strictly beats the oplog-gated backend per phase") {
    auto lg = run_availability_experiment(Backend::Logless, quick_params(21));
    auto ro = run_availability_experiment(Backend::RaftOplog, quick_params(21));
    REQUIRE(lg.all_hold);
    REQUIRE(ro.all_hold);
    REQUIRE(lg.stats.phases.size() == ro.stats.phases.size());
    for (std::size_t k = 0; k < lg.stats.phases.size(); ++k)
        CHECK(lg.stats.phases[k].timeouts < ro.stats.phases[k].timeouts);
}

TEST_CASE("invalid parameters are rejected") {
    ExperimentParams p;
    p.writer_period_ms = 0;
    CHECK_THROWS_AS(run_availability_experiment(Backend::Logless, p), std::invalid_argument);
}
