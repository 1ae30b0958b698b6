#pragma once

#include <optional>
#include <variant>

#include "loglessraft/explorer.hpp"
#include "loglessraft/rng.hpp"

// Deterministic discrete-event simulator. The atomic protocol actions are
// refined into message exchanges: heartbeats gossip terms and config
// metadata, elections run as vote request/response rounds with randomized
// timeouts, and log replication is pull-based. The linearization point of
// each abstract action is the event handler that applies it: payloads
// decide *whether* to attempt an action, but the action itself fires
// through the protocol layer against the current state, so every state
// change the simulator makes is a legal protocol transition. An omniscient
// observer re-checks safety after every state change and keeps the ghost
// committed set via CommitEntry actions.
//
// Determinism contract: one event loop, one seeded generator, ties broken
// by sequence number. Identical inputs give bit-identical outputs.

namespace loglessraft {

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint32_t universe = 3;
    MemberSet m_init;  // defaults to the full universe
    std::uint64_t heartbeat_interval_ms = 50;
    std::uint64_t election_timeout_min_ms = 150;
    std::uint64_t election_timeout_max_ms = 300;
    std::uint64_t message_delay_min_ms = 1;
    std::uint64_t message_delay_max_ms = 5;
    std::uint64_t duration_ms = 10000;

    MemberSet init_members() const {
        return m_init.empty() ? MemberSet::universe(universe) : m_init;
    }
    void validate() const;
};

enum class FaultKind : std::uint8_t { PauseReplication };

// PauseReplication freezes the affected nodes' log replication (their
// pulls and push handling) for the window; heartbeat, vote and config
// traffic is unaffected.
struct FaultWindow {
    std::uint64_t start_ms = 0;
    std::uint64_t end_ms = 0;
    MemberSet affected;
    FaultKind kind = FaultKind::PauseReplication;
};
using FaultSchedule = std::vector<FaultWindow>;

struct ClientWorkload {
    std::uint64_t period_ms = 20;
    std::uint64_t timeout_ms = 100;
    std::uint64_t start_ms = 0;
};

enum class WriteOutcome : std::uint8_t { Committed, Timeout };

struct LatencyRecord {
    std::uint64_t issued_at_ms = 0;
    std::uint64_t latency_ms = 0;
    WriteOutcome outcome = WriteOutcome::Timeout;
};

struct SimStats {
    std::uint64_t events_processed = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_delivered = 0;
    std::uint64_t deferred_events = 0;  // handler deferred past a pause window
    std::uint64_t elections_started = 0;
    std::uint64_t elections_won = 0;
    std::uint64_t entries_appended = 0;
    std::uint64_t entries_rolled_back = 0;
    std::uint64_t commit_actions = 0;
    std::uint64_t config_adoptions = 0;
    std::uint64_t term_updates = 0;
    std::uint64_t writes_issued = 0;
    std::uint64_t writes_committed = 0;
    std::uint64_t writes_timed_out = 0;
};

// One row of the exported event log (enabled on demand).
struct SimEvent {
    std::uint64_t time_ms = 0;
    std::string kind;
    std::string details;
};

struct SimOutput {
    std::vector<LatencyRecord> records;  // ordered by issue time
    SimStats stats;
    bool all_hold = true;
    std::string violation_invariant;
    std::optional<Trace> trace;  // abstract behavior; absent when tainted
    std::vector<SimEvent> event_log;
};

// -----------------------------------------------------------------------------

namespace sim_detail {

struct Heartbeat {
    std::uint32_t term;
    std::uint32_t config_version;
    std::uint32_t config_term;
};
struct ConfigTransfer {
    Config config;
};
struct VoteRequest {
    std::uint32_t proposed_term;
    std::int64_t last_log_term;
    std::uint32_t log_len;
    std::uint32_t config_version;
    std::uint32_t config_term;
};
struct VoteResponse {
    bool granted;
    std::uint32_t term;  // the proposed term when granted, else the voter's
};
struct EntriesPull {
    std::uint32_t log_len;
    std::int64_t last_term;
};
struct EntriesPush {
    std::uint32_t entry_term;
    std::uint32_t at_index;  // 0: nothing to send, position report only
};
struct TermUpdate {
    std::uint32_t term;
};

using Payload = std::variant<Heartbeat, ConfigTransfer, VoteRequest, VoteResponse, EntriesPull,
                             EntriesPush, TermUpdate>;

struct Message {
    ServerId from = 0;
    ServerId to = 0;
    Payload payload;
};

enum class EventType : std::uint8_t {
    MessageArrival,
    ElectionTimeout,
    HeartbeatTick,
    PullTick,
    WriteIssue,
    WriteTimeout,
    Wakeup,
};

struct Event {
    std::uint64_t time_ms = 0;
    std::uint64_t seq = 0;
    EventType type = EventType::Wakeup;
    ServerId node = 0;
    Message msg;
    std::uint64_t id = 0;  // deadline stamp, write id, or wakeup tag

    // Min-heap order: earliest time first, then lowest sequence number.
    friend bool operator>(const Event& a, const Event& b) {
        if (a.time_ms != b.time_ms) return a.time_ms > b.time_ms;
        return a.seq > b.seq;
    }
};

struct NodeRuntime {
    std::uint64_t election_deadline = 0;
    bool election_active = false;
    std::uint32_t election_proposed = 0;
    MemberSet votes;
    std::optional<ServerId> known_leader;
    bool pull_inflight = false;
};

struct WriteOp {
    std::uint64_t issued_at = 0;
    std::uint32_t index = 0;
    std::uint32_t term = 0;
    bool appended = false;
    bool resolved = false;
};

}  // namespace sim_detail

class Simulation {
public:
    Simulation(const SimConfig& cfg, FaultSchedule faults,
               std::optional<ClientWorkload> client = {}, bool record_event_log = false);

    // True while at least one event remains within the configured duration.
    bool has_pending() const;
    std::uint64_t next_event_time() const;  // throws std::runtime_error if none

    // Pop and handle exactly the least (time, seq) event. Throws
    // std::runtime_error("NoMoreEvents") when nothing is pending.
    void step_inplace();

    std::uint64_t now() const { return now_; }
    const GlobalState& state() const { return state_; }
    std::optional<ServerId> current_primary() const;
    bool violation() const { return !all_hold_; }
    const std::string& violation_invariant() const { return violation_invariant_; }

    // Wakeup tags fired by the last step_inplace (for external controllers).
    const std::vector<std::uint64_t>& fired_wakeups() const { return fired_wakeups_; }

    // Controller surface. All calls are deterministic functions of the
    // call sequence, so drivers must themselves be event-driven.
    void schedule_wakeup(std::uint64_t time_ms, std::uint64_t tag);
    void add_fault(const FaultWindow& w);
    Guard try_action(const ActionDescriptor& d);
    // Directly swap a server's configuration (version + 1, same term),
    // bypassing the reconfiguration guards. Models log-entry-driven
    // reconfiguration; the abstract trace is no longer a behavior of the
    // protocol afterwards, so it is marked tainted.
    void force_config(ServerId i, MemberSet members);
    bool is_paused(ServerId node, std::uint64_t at_ms) const;
    bool commit_covers(std::uint32_t index, std::uint32_t term) const;

    const std::vector<LatencyRecord>& records() const { return records_; }
    const SimStats& stats() const { return stats_; }
    const std::vector<SimEvent>& event_log() const { return event_log_; }
    bool trace_tainted() const { return trace_tainted_; }
    Trace abstract_trace() const;  // throws when tainted

    // Deterministic digest of the observable simulation state, for
    // equality checks in tests.
    std::string debug_summary() const;

    // Run to completion (duration reached, queue drained, or violation).
    void run();

private:
    void push_event(sim_detail::Event ev);
    void send(ServerId from, ServerId to, sim_detail::Payload payload);
    std::uint64_t draw_delay();
    std::uint64_t draw_election_timeout();
    void arm_election_timer(ServerId node);
    std::uint64_t pause_end(ServerId node, std::uint64_t at_ms) const;

    // Applies an abstract action, records it, and runs the observer.
    Guard apply_abstract(const ActionDescriptor& d);
    void observer_check();
    void on_leader_elected(ServerId leader);
    void try_commit(ServerId primary);
    void resolve_commits();
    void log_event(const char* kind, std::string details);

    void handle(const sim_detail::Event& ev);
    void handle_message(const sim_detail::Event& ev);
    void handle_heartbeat(ServerId from, ServerId to, const sim_detail::Heartbeat& hb);
    void handle_config_transfer(ServerId from, ServerId to, const sim_detail::ConfigTransfer& ct);
    void handle_vote_request(ServerId from, ServerId to, const sim_detail::VoteRequest& vr);
    void handle_vote_response(ServerId from, ServerId to, const sim_detail::VoteResponse& vr);
    void handle_entries_pull(ServerId from, ServerId to, const sim_detail::EntriesPull& ep);
    void handle_entries_push(ServerId from, ServerId to, const sim_detail::EntriesPush& ep);
    void handle_term_update(ServerId from, ServerId to, const sim_detail::TermUpdate& tu);
    void handle_election_timeout(const sim_detail::Event& ev);
    void handle_pull_tick(ServerId node);
    void issue_pull(ServerId node);
    void handle_write_issue(std::uint64_t write_id);
    void handle_write_timeout(std::uint64_t write_id);

    SimConfig cfg_;
    FaultSchedule faults_;
    std::optional<ClientWorkload> client_;
    bool record_event_log_ = false;

    SplitMix64 rng_;
    std::uint64_t now_ = 0;
    std::uint64_t seq_ = 0;
    std::vector<sim_detail::Event> queue_;  // binary heap, min by (time, seq)

    GlobalState state_;
    std::vector<sim_detail::NodeRuntime> nodes_;
    std::vector<sim_detail::WriteOp> writes_;
    std::vector<LatencyRecord> records_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> acked_;  // durable (index, term)

    Trace trace_;
    bool trace_tainted_ = false;
    bool all_hold_ = true;
    std::string violation_invariant_;
    std::vector<std::uint64_t> fired_wakeups_;
    SimStats stats_;
    std::vector<SimEvent> event_log_;
};

// Value-semantics single step per the concurrency contract: the input is
// untouched.
Simulation step(const Simulation& sim);

SimOutput run_simulation(const SimConfig& cfg, const FaultSchedule& faults,
                         const std::optional<ClientWorkload>& client = {},
                         bool record_event_log = false);

}  // namespace loglessraft
