#include "loglessraft/simnet.hpp"

#include <algorithm>

#include "loglessraft/invariants.hpp"

namespace loglessraft {

using namespace sim_detail;

void SimConfig::validate() const {
    if (universe < 1 || universe > kMaxUniverse)
        throw std::invalid_argument("universe size out of range");
    if (!m_init.empty() && !m_init.subset_of(MemberSet::universe(universe)))
        throw std::invalid_argument("m_init not within the universe");
    if (election_timeout_min_ms > election_timeout_max_ms ||
        message_delay_min_ms > message_delay_max_ms)
        throw std::invalid_argument("min delay above max delay");
    if (duration_ms == 0) throw std::invalid_argument("duration must be positive");
    if (heartbeat_interval_ms == 0) throw std::invalid_argument("heartbeat interval must be positive");
}

Simulation::Simulation(const SimConfig& cfg, FaultSchedule faults,
                       std::optional<ClientWorkload> client, bool record_event_log)
    : cfg_(cfg),
      faults_(std::move(faults)),
      client_(std::move(client)),
      record_event_log_(record_event_log),
      rng_(cfg.seed) {
    cfg_.validate();
    for (const auto& w : faults_)
        if (w.end_ms < w.start_ms) throw std::invalid_argument("malformed fault window");

    state_ = initial_state(cfg_.universe, cfg_.init_members());
    nodes_.resize(cfg_.universe);
    trace_.init = state_;

    for (ServerId n = 0; n < cfg_.universe; ++n) {
        push_event({0, 0, EventType::HeartbeatTick, n, {}, 0});
        push_event({cfg_.heartbeat_interval_ms, 0, EventType::PullTick, n, {}, 0});
    }
    // Node 0 gets the shortest initial timeout so startup converges on a
    // first leader quickly; later elections are fully randomized.
    for (ServerId n = 0; n < cfg_.universe; ++n) {
        const std::uint64_t deadline =
            n == 0 ? cfg_.election_timeout_min_ms : draw_election_timeout();
        nodes_[n].election_deadline = deadline;
        push_event({deadline, 0, EventType::ElectionTimeout, n, {}, deadline});
    }
    if (client_) {
        // Writes whose write-concern window would cross the end of the run
        // are not issued.
        std::uint64_t id = 0;
        for (std::uint64_t t = client_->start_ms; t + client_->timeout_ms <= cfg_.duration_ms;
             t += client_->period_ms) {
            push_event({t, 0, EventType::WriteIssue, 0, {}, id});
            push_event({t + client_->timeout_ms, 0, EventType::WriteTimeout, 0, {}, id});
            writes_.push_back(WriteOp{t, 0, 0, false, false});
            ++id;
        }
    }
}

void Simulation::push_event(Event ev) {
    ev.seq = ++seq_;
    queue_.push_back(std::move(ev));
    std::push_heap(queue_.begin(), queue_.end(), std::greater<>{});
}

bool Simulation::has_pending() const {
    return !queue_.empty() && queue_.front().time_ms <= cfg_.duration_ms;
}

std::uint64_t Simulation::next_event_time() const {
    if (queue_.empty()) throw std::runtime_error("NoMoreEvents");
    return queue_.front().time_ms;
}

void Simulation::step_inplace() {
    if (!has_pending()) throw std::runtime_error("NoMoreEvents");
    fired_wakeups_.clear();
    std::pop_heap(queue_.begin(), queue_.end(), std::greater<>{});
    Event ev = std::move(queue_.back());
    queue_.pop_back();
    now_ = ev.time_ms;
    ++stats_.events_processed;
    handle(ev);
}

std::optional<ServerId> Simulation::current_primary() const {
    std::optional<ServerId> best;
    for (ServerId i = 0; i < state_.server_count(); ++i) {
        if (state_.at(i).role != Role::Primary) continue;
        if (!best || state_.at(i).term > state_.at(*best).term) best = i;
    }
    return best;
}

void Simulation::schedule_wakeup(std::uint64_t time_ms, std::uint64_t tag) {
    push_event({time_ms, 0, EventType::Wakeup, 0, {}, tag});
}

void Simulation::add_fault(const FaultWindow& w) {
    if (w.end_ms < w.start_ms) throw std::invalid_argument("malformed fault window");
    faults_.push_back(w);
}

bool Simulation::is_paused(ServerId node, std::uint64_t at_ms) const {
    for (const auto& w : faults_)
        if (w.kind == FaultKind::PauseReplication && w.affected.contains(node) &&
            at_ms >= w.start_ms && at_ms < w.end_ms)
            return true;
    return false;
}

std::uint64_t Simulation::pause_end(ServerId node, std::uint64_t at_ms) const {
    std::uint64_t end = at_ms;
    for (const auto& w : faults_)
        if (w.kind == FaultKind::PauseReplication && w.affected.contains(node) &&
            at_ms >= w.start_ms && at_ms < w.end_ms)
            end = std::max(end, w.end_ms);
    return end;
}

bool Simulation::commit_covers(std::uint32_t index, std::uint32_t term) const {
    for (const auto& c : state_.committed)
        if (c.term == term && c.index >= index) return true;
    return false;
}

Trace Simulation::abstract_trace() const {
    if (trace_tainted_)
        throw std::logic_error("abstract trace unavailable: non-protocol config changes");
    return trace_;
}

std::uint64_t Simulation::draw_delay() {
    return rng_.bounded(cfg_.message_delay_min_ms, cfg_.message_delay_max_ms);
}

std::uint64_t Simulation::draw_election_timeout() {
    return rng_.bounded(cfg_.election_timeout_min_ms, cfg_.election_timeout_max_ms);
}

void Simulation::arm_election_timer(ServerId node) {
    const std::uint64_t deadline = now_ + draw_election_timeout();
    nodes_[node].election_deadline = deadline;
    push_event({deadline, 0, EventType::ElectionTimeout, node, {}, deadline});
}

void Simulation::send(ServerId from, ServerId to, Payload payload) {
    ++stats_.messages_sent;
    Event ev;
    ev.time_ms = now_ + draw_delay();
    ev.type = EventType::MessageArrival;
    ev.msg = Message{from, to, std::move(payload)};
    push_event(std::move(ev));
}

void Simulation::log_event(const char* kind, std::string details) {
    if (record_event_log_) event_log_.push_back(SimEvent{now_, kind, std::move(details)});
}

Guard Simulation::apply_abstract(const ActionDescriptor& d) {
    Guard guard = apply_action_inplace(state_, d);
    if (guard != Guard::Ok) return guard;
    trace_.steps.push_back(d);
    log_event("action", to_string(d));
    observer_check();
    // A primary announces fresh appends to its members so they chase the
    // tip without waiting out the idle pull interval.
    if (d.kind == ActionKind::ClientRequest) {
        const ServerState& p = state_.at(d.actor);
        for (ServerId j : p.config.members.ids())
            if (j != d.actor)
                send(d.actor, j,
                     EntriesPush{p.log.back(), static_cast<std::uint32_t>(p.log.size())});
    }
    return Guard::Ok;
}

Guard Simulation::try_action(const ActionDescriptor& d) { return apply_abstract(d); }

void Simulation::force_config(ServerId i, MemberSet members) {
    ServerState& s = state_.at(i);
    s.config.members = members;
    s.config.version += 1;
    trace_tainted_ = true;
    log_event("force-config", to_string(ActionDescriptor{ActionKind::Reconfig, i, 0, members}));
    observer_check();
}

void Simulation::observer_check() {
    if (!all_hold_) return;
    InvariantReport es = election_safety(state_);
    if (!es.holds) {
        all_hold_ = false;
        violation_invariant_ = es.name;
        return;
    }
    InvariantReport lc = leader_completeness(state_);
    if (!lc.holds) {
        all_hold_ = false;
        violation_invariant_ = lc.name;
    }
}

void Simulation::on_leader_elected(ServerId leader) {
    ++stats_.elections_won;
    nodes_[leader].election_active = false;
    nodes_[leader].known_leader = leader;
    const std::uint32_t term = state_.at(leader).term;
    // Every write acknowledged at majority concern must already be in the
    // log of a leader elected at a higher term.
    for (const auto& [index, wterm] : acked_) {
        if (wterm < term && !in_log(state_.at(leader), index, wterm)) {
            all_hold_ = false;
            violation_invariant_ = "acknowledged-write-durability";
            return;
        }
    }
    // Announce immediately instead of waiting out the heartbeat interval.
    for (ServerId j = 0; j < state_.server_count(); ++j) {
        if (j == leader) continue;
        send(leader, j, TermUpdate{term});
        const Config& c = state_.at(leader).config;
        send(leader, j, Heartbeat{term, c.version, c.term});
    }
}

void Simulation::try_commit(ServerId primary) {
    const ServerState& p = state_.at(primary);
    if (p.role != Role::Primary || p.log.empty() || p.log.back() != p.term) return;
    const std::uint32_t tip = static_cast<std::uint32_t>(p.log.size());
    if (state_.has_committed({tip, p.term})) return;
    for (MemberSet q : quorums(p.config.members)) {
        if (commit_entry_enabled(state_, primary, q) != Guard::Ok) continue;
        if (apply_abstract({ActionKind::CommitEntry, primary, 0, q}) == Guard::Ok) {
            ++stats_.commit_actions;
            resolve_commits();
        }
        return;
    }
}

void Simulation::resolve_commits() {
    for (std::size_t id = 0; id < writes_.size(); ++id) {
        WriteOp& w = writes_[id];
        if (w.resolved || !w.appended) continue;
        if (!commit_covers(w.index, w.term)) continue;
        w.resolved = true;
        const std::uint64_t elapsed = now_ - w.issued_at;
        if (client_ && elapsed >= client_->timeout_ms) {
            records_.push_back({w.issued_at, client_->timeout_ms, WriteOutcome::Timeout});
            ++stats_.writes_timed_out;
        } else {
            records_.push_back({w.issued_at, elapsed, WriteOutcome::Committed});
            ++stats_.writes_committed;
            acked_.emplace_back(w.index, w.term);
        }
    }
}

void Simulation::handle(const Event& ev) {
    switch (ev.type) {
        case EventType::MessageArrival:
            handle_message(ev);
            break;
        case EventType::ElectionTimeout:
            handle_election_timeout(ev);
            break;
        case EventType::HeartbeatTick: {
            const ServerId n = ev.node;
            const ServerState& s = state_.at(n);
            for (ServerId j = 0; j < state_.server_count(); ++j)
                if (j != n) send(n, j, Heartbeat{s.term, s.config.version, s.config.term});
            push_event({now_ + cfg_.heartbeat_interval_ms, 0, EventType::HeartbeatTick, n, {}, 0});
            break;
        }
        case EventType::PullTick:
            handle_pull_tick(ev.node);
            break;
        case EventType::WriteIssue:
            handle_write_issue(ev.id);
            break;
        case EventType::WriteTimeout:
            handle_write_timeout(ev.id);
            break;
        case EventType::Wakeup:
            fired_wakeups_.push_back(ev.id);
            log_event("wakeup", std::to_string(ev.id));
            break;
    }
}

void Simulation::handle_message(const Event& ev) {
    const Message& m = ev.msg;
    // Replication traffic at a paused node is deferred to the end of the
    // pause window; everything else flows.
    const bool replication = std::holds_alternative<EntriesPull>(m.payload) ||
                             std::holds_alternative<EntriesPush>(m.payload);
    if (replication && is_paused(m.to, now_)) {
        ++stats_.deferred_events;
        Event deferred = ev;
        deferred.time_ms = pause_end(m.to, now_);
        push_event(std::move(deferred));
        return;
    }
    ++stats_.messages_delivered;
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, Heartbeat>)
                handle_heartbeat(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, ConfigTransfer>)
                handle_config_transfer(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, VoteRequest>)
                handle_vote_request(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, VoteResponse>)
                handle_vote_response(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, EntriesPull>)
                handle_entries_pull(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, EntriesPush>)
                handle_entries_push(m.from, m.to, payload);
            else if constexpr (std::is_same_v<T, TermUpdate>)
                handle_term_update(m.from, m.to, payload);
        },
        m.payload);
}

void Simulation::handle_heartbeat(ServerId from, ServerId to, const Heartbeat& hb) {
    if (hb.term > state_.at(to).term) {
        if (apply_abstract({ActionKind::UpdateTerms, from, to, {}}) == Guard::Ok)
            ++stats_.term_updates;
    }
    // Config advertisement: a secondary seeing a newer (version, term) asks
    // for the config by sending its own for comparison.
    const Config advertised{MemberSet(), hb.config_version, hb.config_term};
    if (state_.at(to).role == Role::Secondary &&
        config_newer(advertised, state_.at(to).config))
        send(to, from, ConfigTransfer{state_.at(to).config});
    // Leader liveness: a heartbeat from a live primary in a term at least
    // ours suppresses elections.
    if (state_.at(from).role == Role::Primary && state_.at(from).term >= state_.at(to).term) {
        nodes_[to].known_leader = from;
        arm_election_timer(to);
    }
}

void Simulation::handle_config_transfer(ServerId from, ServerId to, const ConfigTransfer& ct) {
    const Config& mine = state_.at(to).config;
    if (config_newer(ct.config, mine)) {
        // Verify the sender's config is still newer on receipt, then adopt.
        if (state_.at(to).role == Role::Secondary &&
            apply_abstract({ActionKind::SendConfig, from, to, {}}) == Guard::Ok)
            ++stats_.config_adoptions;
    } else if (config_newer(mine, ct.config)) {
        send(to, from, ConfigTransfer{mine});
    }
}

void Simulation::handle_vote_request(ServerId from, ServerId to, const VoteRequest& vr) {
    // The payload decides the vote; election safety itself rests on the
    // atomic guard re-check when the candidate processes the final grant,
    // so no per-voter promise bookkeeping is needed.
    const ServerState& me = state_.at(to);
    const Config candidate_config{MemberSet(), vr.config_version, vr.config_term};
    const std::int64_t my_last = log_last_term(me.log);
    const bool log_ok = vr.last_log_term > my_last ||
                        (vr.last_log_term == my_last && vr.log_len >= me.log.size());
    const bool grant =
        vr.proposed_term > me.term && config_geq(candidate_config, me.config) && log_ok;
    if (grant)
        send(to, from, VoteResponse{true, vr.proposed_term});
    else
        send(to, from, VoteResponse{false, me.term});
}

void Simulation::handle_vote_response(ServerId from, ServerId to, const VoteResponse& vr) {
    NodeRuntime& cand = nodes_[to];
    if (!cand.election_active) return;
    if (vr.granted && vr.term == cand.election_proposed) {
        cand.votes.add(from);
        const MemberSet q = cand.votes.intersect(state_.at(to).config.members);
        if (is_quorum(q, state_.at(to).config.members)) {
            if (apply_abstract({ActionKind::BecomeLeader, to, 0, q}) == Guard::Ok)
                on_leader_elected(to);
            else
                cand.election_active = false;  // promises went stale; retry later
        }
    } else if (!vr.granted) {
        if (vr.term > state_.at(to).term &&
            apply_abstract({ActionKind::UpdateTerms, from, to, {}}) == Guard::Ok)
            ++stats_.term_updates;
        cand.election_active = false;
    }
}

void Simulation::handle_election_timeout(const Event& ev) {
    const ServerId n = ev.node;
    if (ev.id != nodes_[n].election_deadline) return;  // superseded
    arm_election_timer(n);
    const ServerState& me = state_.at(n);
    if (me.role == Role::Primary) return;
    if (!me.config.members.contains(n)) return;  // non-members cannot win
    NodeRuntime& rt = nodes_[n];
    rt.election_active = true;
    rt.election_proposed = me.term + 1;
    rt.votes = MemberSet::of({n});
    ++stats_.elections_started;
    log_event("election-start", std::to_string(n) + " term " + std::to_string(rt.election_proposed));
    if (is_quorum(rt.votes, me.config.members)) {
        if (apply_abstract({ActionKind::BecomeLeader, n, 0, rt.votes}) == Guard::Ok)
            on_leader_elected(n);
        else
            rt.election_active = false;
        return;
    }
    for (ServerId v : me.config.members.ids()) {
        if (v == n) continue;
        send(n, v,
             VoteRequest{rt.election_proposed, log_last_term(me.log),
                         static_cast<std::uint32_t>(me.log.size()), me.config.version,
                         me.config.term});
    }
}

void Simulation::handle_pull_tick(ServerId node) {
    if (is_paused(node, now_)) {
        ++stats_.deferred_events;
        push_event({pause_end(node, now_), 0, EventType::PullTick, node, {}, 0});
        return;
    }
    if (nodes_[node].pull_inflight) return;
    if (state_.at(node).role == Role::Primary) {
        push_event({now_ + cfg_.heartbeat_interval_ms, 0, EventType::PullTick, node, {}, 0});
        return;
    }
    issue_pull(node);
}

void Simulation::issue_pull(ServerId node) {
    ServerId source = node;  // self acts as the "no source" sentinel
    if (nodes_[node].known_leader && *nodes_[node].known_leader != node)
        source = *nodes_[node].known_leader;
    if (source == node) {
        for (ServerId j : state_.at(node).config.members.ids())
            if (j != node) { source = j; break; }
    }
    if (source == node) {
        nodes_[node].pull_inflight = false;
        push_event({now_ + cfg_.heartbeat_interval_ms, 0, EventType::PullTick, node, {}, 0});
        return;
    }
    nodes_[node].pull_inflight = true;
    const Log& log = state_.at(node).log;
    send(node, source,
         EntriesPull{static_cast<std::uint32_t>(log.size()), log_last_term(log)});
}

void Simulation::handle_entries_pull(ServerId from, ServerId to, const EntriesPull& ep) {
    // A pull doubles as a replication acknowledgment: the puller's position
    // is exactly what commitment needs to learn.
    if (state_.at(to).role == Role::Primary) try_commit(to);
    const Log& log = state_.at(to).log;
    const bool can_serve = log.size() > ep.log_len &&
                           (ep.log_len == 0 ||
                            static_cast<std::int64_t>(log[ep.log_len - 1]) == ep.last_term);
    if (can_serve)
        send(to, from, EntriesPush{log[ep.log_len], ep.log_len + 1});
    else
        send(to, from, EntriesPush{0, 0});  // nothing to send at that position
}

void Simulation::handle_entries_push(ServerId from, ServerId to, const EntriesPush&) {
    nodes_[to].pull_inflight = false;
    if (apply_abstract({ActionKind::GetEntries, to, from, {}}) == Guard::Ok) {
        ++stats_.entries_appended;
        issue_pull(to);  // chain: ack the entry and fetch the next
        return;
    }
    if (apply_abstract({ActionKind::RollbackEntries, to, from, {}}) == Guard::Ok) {
        ++stats_.entries_rolled_back;
        issue_pull(to);
        return;
    }
    // Up to date (or diverged with nothing to do): idle until the next tick.
    push_event({now_ + cfg_.heartbeat_interval_ms, 0, EventType::PullTick, to, {}, 0});
}

void Simulation::handle_term_update(ServerId from, ServerId to, const TermUpdate& tu) {
    if (tu.term > state_.at(to).term) {
        if (apply_abstract({ActionKind::UpdateTerms, from, to, {}}) == Guard::Ok)
            ++stats_.term_updates;
    }
}

void Simulation::handle_write_issue(std::uint64_t write_id) {
    ++stats_.writes_issued;
    WriteOp& w = writes_[write_id];
    auto primary = current_primary();
    if (!primary) return;  // no leader: the write will time out
    if (apply_abstract({ActionKind::ClientRequest, *primary, 0, {}}) != Guard::Ok) return;
    ++stats_.entries_appended;
    w.appended = true;
    w.index = static_cast<std::uint32_t>(state_.at(*primary).log.size());
    w.term = state_.at(*primary).term;
    try_commit(*primary);
}

void Simulation::handle_write_timeout(std::uint64_t write_id) {
    WriteOp& w = writes_[write_id];
    if (w.resolved) return;
    w.resolved = true;
    records_.push_back({w.issued_at, client_ ? client_->timeout_ms : 0, WriteOutcome::Timeout});
    ++stats_.writes_timed_out;
}

void Simulation::run() {
    while (has_pending() && !violation()) step_inplace();
    // Writes still unresolved when the run ends count as timeouts.
    for (auto& w : writes_) {
        if (w.resolved) continue;
        w.resolved = true;
        records_.push_back({w.issued_at, client_ ? client_->timeout_ms : 0, WriteOutcome::Timeout});
        ++stats_.writes_timed_out;
    }
    std::sort(records_.begin(), records_.end(),
              [](const LatencyRecord& a, const LatencyRecord& b) {
                  return a.issued_at_ms < b.issued_at_ms;
              });
}

std::string Simulation::debug_summary() const {
    std::string s = "t=" + std::to_string(now_) + " seq=" + std::to_string(seq_) +
                    " pending=" + std::to_string(queue_.size());
    if (!queue_.empty())
        s += " next=(" + std::to_string(queue_.front().time_ms) + "," +
             std::to_string(queue_.front().seq) + ")";
    s += " actions=" + std::to_string(trace_.steps.size());
    s += " committed=" + std::to_string(state_.committed.size());
    for (const auto& srv : state_.servers) {
        s += " [" + std::to_string(srv.term) + (srv.role == Role::Primary ? "P" : "S") +
             " v" + std::to_string(srv.config.version) + "t" + std::to_string(srv.config.term) +
             " l" + std::to_string(srv.log.size()) + "]";
    }
    return s;
}

Simulation step(const Simulation& sim) {
    Simulation next = sim;
    next.step_inplace();
    return next;
}

SimOutput run_simulation(const SimConfig& cfg, const FaultSchedule& faults,
                         const std::optional<ClientWorkload>& client, bool record_event_log) {
    Simulation sim(cfg, faults, client, record_event_log);
    sim.run();
    SimOutput out;
    out.records = sim.records();
    out.stats = sim.stats();
    out.all_hold = !sim.violation();
    out.violation_invariant = sim.violation_invariant();
    if (!sim.trace_tainted()) out.trace = sim.abstract_trace();
    out.event_log = sim.event_log();
    return out;
}

}  // namespace loglessraft
