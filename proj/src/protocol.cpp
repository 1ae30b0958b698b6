#include "loglessraft/protocol.hpp"

#include <algorithm>

namespace loglessraft {

const char* to_string(Guard g) {
    switch (g) {
        case Guard::Ok: return "Ok";
        case Guard::NotPrimary: return "NotPrimary";
        case Guard::Q1Failed: return "Q1Failed";
        case Guard::Q2Failed: return "Q2Failed";
        case Guard::P1Failed: return "P1Failed";
        case Guard::OverlapFailed: return "OverlapFailed";
        case Guard::ReceiverNotSecondary: return "ReceiverNotSecondary";
        case Guard::ConfigNotNewer: return "ConfigNotNewer";
        case Guard::NotAQuorum: return "NotAQuorum";
        case Guard::CandidateNotInQuorum: return "CandidateNotInQuorum";
        case Guard::VoterHasNewerConfig: return "VoterHasNewerConfig";
        case Guard::VoterTermTooHigh: return "VoterTermTooHigh";
        case Guard::VoterLogAhead: return "VoterLogAhead";
        case Guard::TermNotGreater: return "TermNotGreater";
        case Guard::NotSecondary: return "NotSecondary";
        case Guard::LogCheckFailed: return "LogCheckFailed";
        case Guard::CannotRollback: return "CannotRollback";
        case Guard::NotReplicatedOnQuorum: return "NotReplicatedOnQuorum";
    }
    return "?";
}

std::string to_string(const ActionDescriptor& d) {
    std::string s = to_string(d.kind);
    s += "(";
    switch (d.kind) {
        case ActionKind::Reconfig:
        case ActionKind::BecomeLeader:
        case ActionKind::CommitEntry: {
            s += std::to_string(d.actor) + ", {";
            bool first = true;
            for (ServerId id : d.members.ids()) {
                if (!first) s += ",";
                s += std::to_string(id);
                first = false;
            }
            s += "}";
            break;
        }
        case ActionKind::ClientRequest:
            s += std::to_string(d.actor);
            break;
        default:
            s += std::to_string(d.actor) + ", " + std::to_string(d.peer);
            break;
    }
    s += ")";
    return s;
}

void Bounds::validate() const {
    if (server_count < 1 || server_count > kMaxUniverse)
        throw std::invalid_argument("server count out of range");
    if (max_config_version < 1)
        throw std::invalid_argument("max config version must be >= 1");
    if (!m_init.empty() && !m_init.subset_of(MemberSet::universe(server_count)))
        throw std::invalid_argument("m_init not within the universe");
}

ConfigOrdering compare_configs(const Config& a, const Config& b) {
    if (a.term != b.term) return a.term < b.term ? ConfigOrdering::Older : ConfigOrdering::Newer;
    if (a.version != b.version)
        return a.version < b.version ? ConfigOrdering::Older : ConfigOrdering::Newer;
    return ConfigOrdering::Equal;
}

bool log_geq(const ServerState& a, const ServerState& b) {
    const std::int64_t ta = log_last_term(a.log);
    const std::int64_t tb = log_last_term(b.log);
    if (ta != tb) return ta > tb;
    return a.log.size() >= b.log.size();
}

bool in_log(const ServerState& s, std::uint32_t index, std::uint32_t term) {
    return index >= 1 && index <= s.log.size() && s.log[index - 1] == term;
}

GlobalState initial_state(std::uint32_t universe_size, MemberSet m_init) {
    if (universe_size < 1 || universe_size > kMaxUniverse)
        throw std::invalid_argument("universe size out of range");
    if (m_init.empty()) throw std::invalid_argument("initial member set must be non-empty");
    if (!m_init.subset_of(MemberSet::universe(universe_size)))
        throw std::invalid_argument("initial member set not within the universe");
    GlobalState g;
    g.servers.resize(universe_size);
    for (auto& s : g.servers) s.config = Config{m_init, 1, 0};
    return g;
}

namespace {

// IsPrefix(a, b): a is no longer than b and matches it elementwise.
bool is_prefix(const Log& a, const Log& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// IsCommitted(index, term, Q): every member of Q has the entry in its log
// and is itself in that term.
bool is_committed_on(const GlobalState& g, std::uint32_t index, std::uint32_t term, MemberSet q) {
    for (ServerId j : q.ids()) {
        const ServerState& s = g.at(j);
        if (!in_log(s, index, term) || s.term != term) return false;
    }
    return true;
}

void require_known(const GlobalState& g, ServerId id) {
    if (id >= g.server_count()) throw std::out_of_range("unknown server id");
}

}  // namespace

// --- Reconfig ----------------------------------------------------------------

Guard reconfig_enabled(const GlobalState& g, ServerId i, MemberSet m_new,
                       const Semantics& sem) {
    require_known(g, i);
    if (m_new.empty()) throw std::invalid_argument("new member set must be non-empty");
    if (!m_new.subset_of(MemberSet::universe(g.server_count())))
        throw std::invalid_argument("new member set not within the universe");

    const ServerState& self = g.at(i);
    if (self.role != Role::Primary) return Guard::NotPrimary;

    const auto qs = quorums(self.config.members);

    if (!sem.drop_q1) {
        bool q1 = false;
        for (MemberSet q : qs) {
            bool all = true;
            for (ServerId j : q.ids()) {
                const Config& cj = g.at(j).config;
                if (cj.version != self.config.version || cj.term != self.config.term) {
                    all = false;
                    break;
                }
            }
            if (all) { q1 = true; break; }
        }
        if (!q1) return Guard::Q1Failed;
    }

    if (!sem.drop_q2) {
        bool q2 = false;
        for (MemberSet q : qs) {
            bool all = true;
            for (ServerId j : q.ids())
                if (g.at(j).term != self.term) { all = false; break; }
            if (all) { q2 = true; break; }
        }
        if (!q2) return Guard::Q2Failed;
    }

    if (!sem.logless && !sem.drop_p1) {
        // P1a: nothing ever committed, or something committed in i's term.
        // P1b: some quorum durably holds every entry committed in i's term.
        std::vector<CommittedEntry> at_term;
        for (const auto& c : g.committed)
            if (c.term == self.term) at_term.push_back(c);
        const bool p1a = g.committed.empty() || !at_term.empty();
        bool p1 = false;
        if (p1a) {
            for (MemberSet q : qs) {
                bool all = true;
                for (const auto& c : at_term)
                    if (!is_committed_on(g, c.index, self.term, q)) { all = false; break; }
                if (all) { p1 = true; break; }
            }
        }
        if (!p1) return Guard::P1Failed;
    }

    if (!quorums_overlap(self.config.members, m_new)) return Guard::OverlapFailed;
    return Guard::Ok;
}

Guard apply_reconfig_inplace(GlobalState& g, ServerId i, MemberSet m_new, const Semantics& sem) {
    Guard guard = reconfig_enabled(g, i, m_new, sem);
    if (guard != Guard::Ok) return guard;
    ServerState& self = g.at(i);
    self.config.members = m_new;
    self.config.version += 1;
    return Guard::Ok;
}

StepResult apply_reconfig(const GlobalState& g, ServerId i, MemberSet m_new,
                          const Semantics& sem) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_reconfig_inplace(r.state, i, m_new, sem);
    return r;
}

// --- SendConfig ----------------------------------------------------------------

Guard send_config_enabled(const GlobalState& g, ServerId i, ServerId j) {
    require_known(g, i);
    require_known(g, j);
    if (g.at(j).role != Role::Secondary) return Guard::ReceiverNotSecondary;
    if (!config_newer(g.at(i).config, g.at(j).config)) return Guard::ConfigNotNewer;
    return Guard::Ok;
}

Guard apply_send_config_inplace(GlobalState& g, ServerId i, ServerId j) {
    Guard guard = send_config_enabled(g, i, j);
    if (guard != Guard::Ok) return guard;
    g.at(j).config = g.at(i).config;
    return Guard::Ok;
}

StepResult apply_send_config(const GlobalState& g, ServerId i, ServerId j) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_send_config_inplace(r.state, i, j);
    return r;
}

// --- BecomeLeader ----------------------------------------------------------------

Guard become_leader_enabled(const GlobalState& g, ServerId i, MemberSet q,
                            const Semantics& sem) {
    require_known(g, i);
    const ServerState& self = g.at(i);
    if (!is_quorum(q, self.config.members)) return Guard::NotAQuorum;
    if (!q.contains(i)) return Guard::CandidateNotInQuorum;
    if (!sem.drop_config_vote_guard) {
        for (ServerId v : q.ids())
            if (!config_geq(self.config, g.at(v).config)) return Guard::VoterHasNewerConfig;
    }
    for (ServerId v : q.ids())
        if (!(self.term + 1 > g.at(v).term)) return Guard::VoterTermTooHigh;
    if (!sem.logless) {
        for (ServerId v : q.ids())
            if (!log_geq(self, g.at(v))) return Guard::VoterLogAhead;
    }
    return Guard::Ok;
}

Guard apply_become_leader_inplace(GlobalState& g, ServerId i, MemberSet q,
                                  const Semantics& sem) {
    Guard guard = become_leader_enabled(g, i, q, sem);
    if (guard != Guard::Ok) return guard;
    const std::uint32_t new_term = g.at(i).term + 1;
    for (ServerId j : q.ids()) {
        ServerState& s = g.at(j);
        s.term = new_term;
        s.role = (j == i) ? Role::Primary : Role::Secondary;
    }
    if (!sem.drop_config_term_rewrite) g.at(i).config.term = new_term;
    return Guard::Ok;
}

StepResult apply_become_leader(const GlobalState& g, ServerId i, MemberSet q,
                               const Semantics& sem) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_become_leader_inplace(r.state, i, q, sem);
    return r;
}

// --- UpdateTerms ----------------------------------------------------------------

Guard update_terms_enabled(const GlobalState& g, ServerId i, ServerId j) {
    require_known(g, i);
    require_known(g, j);
    if (!(g.at(i).term > g.at(j).term)) return Guard::TermNotGreater;
    return Guard::Ok;
}

Guard apply_update_terms_inplace(GlobalState& g, ServerId i, ServerId j) {
    Guard guard = update_terms_enabled(g, i, j);
    if (guard != Guard::Ok) return guard;
    g.at(j).term = g.at(i).term;
    g.at(j).role = Role::Secondary;
    return Guard::Ok;
}

StepResult apply_update_terms(const GlobalState& g, ServerId i, ServerId j) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_update_terms_inplace(r.state, i, j);
    return r;
}

// --- ClientRequest ----------------------------------------------------------------

Guard client_request_enabled(const GlobalState& g, ServerId i) {
    require_known(g, i);
    if (g.at(i).role != Role::Primary) return Guard::NotPrimary;
    return Guard::Ok;
}

Guard apply_client_request_inplace(GlobalState& g, ServerId i) {
    Guard guard = client_request_enabled(g, i);
    if (guard != Guard::Ok) return guard;
    g.at(i).log.push_back(g.at(i).term);
    return Guard::Ok;
}

StepResult apply_client_request(const GlobalState& g, ServerId i) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_client_request_inplace(r.state, i);
    return r;
}

// --- GetEntries ----------------------------------------------------------------

Guard get_entries_enabled(const GlobalState& g, ServerId i, ServerId j) {
    require_known(g, i);
    require_known(g, j);
    const ServerState& self = g.at(i);
    const ServerState& src = g.at(j);
    if (self.role != Role::Secondary) return Guard::NotSecondary;
    // LogCheck: src strictly longer, and either i's log is empty or the
    // entries at i's last index agree.
    const std::size_t len = self.log.size();
    const bool log_check = src.log.size() > len &&
                           (len == 0 || self.log[len - 1] == src.log[len - 1]);
    if (!log_check) return Guard::LogCheckFailed;
    return Guard::Ok;
}

Guard apply_get_entries_inplace(GlobalState& g, ServerId i, ServerId j) {
    Guard guard = get_entries_enabled(g, i, j);
    if (guard != Guard::Ok) return guard;
    g.at(i).log.push_back(g.at(j).log[g.at(i).log.size()]);
    return Guard::Ok;
}

StepResult apply_get_entries(const GlobalState& g, ServerId i, ServerId j) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_get_entries_inplace(r.state, i, j);
    return r;
}

// --- RollbackEntries ----------------------------------------------------------------

Guard rollback_entries_enabled(const GlobalState& g, ServerId i, ServerId j) {
    require_known(g, i);
    require_known(g, j);
    const ServerState& self = g.at(i);
    const ServerState& other = g.at(j);
    if (self.role != Role::Secondary) return Guard::NotSecondary;
    const bool can = log_last_term(self.log) < log_last_term(other.log) &&
                     !is_prefix(self.log, other.log);
    if (!can) return Guard::CannotRollback;
    return Guard::Ok;
}

Guard apply_rollback_entries_inplace(GlobalState& g, ServerId i, ServerId j) {
    Guard guard = rollback_entries_enabled(g, i, j);
    if (guard != Guard::Ok) return guard;
    g.at(i).log.pop_back();
    return Guard::Ok;
}

StepResult apply_rollback_entries(const GlobalState& g, ServerId i, ServerId j) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_rollback_entries_inplace(r.state, i, j);
    return r;
}

// --- CommitEntry ----------------------------------------------------------------

Guard commit_entry_enabled(const GlobalState& g, ServerId i, MemberSet q) {
    require_known(g, i);
    const ServerState& self = g.at(i);
    if (!is_quorum(q, self.config.members)) return Guard::NotAQuorum;
    if (self.role != Role::Primary) return Guard::NotPrimary;
    if (self.log.empty() ||
        !is_committed_on(g, static_cast<std::uint32_t>(self.log.size()), self.term, q))
        return Guard::NotReplicatedOnQuorum;
    return Guard::Ok;
}

Guard apply_commit_entry_inplace(GlobalState& g, ServerId i, MemberSet q) {
    Guard guard = commit_entry_enabled(g, i, q);
    if (guard != Guard::Ok) return guard;
    g.add_committed(CommittedEntry{static_cast<std::uint32_t>(g.at(i).log.size()), g.at(i).term});
    return Guard::Ok;
}

StepResult apply_commit_entry(const GlobalState& g, ServerId i, MemberSet q) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_commit_entry_inplace(r.state, i, q);
    return r;
}

// --- Dispatch ----------------------------------------------------------------

Guard action_enabled(const GlobalState& g, const ActionDescriptor& d, const Semantics& sem) {
    switch (d.kind) {
        case ActionKind::Reconfig: return reconfig_enabled(g, d.actor, d.members, sem);
        case ActionKind::SendConfig: return send_config_enabled(g, d.actor, d.peer);
        case ActionKind::BecomeLeader: return become_leader_enabled(g, d.actor, d.members, sem);
        case ActionKind::UpdateTerms: return update_terms_enabled(g, d.actor, d.peer);
        case ActionKind::ClientRequest: return client_request_enabled(g, d.actor);
        case ActionKind::GetEntries: return get_entries_enabled(g, d.actor, d.peer);
        case ActionKind::RollbackEntries: return rollback_entries_enabled(g, d.actor, d.peer);
        case ActionKind::CommitEntry: return commit_entry_enabled(g, d.actor, d.members);
    }
    throw std::invalid_argument("unknown action kind");
}

Guard apply_action_inplace(GlobalState& g, const ActionDescriptor& d, const Semantics& sem) {
    switch (d.kind) {
        case ActionKind::Reconfig: return apply_reconfig_inplace(g, d.actor, d.members, sem);
        case ActionKind::SendConfig: return apply_send_config_inplace(g, d.actor, d.peer);
        case ActionKind::BecomeLeader:
            return apply_become_leader_inplace(g, d.actor, d.members, sem);
        case ActionKind::UpdateTerms: return apply_update_terms_inplace(g, d.actor, d.peer);
        case ActionKind::ClientRequest: return apply_client_request_inplace(g, d.actor);
        case ActionKind::GetEntries: return apply_get_entries_inplace(g, d.actor, d.peer);
        case ActionKind::RollbackEntries:
            return apply_rollback_entries_inplace(g, d.actor, d.peer);
        case ActionKind::CommitEntry: return apply_commit_entry_inplace(g, d.actor, d.members);
    }
    throw std::invalid_argument("unknown action kind");
}

StepResult apply_action(const GlobalState& g, const ActionDescriptor& d, const Semantics& sem) {
    StepResult r{Guard::Ok, g};
    r.guard = apply_action_inplace(r.state, d, sem);
    return r;
}

// --- Successor enumeration ----------------------------------------------------------------

bool within_bounds(const GlobalState& g, const Bounds& bounds) {
    for (const auto& s : g.servers) {
        if (s.term > bounds.max_term) return false;
        if (s.log.size() > bounds.max_log_len) return false;
        if (s.config.version > bounds.max_config_version) return false;
    }
    return true;
}

std::vector<ActionDescriptor> enabled_transitions(const GlobalState& g, const Bounds& bounds,
                                                  const Semantics& sem) {
    bounds.validate();
    const std::uint32_t n = g.server_count();
    std::vector<ActionDescriptor> out;

    // Keep a descriptor if its guard holds and the successor state stays
    // within bounds (state-constraint semantics: generate, then filter).
    auto consider = [&](const ActionDescriptor& d) {
        GlobalState next = g;
        if (apply_action_inplace(next, d, sem) != Guard::Ok) return;
        if (!within_bounds(next, bounds)) return;
        out.push_back(d);
    };

    const std::uint32_t universe_mask = MemberSet::universe(n).mask();

    for (ServerId i = 0; i < n; ++i)
        for (std::uint32_t m = 1; m <= universe_mask; ++m)
            consider({ActionKind::Reconfig, i, 0, MemberSet(m)});

    for (ServerId i = 0; i < n; ++i)
        for (ServerId j = 0; j < n; ++j)
            if (i != j) consider({ActionKind::SendConfig, i, j, {}});

    for (ServerId i = 0; i < n; ++i)
        for (MemberSet q : quorums(g.at(i).config.members))
            consider({ActionKind::BecomeLeader, i, 0, q});

    for (ServerId i = 0; i < n; ++i)
        for (ServerId j = 0; j < n; ++j)
            if (i != j) consider({ActionKind::UpdateTerms, i, j, {}});

    if (!sem.logless) {
        for (ServerId i = 0; i < n; ++i) consider({ActionKind::ClientRequest, i, 0, {}});

        for (ServerId i = 0; i < n; ++i)
            for (ServerId j = 0; j < n; ++j)
                if (i != j) consider({ActionKind::GetEntries, i, j, {}});

        for (ServerId i = 0; i < n; ++i)
            for (ServerId j = 0; j < n; ++j)
                if (i != j) consider({ActionKind::RollbackEntries, i, j, {}});

        for (ServerId i = 0; i < n; ++i)
            for (MemberSet q : quorums(g.at(i).config.members))
                consider({ActionKind::CommitEntry, i, 0, q});
    }
    return out;
}

}  // namespace loglessraft
