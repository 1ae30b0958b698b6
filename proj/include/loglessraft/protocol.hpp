#pragma once

#include "loglessraft/quorum.hpp"
#include "loglessraft/types.hpp"

// The protocol state machine: deterministic guarded transitions over
// GlobalState. Transitions come in three flavours sharing one guard path:
//
//   *_enabled(g, ...)   -> Guard      guard evaluation only, no copies
//   apply_*_inplace(&g) -> Guard      mutates g iff the guard holds
//   apply_*(g, ...)     -> StepResult value-semantics: next state or the
//                                     unchanged input on guard failure
//
// Domain errors (empty member sets, unknown server ids) throw; guard
// failures are values.

namespace loglessraft {

// Which guards participate. The default is the real protocol. The logless
// subprotocol drops the log-derived guards (the voter log check and the
// oplog-commitment precondition) along with the four log actions. The
// drop_* toggles individually disable load-bearing guards; they exist so
// the checker can be shown to find the bugs each guard prevents, and are
// only reachable from test/tool builds.
struct Semantics {
    bool logless = false;
    bool drop_q1 = false;
    bool drop_q2 = false;
    bool drop_p1 = false;
    bool drop_config_vote_guard = false;   // BecomeLeader: voters' config <= candidate's
    bool drop_config_term_rewrite = false; // BecomeLeader: configTerm := new term

    friend bool operator==(const Semantics& a, const Semantics& b) {
        return a.logless == b.logless && a.drop_q1 == b.drop_q1 && a.drop_q2 == b.drop_q2 &&
               a.drop_p1 == b.drop_p1 && a.drop_config_vote_guard == b.drop_config_vote_guard &&
               a.drop_config_term_rewrite == b.drop_config_term_rewrite;
    }
};

// Total order on configurations by (term, version), term compared first.
// Member sets are ignored.
ConfigOrdering compare_configs(const Config& a, const Config& b);

inline bool config_newer(const Config& a, const Config& b) {
    return compare_configs(a, b) == ConfigOrdering::Newer;
}
inline bool config_geq(const Config& a, const Config& b) {
    return compare_configs(a, b) != ConfigOrdering::Older;
}

// Log comparison used by elections: last-entry term first, then length.
// An empty log has sentinel last term -1.
bool log_geq(const ServerState& a, const ServerState& b);

// True iff the entry (index, term) is in s's log (1-based index).
bool in_log(const ServerState& s, std::uint32_t index, std::uint32_t term);

// All servers start as secondaries in term 0 with config (m_init, 1, 0)
// and empty logs; nothing is committed.
GlobalState initial_state(std::uint32_t universe_size, MemberSet m_init);

// --- Reconfig(i, m_new) ----------------------------------------------------

// Guard failures are reported in a fixed order: NotPrimary, Q1, Q2, P1,
// Overlap. Q1: some quorum of i's member set shares i's (version, term).
// Q2: some quorum shares i's term. P1: some quorum durably holds every
// entry committed in i's term (vacuous when nothing was ever committed,
// otherwise requires a commit in i's own term to exist).
Guard reconfig_enabled(const GlobalState& g, ServerId i, MemberSet m_new,
                       const Semantics& sem = {});
Guard apply_reconfig_inplace(GlobalState& g, ServerId i, MemberSet m_new,
                             const Semantics& sem = {});
StepResult apply_reconfig(const GlobalState& g, ServerId i, MemberSet m_new,
                          const Semantics& sem = {});

// --- SendConfig(i, j): j adopts i's strictly newer config ------------------

Guard send_config_enabled(const GlobalState& g, ServerId i, ServerId j);
Guard apply_send_config_inplace(GlobalState& g, ServerId i, ServerId j);
StepResult apply_send_config(const GlobalState& g, ServerId i, ServerId j);

// --- BecomeLeader(i, q): i elected by voter quorum q ------------------------

Guard become_leader_enabled(const GlobalState& g, ServerId i, MemberSet q,
                            const Semantics& sem = {});
Guard apply_become_leader_inplace(GlobalState& g, ServerId i, MemberSet q,
                                  const Semantics& sem = {});
StepResult apply_become_leader(const GlobalState& g, ServerId i, MemberSet q,
                               const Semantics& sem = {});

// --- UpdateTerms(i, j): j learns i's higher term and steps down -------------

Guard update_terms_enabled(const GlobalState& g, ServerId i, ServerId j);
Guard apply_update_terms_inplace(GlobalState& g, ServerId i, ServerId j);
StepResult apply_update_terms(const GlobalState& g, ServerId i, ServerId j);

// --- ClientRequest(i): primary appends an entry in its term -----------------

Guard client_request_enabled(const GlobalState& g, ServerId i);
Guard apply_client_request_inplace(GlobalState& g, ServerId i);
StepResult apply_client_request(const GlobalState& g, ServerId i);

// --- GetEntries(i, j): secondary i pulls j's next entry ---------------------

Guard get_entries_enabled(const GlobalState& g, ServerId i, ServerId j);
Guard apply_get_entries_inplace(GlobalState& g, ServerId i, ServerId j);
StepResult apply_get_entries(const GlobalState& g, ServerId i, ServerId j);

// --- RollbackEntries(i, j): secondary i truncates its divergent last entry --

Guard rollback_entries_enabled(const GlobalState& g, ServerId i, ServerId j);
Guard apply_rollback_entries_inplace(GlobalState& g, ServerId i, ServerId j);
StepResult apply_rollback_entries(const GlobalState& g, ServerId i, ServerId j);

// --- CommitEntry(i, q): i's last entry is durable on quorum q ---------------

Guard commit_entry_enabled(const GlobalState& g, ServerId i, MemberSet q);
Guard apply_commit_entry_inplace(GlobalState& g, ServerId i, MemberSet q);
StepResult apply_commit_entry(const GlobalState& g, ServerId i, MemberSet q);

// --- Generic dispatch --------------------------------------------------------

Guard action_enabled(const GlobalState& g, const ActionDescriptor& d,
                     const Semantics& sem = {});
Guard apply_action_inplace(GlobalState& g, const ActionDescriptor& d,
                           const Semantics& sem = {});
StepResult apply_action(const GlobalState& g, const ActionDescriptor& d,
                        const Semantics& sem = {});

// Every descriptor whose guard holds in g and whose successor stays within
// `bounds`, in deterministic order (kind, then actor, then peer, then
// member-set mask). Reconfig arguments range over all non-empty subsets of
// the universe; quorum arguments over quorums of the actor's member set.
std::vector<ActionDescriptor> enabled_transitions(const GlobalState& g, const Bounds& bounds,
                                                  const Semantics& sem = {});

// True iff every server of g respects the term / log length / config
// version bounds.
bool within_bounds(const GlobalState& g, const Bounds& bounds);

}  // namespace loglessraft
