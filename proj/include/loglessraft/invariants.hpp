#pragma once

#include <optional>

#include "loglessraft/protocol.hpp"

// Executable safety checkers. Each checker is the direct transcription of
// a quantified property, evaluated by enumeration over servers, log
// indexes, quorums and committed entries. None of them is optimized; any
// faster variant elsewhere must be differentially tested against these.

namespace loglessraft {

// First violating assignment found, in deterministic enumeration order.
struct Witness {
    std::vector<ServerId> servers;
    std::optional<CommittedEntry> entry;
    std::optional<std::uint32_t> index;  // 1-based log index
    std::optional<MemberSet> quorum;
    std::string note;
};

struct InvariantReport {
    std::string name;
    bool holds = true;
    std::vector<Witness> witnesses;  // empty iff holds
};

// Deactivated config: every quorum of c contains some server holding a
// strictly newer config. Active is the negation.
bool is_deactivated(const GlobalState& g, const Config& c);

// Servers whose current config is active.
MemberSet active_config_set(const GlobalState& g);

// No two distinct servers are primary in the same term.
InvariantReport election_safety(const GlobalState& g);

// Every entry committed in a term below a primary's is in that primary's log.
InvariantReport leader_completeness(const GlobalState& g);

// Matching entry terms at an index imply equal prefixes up to it.
InvariantReport log_matching(const GlobalState& g);

// The thirteen auxiliary state lemmas, one report per lemma, in a fixed
// order. Names are the kebab-case ids listed by invariant_names().
std::vector<InvariantReport> state_lemma_suite(const GlobalState& g);

// Per-transition lemmas over a (pre, post) pair one action apart:
// per-server config monotonicity, and stability of deactivation for every
// config held by some server in pre.
std::vector<InvariantReport> transition_lemma_suite(const GlobalState& pre,
                                                    const GlobalState& post);

// Registry ------------------------------------------------------------------

// All state-invariant names in canonical order: election-safety,
// leader-completeness, log-matching, then the thirteen lemmas.
const std::vector<std::string>& state_invariant_names();

// Transition lemma names: configs-monotonic, deactivation-stability.
const std::vector<std::string>& transition_invariant_names();

// Run one state invariant by name. Throws std::invalid_argument for an
// unknown name.
InvariantReport check_state_invariant(const std::string& name, const GlobalState& g);

// Run one transition invariant by name.
InvariantReport check_transition_invariant(const std::string& name, const GlobalState& pre,
                                           const GlobalState& post);

}  // namespace loglessraft
