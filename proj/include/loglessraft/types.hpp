#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Core value types shared by the protocol state machine, the invariant
// checkers, the explorer and the simulator. Everything here is a plain
// value: copyable, comparable, hashable. There is no shared mutable state
// anywhere in this library; all operations are functions from values to
// values.

namespace loglessraft {

// Servers are identified by small dense integers drawn from a finite
// universe {0, 1, ..., n-1}. The universe size is bounded so member sets
// can be represented as bitmasks.
using ServerId = std::uint32_t;

inline constexpr std::uint32_t kMaxUniverse = 16;

// A set of servers, used both for configuration member sets and for
// quorums. Bit i set means server i is in the set.
class MemberSet {
public:
    constexpr MemberSet() = default;
    constexpr explicit MemberSet(std::uint32_t mask) : mask_(mask) {}

    static MemberSet of(std::initializer_list<ServerId> ids) {
        MemberSet m;
        for (ServerId id : ids) m.add(id);
        return m;
    }
    static MemberSet from_ids(const std::vector<ServerId>& ids) {
        MemberSet m;
        for (ServerId id : ids) m.add(id);
        return m;
    }
    // The full universe {0, ..., n-1}.
    static MemberSet universe(std::uint32_t n) {
        if (n > kMaxUniverse) throw std::invalid_argument("universe too large");
        return MemberSet(n >= 32 ? ~0u : ((1u << n) - 1u));
    }

    void add(ServerId id) {
        if (id >= kMaxUniverse) throw std::invalid_argument("server id out of range");
        mask_ |= (1u << id);
    }
    void remove(ServerId id) { mask_ &= ~(1u << id); }

    bool contains(ServerId id) const { return (mask_ >> id) & 1u; }
    bool empty() const { return mask_ == 0; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(__builtin_popcount(mask_)); }
    bool subset_of(MemberSet other) const { return (mask_ & ~other.mask_) == 0; }
    MemberSet intersect(MemberSet other) const { return MemberSet(mask_ & other.mask_); }
    MemberSet unite(MemberSet other) const { return MemberSet(mask_ | other.mask_); }
    std::uint32_t mask() const { return mask_; }

    // Member ids in ascending order.
    std::vector<ServerId> ids() const {
        std::vector<ServerId> out;
        out.reserve(size());
        for (std::uint32_t m = mask_; m != 0; m &= m - 1)
            out.push_back(static_cast<ServerId>(__builtin_ctz(m)));
        return out;
    }

    friend bool operator==(MemberSet a, MemberSet b) { return a.mask_ == b.mask_; }
    friend bool operator!=(MemberSet a, MemberSet b) { return a.mask_ != b.mask_; }
    // Total order used for deterministic enumeration: ascending bitmask.
    friend bool operator<(MemberSet a, MemberSet b) { return a.mask_ < b.mask_; }

private:
    std::uint32_t mask_ = 0;
};

enum class Role : std::uint8_t { Primary, Secondary };

inline const char* to_string(Role r) {
    return r == Role::Primary ? "primary" : "secondary";
}

// A configuration: member set plus the (version, term) pair that totally
// orders configurations (term compared first).
struct Config {
    MemberSet members;
    std::uint32_t version = 1;  // >= 1
    std::uint32_t term = 0;

    friend bool operator==(const Config& a, const Config& b) {
        return a.members == b.members && a.version == b.version && a.term == b.term;
    }
    friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }
};

enum class ConfigOrdering : std::uint8_t { Older, Equal, Newer };

// Logs hold only the term in which each entry was created; the position of
// an entry (1-based) is its index.
using Log = std::vector<std::uint32_t>;

// Term of the last log entry, with -1 as the empty-log sentinel.
inline std::int64_t log_last_term(const Log& log) {
    return log.empty() ? -1 : static_cast<std::int64_t>(log.back());
}

struct ServerState {
    std::uint32_t term = 0;
    Role role = Role::Secondary;
    Config config;
    Log log;

    friend bool operator==(const ServerState& a, const ServerState& b) {
        return a.term == b.term && a.role == b.role && a.config == b.config && a.log == b.log;
    }
    friend bool operator!=(const ServerState& a, const ServerState& b) { return !(a == b); }
};

struct CommittedEntry {
    std::uint32_t index = 0;  // 1-based log position
    std::uint32_t term = 0;

    friend bool operator==(CommittedEntry a, CommittedEntry b) {
        return a.index == b.index && a.term == b.term;
    }
    friend bool operator<(CommittedEntry a, CommittedEntry b) {
        return a.index != b.index ? a.index < b.index : a.term < b.term;
    }
};

// Global protocol state: one ServerState per server in the universe plus
// the ghost set of committed (index, term) pairs. `committed` is kept
// sorted so states compare and hash structurally.
struct GlobalState {
    std::vector<ServerState> servers;
    std::vector<CommittedEntry> committed;  // sorted, unique

    std::uint32_t server_count() const { return static_cast<std::uint32_t>(servers.size()); }

    const ServerState& at(ServerId id) const {
        if (id >= servers.size()) throw std::out_of_range("unknown server id");
        return servers[id];
    }
    ServerState& at(ServerId id) {
        if (id >= servers.size()) throw std::out_of_range("unknown server id");
        return servers[id];
    }

    bool has_committed(CommittedEntry e) const {
        for (const auto& c : committed)
            if (c == e) return true;
        return false;
    }
    void add_committed(CommittedEntry e) {
        auto it = committed.begin();
        while (it != committed.end() && *it < e) ++it;
        if (it == committed.end() || !(*it == e)) committed.insert(it, e);
    }

    friend bool operator==(const GlobalState& a, const GlobalState& b) {
        return a.servers == b.servers && a.committed == b.committed;
    }
    friend bool operator!=(const GlobalState& a, const GlobalState& b) { return !(a == b); }
};

// The eight protocol actions, in the order used for deterministic
// enumeration everywhere (explorer, traces, reports).
enum class ActionKind : std::uint8_t {
    Reconfig,
    SendConfig,
    BecomeLeader,
    UpdateTerms,
    ClientRequest,
    GetEntries,
    RollbackEntries,
    CommitEntry,
};

inline const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Reconfig: return "Reconfig";
        case ActionKind::SendConfig: return "SendConfig";
        case ActionKind::BecomeLeader: return "BecomeLeader";
        case ActionKind::UpdateTerms: return "UpdateTerms";
        case ActionKind::ClientRequest: return "ClientRequest";
        case ActionKind::GetEntries: return "GetEntries";
        case ActionKind::RollbackEntries: return "RollbackEntries";
        case ActionKind::CommitEntry: return "CommitEntry";
    }
    return "?";
}

// One protocol step. Which fields are meaningful depends on `kind`:
//   Reconfig:                       actor, members (the new member set)
//   SendConfig / UpdateTerms:       actor (sender), peer (receiver)
//   GetEntries / RollbackEntries:   actor (receiver), peer (sender)
//   BecomeLeader / CommitEntry:     actor, members (the quorum)
//   ClientRequest:                  actor
struct ActionDescriptor {
    ActionKind kind = ActionKind::Reconfig;
    ServerId actor = 0;
    ServerId peer = 0;
    MemberSet members;

    friend bool operator==(const ActionDescriptor& a, const ActionDescriptor& b) {
        return a.kind == b.kind && a.actor == b.actor && a.peer == b.peer &&
               a.members == b.members;
    }
    // Deterministic enumeration order: kind, then actor, then peer, then
    // member-set bitmask.
    friend bool operator<(const ActionDescriptor& a, const ActionDescriptor& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.actor != b.actor) return a.actor < b.actor;
        if (a.peer != b.peer) return a.peer < b.peer;
        return a.members < b.members;
    }
};

std::string to_string(const ActionDescriptor& d);

// Reasons a guarded action can refuse to fire. `Ok` means the guard holds.
enum class Guard : std::uint8_t {
    Ok,
    // Reconfig, reported in this order.
    NotPrimary,
    Q1Failed,
    Q2Failed,
    P1Failed,
    OverlapFailed,
    // SendConfig.
    ReceiverNotSecondary,
    ConfigNotNewer,
    // BecomeLeader.
    NotAQuorum,
    CandidateNotInQuorum,
    VoterHasNewerConfig,
    VoterTermTooHigh,
    VoterLogAhead,
    // UpdateTerms.
    TermNotGreater,
    // GetEntries / RollbackEntries.
    NotSecondary,
    LogCheckFailed,
    CannotRollback,
    // CommitEntry.
    NotReplicatedOnQuorum,
};

const char* to_string(Guard g);

// Result of a pure transition attempt: the guard outcome plus the next
// state. On guard failure `state` equals the input state unchanged.
struct StepResult {
    Guard guard = Guard::Ok;
    GlobalState state;

    bool ok() const { return guard == Guard::Ok; }
};

// Finite-instance bounds in the style of an explicit-state checker's state
// constraint: successors where any server exceeds a bound are discarded.
struct Bounds {
    std::uint32_t server_count = 3;
    std::uint32_t max_term = 2;
    std::uint32_t max_log_len = 1;
    std::uint32_t max_config_version = 2;
    MemberSet m_init;  // defaults to the full universe if left empty

    MemberSet init_members() const {
        return m_init.empty() ? MemberSet::universe(server_count) : m_init;
    }
    void validate() const;
};

}  // namespace loglessraft
