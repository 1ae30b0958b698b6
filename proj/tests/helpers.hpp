#pragma once

#include <doctest.h>

#include "loglessraft/explorer.hpp"
#include "loglessraft/rng.hpp"

// Shared test scaffolding: compact state builders and generators for
// property tests. Generators are hand-rolled and seeded so failures are
// reproducible from the seed alone.

namespace loglessraft::testing {

inline MemberSet ms(std::initializer_list<ServerId> ids) { return MemberSet::of(ids); }

// A universe of n servers, all holding config (members, 1, 0).
inline GlobalState fresh(std::uint32_t n, MemberSet members) {
    return initial_state(n, members);
}
inline GlobalState fresh(std::uint32_t n) { return initial_state(n, MemberSet::universe(n)); }

struct ServerSpec {
    std::uint32_t term = 0;
    Role role = Role::Secondary;
    Config config;
    Log log;
};

inline GlobalState build(std::vector<ServerSpec> specs,
                         std::vector<CommittedEntry> committed = {}) {
    GlobalState g;
    for (auto& sp : specs) {
        ServerState s;
        s.term = sp.term;
        s.role = sp.role;
        s.config = sp.config;
        s.log = sp.log;
        g.servers.push_back(std::move(s));
    }
    for (auto c : committed) g.add_committed(c);
    return g;
}

// Arbitrary (not necessarily reachable) states, for guard-totality and
// frame-condition properties.
inline GlobalState arbitrary_state(SplitMix64& rng, std::uint32_t n) {
    GlobalState g;
    for (std::uint32_t i = 0; i < n; ++i) {
        ServerState s;
        s.term = static_cast<std::uint32_t>(rng.bounded(0, 3));
        s.role = rng.bounded(0, 3) == 0 ? Role::Primary : Role::Secondary;
        s.config.members = MemberSet(
            static_cast<std::uint32_t>(rng.bounded(1, MemberSet::universe(n).mask())));
        s.config.version = static_cast<std::uint32_t>(rng.bounded(1, 3));
        s.config.term = static_cast<std::uint32_t>(rng.bounded(0, 3));
        const std::uint32_t len = static_cast<std::uint32_t>(rng.bounded(0, 3));
        for (std::uint32_t k = 0; k < len; ++k)
            s.log.push_back(static_cast<std::uint32_t>(rng.bounded(1, 3)));
        g.servers.push_back(std::move(s));
    }
    const std::uint32_t ncommit = static_cast<std::uint32_t>(rng.bounded(0, 2));
    for (std::uint32_t k = 0; k < ncommit; ++k)
        g.add_committed({static_cast<std::uint32_t>(rng.bounded(1, 3)),
                         static_cast<std::uint32_t>(rng.bounded(1, 3))});
    return g;
}

// A reachable state: a seeded random walk from the initial state.
inline GlobalState reachable_state(SplitMix64& rng, const Bounds& bounds, std::uint32_t steps,
                                   const Semantics& sem = {}) {
    GlobalState g = initial_state(bounds.server_count, bounds.init_members());
    for (std::uint32_t k = 0; k < steps; ++k) {
        auto enabled = enabled_transitions(g, bounds, sem);
        if (enabled.empty()) break;
        apply_action_inplace(g, enabled[rng.bounded(0, enabled.size() - 1)], sem);
    }
    return g;
}

// All descriptor shapes over n servers, for exhaustive-ish sweeps.
inline std::vector<ActionDescriptor> all_descriptors(std::uint32_t n) {
    std::vector<ActionDescriptor> out;
    const std::uint32_t um = MemberSet::universe(n).mask();
    for (ServerId i = 0; i < n; ++i) {
        for (std::uint32_t m = 1; m <= um; ++m) {
            out.push_back({ActionKind::Reconfig, i, 0, MemberSet(m)});
            out.push_back({ActionKind::BecomeLeader, i, 0, MemberSet(m)});
            out.push_back({ActionKind::CommitEntry, i, 0, MemberSet(m)});
        }
        out.push_back({ActionKind::ClientRequest, i, 0, {}});
        for (ServerId j = 0; j < n; ++j) {
            if (i == j) continue;
            out.push_back({ActionKind::SendConfig, i, j, {}});
            out.push_back({ActionKind::UpdateTerms, i, j, {}});
            out.push_back({ActionKind::GetEntries, i, j, {}});
            out.push_back({ActionKind::RollbackEntries, i, j, {}});
        }
    }
    return out;
}

}  // namespace loglessraft::testing
