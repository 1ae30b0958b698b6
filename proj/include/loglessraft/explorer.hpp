#pragma once

#include "loglessraft/invariants.hpp"
#include "loglessraft/protocol.hpp"

// Bounded explicit-state reachability over the protocol transitions.
// Breadth-first search from the initial state with exact full-state
// deduplication (no lossy fingerprints), so counterexamples are shortest
// and verdicts carry no hashing caveat. Optional symmetry reduction
// identifies states equal up to a relabelling of server ids.

namespace loglessraft {

enum class ProtocolMode : std::uint8_t {
    Full,         // all eight actions
    LoglessOnly,  // Reconfig/SendConfig/BecomeLeader/UpdateTerms, no log state
};

// A replayable behavior: an initial state plus an ordered list of actions.
// `semantics` records the action semantics the trace was produced under
// (mode and any disabled guards); replaying under anything else may fail.
struct Trace {
    GlobalState init;
    std::vector<ActionDescriptor> steps;
    Semantics semantics;
};

struct ExplorationReport {
    std::uint64_t distinct_states = 0;
    std::uint32_t max_depth = 0;  // BFS layers from the initial state
    bool all_hold = true;
    std::string violated_invariant;          // set when !all_hold
    std::optional<Trace> counterexample;     // shortest-by-construction
    std::vector<std::pair<std::string, std::uint64_t>> per_invariant;  // name -> checks
    std::vector<GlobalState> states;         // filled only on request (small runs)
};

struct ExploreOptions {
    Semantics mutations;          // test-only guard toggles; logless is set from the mode
    bool collect_states = false;  // dump the reachable set into the report
};

// `invariants` lists state and transition invariant names, or the single
// entry "all". Unknown names throw std::invalid_argument. A violation is a
// verdict, not an error.
ExplorationReport explore(ProtocolMode mode, const Bounds& bounds,
                          const std::vector<std::string>& invariants, bool symmetry,
                          const ExploreOptions& options = {});

// Least state in the permutation orbit of g, under a fixed total order on
// encoded states. Idempotent, and identical for any relabelling of g.
GlobalState canonicalize(const GlobalState& g);

// Relabel every server id in g (servers, member sets) by new_id = perm[old_id].
GlobalState permute_state(const GlobalState& g, const std::vector<ServerId>& perm);
ActionDescriptor permute_action(const ActionDescriptor& d, const std::vector<ServerId>& perm);

struct ReplayResult {
    bool valid = false;
    GlobalState final;        // state after the last step when valid
    std::uint32_t failed_step = 0;  // 1-based index of the first refused step
    Guard reason = Guard::Ok;
};

// Apply the steps in order; stop at the first guard refusal.
ReplayResult replay(const Trace& trace);

struct RefinementResult {
    bool refines = false;
    std::uint32_t failed_step = 0;  // 1-based; 0 = the initial state projection
    std::string reason;
};

// Project a full-protocol trace onto the configuration machine: drop logs
// and the committed set, map the four log actions to stutters, and check
// that the projected initial state is a valid logless initial state and
// every projected step is an enabled logless transition with a matching
// effect.
RefinementResult project_and_check_refinement(const Trace& trace);

// A random valid trace of at most max_len steps, drawn uniformly from the
// enabled transitions at each state (deterministic in seed). Dead ends cut
// the walk short.
Trace random_trace(const Bounds& bounds, std::uint32_t max_len, std::uint64_t seed,
                   const Semantics& sem = {});

}  // namespace loglessraft
