#pragma once

#include <nlohmann/json.hpp>

#include "loglessraft/explorer.hpp"

// JSON encodings with a stable field order (nlohmann::ordered_json keeps
// insertion order), so identical inputs serialize to identical bytes.
//
// GlobalState:
//   {"servers": [{"term": 0, "role": "secondary",
//                 "config": {"members": [0,1,2], "version": 1, "term": 0},
//                 "log": []}, ...],
//    "committed": [{"index": 1, "term": 1}, ...]}
//
// Trace:
//   {"init": <GlobalState>, "steps": [<action>, ...]}
//   plus "mode": "logless" and/or "mutations": [...] when the trace was
//   produced under non-default semantics.
//
// Actions ({"kind": ..., "args": {...}}):
//   Reconfig                     args: actor, members
//   SendConfig / UpdateTerms     args: sender, receiver
//   GetEntries / RollbackEntries args: sender, receiver  (receiver pulls)
//   BecomeLeader / CommitEntry   args: actor, quorum
//   ClientRequest                args: actor

namespace loglessraft {

using json = nlohmann::ordered_json;

json to_json(const GlobalState& g);
GlobalState global_state_from_json(const json& j);

json to_json(const ActionDescriptor& d);
ActionDescriptor action_from_json(const json& j);

json to_json(const Trace& t);
Trace trace_from_json(const json& j);

json to_json(const InvariantReport& r);
json to_json(const ExplorationReport& r, ProtocolMode mode, const Bounds& bounds, bool symmetry);

// Mutation toggles by CLI name: drop-q1, drop-q2, drop-p1,
// drop-config-vote-guard, drop-config-term-rewrite.
const std::vector<std::string>& mutation_names();
Semantics semantics_with_mutations(const std::vector<std::string>& mutations, bool logless);
std::vector<std::string> mutations_of(const Semantics& sem);

}  // namespace loglessraft
