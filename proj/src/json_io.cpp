#include "loglessraft/json_io.hpp"

#include <algorithm>

namespace loglessraft {

namespace {

json members_to_json(MemberSet m) {
    json a = json::array();
    for (ServerId id : m.ids()) a.push_back(id);
    return a;
}

MemberSet members_from_json(const json& j) {
    MemberSet m;
    for (const auto& v : j) m.add(v.get<ServerId>());
    return m;
}

}  // namespace

json to_json(const GlobalState& g) {
    json servers = json::array();
    for (const auto& s : g.servers) {
        servers.push_back({
            {"term", s.term},
            {"role", to_string(s.role)},
            {"config",
             {{"members", members_to_json(s.config.members)},
              {"version", s.config.version},
              {"term", s.config.term}}},
            {"log", s.log},
        });
    }
    json committed = json::array();
    for (const auto& c : g.committed) committed.push_back({{"index", c.index}, {"term", c.term}});
    return {{"servers", servers}, {"committed", committed}};
}

GlobalState global_state_from_json(const json& j) {
    GlobalState g;
    for (const auto& sj : j.at("servers")) {
        ServerState s;
        s.term = sj.at("term").get<std::uint32_t>();
        const std::string role = sj.at("role").get<std::string>();
        if (role == "primary")
            s.role = Role::Primary;
        else if (role == "secondary")
            s.role = Role::Secondary;
        else
            throw std::invalid_argument("unknown role: " + role);
        const auto& cj = sj.at("config");
        s.config.members = members_from_json(cj.at("members"));
        s.config.version = cj.at("version").get<std::uint32_t>();
        s.config.term = cj.at("term").get<std::uint32_t>();
        s.log = sj.at("log").get<Log>();
        g.servers.push_back(std::move(s));
    }
    for (const auto& cj : j.at("committed"))
        g.add_committed({cj.at("index").get<std::uint32_t>(), cj.at("term").get<std::uint32_t>()});
    return g;
}

json to_json(const ActionDescriptor& d) {
    json args;
    switch (d.kind) {
        case ActionKind::Reconfig:
            args = {{"actor", d.actor}, {"members", members_to_json(d.members)}};
            break;
        case ActionKind::BecomeLeader:
        case ActionKind::CommitEntry:
            args = {{"actor", d.actor}, {"quorum", members_to_json(d.members)}};
            break;
        case ActionKind::ClientRequest:
            args = {{"actor", d.actor}};
            break;
        case ActionKind::SendConfig:
        case ActionKind::UpdateTerms:
            args = {{"sender", d.actor}, {"receiver", d.peer}};
            break;
        case ActionKind::GetEntries:
        case ActionKind::RollbackEntries:
            // The pseudosignature is (receiver, sender): the receiver pulls.
            args = {{"sender", d.peer}, {"receiver", d.actor}};
            break;
    }
    return {{"kind", to_string(d.kind)}, {"args", args}};
}

ActionDescriptor action_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const json& args = j.at("args");
    ActionDescriptor d;
    if (kind == "Reconfig") {
        d.kind = ActionKind::Reconfig;
        d.actor = args.at("actor").get<ServerId>();
        d.members = members_from_json(args.at("members"));
    } else if (kind == "BecomeLeader" || kind == "CommitEntry") {
        d.kind = kind == "BecomeLeader" ? ActionKind::BecomeLeader : ActionKind::CommitEntry;
        d.actor = args.at("actor").get<ServerId>();
        d.members = members_from_json(args.at("quorum"));
    } else if (kind == "ClientRequest") {
        d.kind = ActionKind::ClientRequest;
        d.actor = args.at("actor").get<ServerId>();
    } else if (kind == "SendConfig" || kind == "UpdateTerms") {
        d.kind = kind == "SendConfig" ? ActionKind::SendConfig : ActionKind::UpdateTerms;
        d.actor = args.at("sender").get<ServerId>();
        d.peer = args.at("receiver").get<ServerId>();
    } else if (kind == "GetEntries" || kind == "RollbackEntries") {
        d.kind = kind == "GetEntries" ? ActionKind::GetEntries : ActionKind::RollbackEntries;
        d.actor = args.at("receiver").get<ServerId>();
        d.peer = args.at("sender").get<ServerId>();
    } else {
        throw std::invalid_argument("unknown action kind: " + kind);
    }
    return d;
}

const std::vector<std::string>& mutation_names() {
    static const std::vector<std::string> names = {
        "drop-q1", "drop-q2", "drop-p1", "drop-config-vote-guard", "drop-config-term-rewrite",
    };
    return names;
}

Semantics semantics_with_mutations(const std::vector<std::string>& mutations, bool logless) {
    Semantics sem;
    sem.logless = logless;
    for (const auto& m : mutations) {
        if (m == "drop-q1")
            sem.drop_q1 = true;
        else if (m == "drop-q2")
            sem.drop_q2 = true;
        else if (m == "drop-p1")
            sem.drop_p1 = true;
        else if (m == "drop-config-vote-guard")
            sem.drop_config_vote_guard = true;
        else if (m == "drop-config-term-rewrite")
            sem.drop_config_term_rewrite = true;
        else
            throw std::invalid_argument("unknown mutation: " + m);
    }
    return sem;
}

std::vector<std::string> mutations_of(const Semantics& sem) {
    std::vector<std::string> out;
    if (sem.drop_q1) out.push_back("drop-q1");
    if (sem.drop_q2) out.push_back("drop-q2");
    if (sem.drop_p1) out.push_back("drop-p1");
    if (sem.drop_config_vote_guard) out.push_back("drop-config-vote-guard");
    if (sem.drop_config_term_rewrite) out.push_back("drop-config-term-rewrite");
    return out;
}

json to_json(const Trace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s));
    json j = {{"init", to_json(t.init)}, {"steps", steps}};
    if (t.semantics.logless) j["mode"] = "logless";
    auto muts = mutations_of(t.semantics);
    if (!muts.empty()) j["mutations"] = muts;
    return j;
}

Trace trace_from_json(const json& j) {
    Trace t;
    t.init = global_state_from_json(j.at("init"));
    for (const auto& sj : j.at("steps")) t.steps.push_back(action_from_json(sj));
    const bool logless = j.contains("mode") && j.at("mode").get<std::string>() == "logless";
    std::vector<std::string> muts;
    if (j.contains("mutations")) muts = j.at("mutations").get<std::vector<std::string>>();
    t.semantics = semantics_with_mutations(muts, logless);
    return t;
}

json to_json(const InvariantReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses) {
        json wj;
        if (!w.servers.empty()) wj["servers"] = w.servers;
        if (w.entry) wj["entry"] = {{"index", w.entry->index}, {"term", w.entry->term}};
        if (w.index) wj["index"] = *w.index;
        if (w.quorum) wj["quorum"] = members_to_json(*w.quorum);
        if (!w.note.empty()) wj["note"] = w.note;
        witnesses.push_back(wj);
    }
    return {{"name", r.name}, {"holds", r.holds}, {"witnesses", witnesses}};
}

json to_json(const ExplorationReport& r, ProtocolMode mode, const Bounds& bounds, bool symmetry) {
    json per_invariant = json::array();
    for (const auto& [name, count] : r.per_invariant)
        per_invariant.push_back({{"name", name}, {"checks", count}});
    json j = {
        {"mode", mode == ProtocolMode::LoglessOnly ? "logless" : "full"},
        {"bounds",
         {{"servers", bounds.server_count},
          {"maxTerm", bounds.max_term},
          {"maxLogLen", bounds.max_log_len},
          {"maxConfigVersion", bounds.max_config_version},
          {"mInit", members_to_json(bounds.init_members())}}},
        {"symmetry", symmetry},
        {"distinctStates", r.distinct_states},
        {"maxDepth", r.max_depth},
        {"verdict", r.all_hold ? "AllHold" : "Violation"},
        {"perInvariant", per_invariant},
    };
    if (!r.all_hold) {
        j["violatedInvariant"] = r.violated_invariant;
        if (r.counterexample) j["counterexample"] = to_json(*r.counterexample);
    }
    return j;
}

}  // namespace loglessraft
