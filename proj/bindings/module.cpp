// Python bindings for the protocol core, the invariant checkers, the
// explorer, the simulator and the experiment. Member sets cross the
// boundary as sorted id lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loglessraft/experiment.hpp"
#include "loglessraft/json_io.hpp"
#include "loglessraft/simnet.hpp"

namespace py = pybind11;
using namespace loglessraft;

namespace {

MemberSet to_members(const std::vector<ServerId>& ids) { return MemberSet::from_ids(ids); }

std::vector<std::vector<ServerId>> quorums_py(const std::vector<ServerId>& m) {
    std::vector<std::vector<ServerId>> out;
    for (MemberSet q : quorums(to_members(m))) out.push_back(q.ids());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "logless dynamic reconfiguration for Raft-style replication: protocol state "
              "machine, safety checkers, bounded explorer, deterministic simulator";

    py::enum_<Role>(m, "Role").value("Primary", Role::Primary).value("Secondary", Role::Secondary);

    py::enum_<ConfigOrdering>(m, "ConfigOrdering")
        .value("Older", ConfigOrdering::Older)
        .value("Equal", ConfigOrdering::Equal)
        .value("Newer", ConfigOrdering::Newer);

    py::enum_<ActionKind>(m, "ActionKind")
        .value("Reconfig", ActionKind::Reconfig)
        .value("SendConfig", ActionKind::SendConfig)
        .value("BecomeLeader", ActionKind::BecomeLeader)
        .value("UpdateTerms", ActionKind::UpdateTerms)
        .value("ClientRequest", ActionKind::ClientRequest)
        .value("GetEntries", ActionKind::GetEntries)
        .value("RollbackEntries", ActionKind::RollbackEntries)
        .value("CommitEntry", ActionKind::CommitEntry);

    py::enum_<Guard>(m, "Guard")
        .value("Ok", Guard::Ok)
        .value("NotPrimary", Guard::NotPrimary)
        .value("Q1Failed", Guard::Q1Failed)
        .value("Q2Failed", Guard::Q2Failed)
        .value("P1Failed", Guard::P1Failed)
        .value("OverlapFailed", Guard::OverlapFailed)
        .value("ReceiverNotSecondary", Guard::ReceiverNotSecondary)
        .value("ConfigNotNewer", Guard::ConfigNotNewer)
        .value("NotAQuorum", Guard::NotAQuorum)
        .value("CandidateNotInQuorum", Guard::CandidateNotInQuorum)
        .value("VoterHasNewerConfig", Guard::VoterHasNewerConfig)
        .value("VoterTermTooHigh", Guard::VoterTermTooHigh)
        .value("VoterLogAhead", Guard::VoterLogAhead)
        .value("TermNotGreater", Guard::TermNotGreater)
        .value("NotSecondary", Guard::NotSecondary)
        .value("LogCheckFailed", Guard::LogCheckFailed)
        .value("CannotRollback", Guard::CannotRollback)
        .value("NotReplicatedOnQuorum", Guard::NotReplicatedOnQuorum);

    py::enum_<ProtocolMode>(m, "ProtocolMode")
        .value("Full", ProtocolMode::Full)
        .value("LoglessOnly", ProtocolMode::LoglessOnly);

    py::enum_<Backend>(m, "Backend")
        .value("Logless", Backend::Logless)
        .value("RaftOplog", Backend::RaftOplog);

    py::enum_<WriteOutcome>(m, "WriteOutcome")
        .value("Committed", WriteOutcome::Committed)
        .value("Timeout", WriteOutcome::Timeout);

    py::class_<Config>(m, "Config")
        .def(py::init([](const std::vector<ServerId>& members, std::uint32_t version,
                         std::uint32_t term) {
                 return Config{to_members(members), version, term};
             }),
             py::arg("members"), py::arg("version") = 1, py::arg("term") = 0)
        .def_property_readonly("members", [](const Config& c) { return c.members.ids(); })
        .def_readwrite("version", &Config::version)
        .def_readwrite("term", &Config::term)
        .def("__eq__", [](const Config& a, const Config& b) { return a == b; })
        .def("__repr__", [](const Config& c) {
            std::string s = "Config(members=[";
            for (auto id : c.members.ids()) s += std::to_string(id) + ",";
            return s + "], version=" + std::to_string(c.version) +
                   ", term=" + std::to_string(c.term) + ")";
        });

    py::class_<ServerState>(m, "ServerState")
        .def(py::init<>())
        .def_readwrite("term", &ServerState::term)
        .def_readwrite("role", &ServerState::role)
        .def_readwrite("config", &ServerState::config)
        .def_readwrite("log", &ServerState::log)
        .def("__eq__", [](const ServerState& a, const ServerState& b) { return a == b; });

    py::class_<CommittedEntry>(m, "CommittedEntry")
        .def(py::init<std::uint32_t, std::uint32_t>(), py::arg("index"), py::arg("term"))
        .def_readwrite("index", &CommittedEntry::index)
        .def_readwrite("term", &CommittedEntry::term)
        .def("__eq__", [](CommittedEntry a, CommittedEntry b) { return a == b; });

    py::class_<GlobalState>(m, "GlobalState")
        .def(py::init<>())
        .def_readwrite("servers", &GlobalState::servers)
        .def_readwrite("committed", &GlobalState::committed)
        .def("__eq__", [](const GlobalState& a, const GlobalState& b) { return a == b; })
        .def("to_json", [](const GlobalState& g) { return to_json(g).dump(); })
        .def_static("from_json",
                    [](const std::string& s) { return global_state_from_json(json::parse(s)); });

    py::class_<ActionDescriptor>(m, "ActionDescriptor")
        .def(py::init([](ActionKind kind, ServerId actor, ServerId peer,
                         const std::vector<ServerId>& members) {
                 return ActionDescriptor{kind, actor, peer, to_members(members)};
             }),
             py::arg("kind"), py::arg("actor") = 0, py::arg("peer") = 0,
             py::arg("members") = std::vector<ServerId>{})
        .def_readwrite("kind", &ActionDescriptor::kind)
        .def_readwrite("actor", &ActionDescriptor::actor)
        .def_readwrite("peer", &ActionDescriptor::peer)
        .def_property_readonly("members",
                               [](const ActionDescriptor& d) { return d.members.ids(); })
        .def("__eq__", [](const ActionDescriptor& a, const ActionDescriptor& b) { return a == b; })
        .def("__repr__", [](const ActionDescriptor& d) { return to_string(d); });

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("guard", &StepResult::guard)
        .def_readonly("state", &StepResult::state)
        .def_property_readonly("ok", &StepResult::ok);

    py::class_<Bounds>(m, "Bounds")
        .def(py::init([](std::uint32_t servers, std::uint32_t max_term, std::uint32_t max_log_len,
                         std::uint32_t max_config_version, const std::vector<ServerId>& m_init) {
                 return Bounds{servers, max_term, max_log_len, max_config_version,
                               to_members(m_init)};
             }),
             py::arg("servers") = 3, py::arg("max_term") = 2, py::arg("max_log_len") = 1,
             py::arg("max_config_version") = 2, py::arg("m_init") = std::vector<ServerId>{})
        .def_readwrite("server_count", &Bounds::server_count)
        .def_readwrite("max_term", &Bounds::max_term)
        .def_readwrite("max_log_len", &Bounds::max_log_len)
        .def_readwrite("max_config_version", &Bounds::max_config_version);

    py::class_<Semantics>(m, "Semantics")
        .def(py::init<>())
        .def_readwrite("logless", &Semantics::logless)
        .def_readwrite("drop_q1", &Semantics::drop_q1)
        .def_readwrite("drop_q2", &Semantics::drop_q2)
        .def_readwrite("drop_p1", &Semantics::drop_p1)
        .def_readwrite("drop_config_vote_guard", &Semantics::drop_config_vote_guard)
        .def_readwrite("drop_config_term_rewrite", &Semantics::drop_config_term_rewrite);

    py::class_<Trace>(m, "Trace")
        .def(py::init<>())
        .def_readwrite("init", &Trace::init)
        .def_readwrite("steps", &Trace::steps)
        .def_readwrite("semantics", &Trace::semantics)
        .def("to_json", [](const Trace& t) { return to_json(t).dump(); })
        .def_static("from_json",
                    [](const std::string& s) { return trace_from_json(json::parse(s)); });

    py::class_<Witness>(m, "Witness")
        .def_readonly("servers", &Witness::servers)
        .def_readonly("note", &Witness::note);

    py::class_<InvariantReport>(m, "InvariantReport")
        .def_readonly("name", &InvariantReport::name)
        .def_readonly("holds", &InvariantReport::holds)
        .def_readonly("witnesses", &InvariantReport::witnesses);

    py::class_<ExplorationReport>(m, "ExplorationReport")
        .def_readonly("distinct_states", &ExplorationReport::distinct_states)
        .def_readonly("max_depth", &ExplorationReport::max_depth)
        .def_readonly("all_hold", &ExplorationReport::all_hold)
        .def_readonly("violated_invariant", &ExplorationReport::violated_invariant)
        .def_readonly("counterexample", &ExplorationReport::counterexample)
        .def_readonly("per_invariant", &ExplorationReport::per_invariant)
        .def_readonly("states", &ExplorationReport::states);

    py::class_<ReplayResult>(m, "ReplayResult")
        .def_readonly("valid", &ReplayResult::valid)
        .def_readonly("final", &ReplayResult::final)
        .def_readonly("failed_step", &ReplayResult::failed_step)
        .def_readonly("reason", &ReplayResult::reason);

    py::class_<RefinementResult>(m, "RefinementResult")
        .def_readonly("refines", &RefinementResult::refines)
        .def_readonly("failed_step", &RefinementResult::failed_step)
        .def_readonly("reason", &RefinementResult::reason);

    // --- protocol operations -------------------------------------------------

    m.def("quorums", &quorums_py, py::arg("members"),
          "All strict-majority subsets of a member set");
    m.def(
        "quorums_overlap",
        [](const std::vector<ServerId>& m1, const std::vector<ServerId>& m2) {
            return quorums_overlap(to_members(m1), to_members(m2));
        },
        py::arg("m1"), py::arg("m2"));
    m.def("compare_configs", &compare_configs, py::arg("a"), py::arg("b"));
    m.def("log_geq", &log_geq, py::arg("a"), py::arg("b"));
    m.def(
        "initial_state",
        [](std::uint32_t universe, const std::vector<ServerId>& m_init) {
            return initial_state(universe, m_init.empty() ? MemberSet::universe(universe)
                                                          : to_members(m_init));
        },
        py::arg("universe"), py::arg("m_init") = std::vector<ServerId>{});

    m.def(
        "reconfig_enabled",
        [](const GlobalState& g, ServerId i, const std::vector<ServerId>& m_new) {
            return reconfig_enabled(g, i, to_members(m_new));
        },
        py::arg("state"), py::arg("actor"), py::arg("new_members"));
    m.def(
        "apply_reconfig",
        [](const GlobalState& g, ServerId i, const std::vector<ServerId>& m_new) {
            return apply_reconfig(g, i, to_members(m_new));
        },
        py::arg("state"), py::arg("actor"), py::arg("new_members"));
    m.def("apply_send_config", &apply_send_config, py::arg("state"), py::arg("sender"),
          py::arg("receiver"));
    m.def(
        "apply_become_leader",
        [](const GlobalState& g, ServerId i, const std::vector<ServerId>& quorum) {
            return apply_become_leader(g, i, to_members(quorum));
        },
        py::arg("state"), py::arg("candidate"), py::arg("quorum"));
    m.def("apply_update_terms", &apply_update_terms, py::arg("state"), py::arg("sender"),
          py::arg("receiver"));
    m.def("apply_client_request", &apply_client_request, py::arg("state"), py::arg("primary"));
    m.def("apply_get_entries", &apply_get_entries, py::arg("state"), py::arg("receiver"),
          py::arg("sender"));
    m.def("apply_rollback_entries", &apply_rollback_entries, py::arg("state"),
          py::arg("receiver"), py::arg("sender"));
    m.def(
        "apply_commit_entry",
        [](const GlobalState& g, ServerId i, const std::vector<ServerId>& quorum) {
            return apply_commit_entry(g, i, to_members(quorum));
        },
        py::arg("state"), py::arg("primary"), py::arg("quorum"));
    m.def("apply_action", &apply_action, py::arg("state"), py::arg("action"),
          py::arg("semantics") = Semantics{});
    m.def("enabled_transitions", &enabled_transitions, py::arg("state"), py::arg("bounds"),
          py::arg("semantics") = Semantics{});

    // --- invariants -----------------------------------------------------------

    m.def("is_deactivated", &is_deactivated, py::arg("state"), py::arg("config"));
    m.def("election_safety", &election_safety, py::arg("state"));
    m.def("leader_completeness", &leader_completeness, py::arg("state"));
    m.def("log_matching", &log_matching, py::arg("state"));
    m.def("state_lemma_suite", &state_lemma_suite, py::arg("state"));
    m.def("transition_lemma_suite", &transition_lemma_suite, py::arg("pre"), py::arg("post"));
    m.def("check_state_invariant", &check_state_invariant, py::arg("name"), py::arg("state"));
    m.def("state_invariant_names", [] { return state_invariant_names(); });
    m.def("transition_invariant_names", [] { return transition_invariant_names(); });

    // --- explorer ---------------------------------------------------------------

    m.def(
        "explore",
        [](ProtocolMode mode, const Bounds& bounds, const std::vector<std::string>& invariants,
           bool symmetry, const std::vector<std::string>& mutations, bool collect_states) {
            ExploreOptions options;
            options.mutations = semantics_with_mutations(mutations, false);
            options.collect_states = collect_states;
            return explore(mode, bounds, invariants, symmetry, options);
        },
        py::arg("mode"), py::arg("bounds"), py::arg("invariants") = std::vector<std::string>{"all"},
        py::arg("symmetry") = false, py::arg("mutations") = std::vector<std::string>{},
        py::arg("collect_states") = false);
    m.def("canonicalize", &loglessraft::canonicalize, py::arg("state"));
    m.def("replay", &replay, py::arg("trace"));
    m.def("project_and_check_refinement", &project_and_check_refinement, py::arg("trace"));
    m.def("random_trace", &random_trace, py::arg("bounds"), py::arg("max_len"), py::arg("seed"),
          py::arg("semantics") = Semantics{});

    // --- simulator ---------------------------------------------------------------

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("universe", &SimConfig::universe)
        .def_readwrite("heartbeat_interval_ms", &SimConfig::heartbeat_interval_ms)
        .def_readwrite("election_timeout_min_ms", &SimConfig::election_timeout_min_ms)
        .def_readwrite("election_timeout_max_ms", &SimConfig::election_timeout_max_ms)
        .def_readwrite("message_delay_min_ms", &SimConfig::message_delay_min_ms)
        .def_readwrite("message_delay_max_ms", &SimConfig::message_delay_max_ms)
        .def_readwrite("duration_ms", &SimConfig::duration_ms)
        .def_property(
            "m_init", [](const SimConfig& c) { return c.m_init.ids(); },
            [](SimConfig& c, const std::vector<ServerId>& ids) { c.m_init = to_members(ids); });

    py::enum_<FaultKind>(m, "FaultKind").value("PauseReplication", FaultKind::PauseReplication);

    py::class_<FaultWindow>(m, "FaultWindow")
        .def(py::init([](std::uint64_t start, std::uint64_t end,
                         const std::vector<ServerId>& affected) {
                 return FaultWindow{start, end, to_members(affected),
                                    FaultKind::PauseReplication};
             }),
             py::arg("start_ms"), py::arg("end_ms"), py::arg("affected"))
        .def_readwrite("start_ms", &FaultWindow::start_ms)
        .def_readwrite("end_ms", &FaultWindow::end_ms)
        .def_property_readonly("affected", [](const FaultWindow& w) { return w.affected.ids(); });

    py::class_<ClientWorkload>(m, "ClientWorkload")
        .def(py::init<>())
        .def_readwrite("period_ms", &ClientWorkload::period_ms)
        .def_readwrite("timeout_ms", &ClientWorkload::timeout_ms)
        .def_readwrite("start_ms", &ClientWorkload::start_ms);

    py::class_<LatencyRecord>(m, "LatencyRecord")
        .def_readonly("issued_at_ms", &LatencyRecord::issued_at_ms)
        .def_readonly("latency_ms", &LatencyRecord::latency_ms)
        .def_readonly("outcome", &LatencyRecord::outcome);

    py::class_<SimStats>(m, "SimStats")
        .def_readonly("events_processed", &SimStats::events_processed)
        .def_readonly("messages_sent", &SimStats::messages_sent)
        .def_readonly("elections_won", &SimStats::elections_won)
        .def_readonly("entries_appended", &SimStats::entries_appended)
        .def_readonly("commit_actions", &SimStats::commit_actions)
        .def_readonly("writes_committed", &SimStats::writes_committed)
        .def_readonly("writes_timed_out", &SimStats::writes_timed_out);

    py::class_<SimOutput>(m, "SimOutput")
        .def_readonly("records", &SimOutput::records)
        .def_readonly("stats", &SimOutput::stats)
        .def_readonly("all_hold", &SimOutput::all_hold)
        .def_readonly("violation_invariant", &SimOutput::violation_invariant)
        .def_readonly("trace", &SimOutput::trace);

    m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("faults") = FaultSchedule{},
          py::arg("client") = std::optional<ClientWorkload>{},
          py::arg("record_event_log") = false);

    // --- experiment ---------------------------------------------------------------

    py::class_<ExperimentParams>(m, "ExperimentParams")
        .def(py::init<>())
        .def_readwrite("steady_ms", &ExperimentParams::steady_ms)
        .def_readwrite("degraded_ms", &ExperimentParams::degraded_ms)
        .def_readwrite("detection_delay_ms", &ExperimentParams::detection_delay_ms)
        .def_readwrite("write_timeout_ms", &ExperimentParams::write_timeout_ms)
        .def_readwrite("total_ms", &ExperimentParams::total_ms)
        .def_readwrite("writer_period_ms", &ExperimentParams::writer_period_ms)
        .def_readwrite("seed", &ExperimentParams::seed);

    py::class_<PhaseStats>(m, "PhaseStats")
        .def_readonly("start_ms", &PhaseStats::start_ms)
        .def_readonly("end_ms", &PhaseStats::end_ms)
        .def_readonly("recovery_ms", &PhaseStats::recovery_ms)
        .def_readonly("timeouts", &PhaseStats::timeouts)
        .def_readonly("committed", &PhaseStats::committed)
        .def_readonly("reconfig_completions_ms", &PhaseStats::reconfig_completions_ms);

    py::class_<AvailabilityStats>(m, "AvailabilityStats")
        .def_readonly("phases", &AvailabilityStats::phases)
        .def_readonly("total_timeouts", &AvailabilityStats::total_timeouts)
        .def_readonly("total_committed", &AvailabilityStats::total_committed)
        .def_readonly("total_reconfigs", &AvailabilityStats::total_reconfigs);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("records", &ExperimentResult::records)
        .def_readonly("stats", &ExperimentResult::stats)
        .def_readonly("epoch_ms", &ExperimentResult::epoch_ms)
        .def_readonly("all_hold", &ExperimentResult::all_hold)
        .def_readonly("violation_invariant", &ExperimentResult::violation_invariant);

    m.def("run_availability_experiment", &run_availability_experiment, py::arg("backend"),
          py::arg("params"));
    m.def("summarize", &summarize, py::arg("records"), py::arg("degraded_phases"));
}
