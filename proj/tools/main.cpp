// Command-line front end: bounded exploration, trace replay, refinement
// checking, simulation, and the availability experiment. Exit codes:
//   0  all invariants hold / trace valid / trace refines
//   1  a violation or invalid trace was found (a finding, not a crash)
//   2  usage or domain error
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "loglessraft/experiment.hpp"
#include "loglessraft/json_io.hpp"
#include "loglessraft/simnet.hpp"

using namespace loglessraft;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << contents;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

void emit(const json& envelope, const std::string& text, bool as_json) {
    if (as_json)
        std::cout << envelope.dump(2) << "\n";
    else
        std::cout << text;
}

struct ExploreArgs {
    std::uint32_t servers = 3;
    std::uint32_t max_term = 2;
    std::uint32_t max_log_len = 1;
    std::uint32_t max_config_version = 2;
    std::string mode = "full";
    std::string invariants = "all";
    bool symmetry = false;
    std::string trace_out;
    std::string preset;
    std::vector<std::string> mutations;
    bool json_out = false;
};

int run_explore(const ExploreArgs& a, const CLI::App* cmd) {
    Bounds bounds;
    bounds.server_count = a.servers;
    bounds.max_term = a.max_term;
    bounds.max_log_len = a.max_log_len;
    bounds.max_config_version = a.max_config_version;
    std::string mode_name = a.mode;
    bool symmetry = a.symmetry;
    if (a.preset == "fig2a") {
        // Full protocol at the published bounds: 4 servers, logs up to 2,
        // terms and versions up to 3, symmetry reduction on.
        bounds = Bounds{4, 3, 2, 3, {}};
        mode_name = "full";
        symmetry = true;
    } else if (a.preset == "fig2b") {
        // Config machine only: 5 servers, terms and versions up to 4.
        bounds = Bounds{5, 4, 0, 4, {}};
        mode_name = "logless";
        symmetry = true;
    } else if (!a.preset.empty()) {
        throw std::invalid_argument("unknown preset: " + a.preset);
    }
    // Explicit flags override the preset.
    if (cmd->count("--servers")) bounds.server_count = a.servers;
    if (cmd->count("--max-term")) bounds.max_term = a.max_term;
    if (cmd->count("--max-log-len")) bounds.max_log_len = a.max_log_len;
    if (cmd->count("--max-config-version")) bounds.max_config_version = a.max_config_version;
    if (cmd->count("--mode")) mode_name = a.mode;
    if (cmd->count("--symmetry")) symmetry = a.symmetry;

    ProtocolMode mode;
    if (mode_name == "full")
        mode = ProtocolMode::Full;
    else if (mode_name == "logless")
        mode = ProtocolMode::LoglessOnly;
    else
        throw std::invalid_argument("unknown mode: " + mode_name);

    ExploreOptions options;
    options.mutations = semantics_with_mutations(a.mutations, false);

    auto report = explore(mode, bounds, split_csv(a.invariants), symmetry, options);

    if (!a.trace_out.empty() && report.counterexample)
        write_file(a.trace_out, to_json(*report.counterexample).dump(2) + "\n");

    json rj = to_json(report, mode, bounds, symmetry);
    std::string text = "mode: " + mode_name + "\nservers: " + std::to_string(bounds.server_count) +
                       "\nmaxTerm: " + std::to_string(bounds.max_term) +
                       "\nmaxLogLen: " + std::to_string(bounds.max_log_len) +
                       "\nmaxConfigVersion: " + std::to_string(bounds.max_config_version) +
                       "\nsymmetry: " + (symmetry ? "on" : "off") +
                       "\ndistinct states: " + std::to_string(report.distinct_states) +
                       "\nmax depth: " + std::to_string(report.max_depth) +
                       "\nverdict: " + (report.all_hold ? "AllHold" : "Violation") + "\n";
    if (!report.all_hold) {
        text += "violated invariant: " + report.violated_invariant + "\n";
        if (report.counterexample)
            text += "counterexample length: " + std::to_string(report.counterexample->steps.size()) +
                    (a.trace_out.empty() ? "" : "  (written to " + a.trace_out + ")") + "\n";
    }
    json params = {{"mode", mode_name},
                   {"servers", bounds.server_count},
                   {"maxTerm", bounds.max_term},
                   {"maxLogLen", bounds.max_log_len},
                   {"maxConfigVersion", bounds.max_config_version},
                   {"symmetry", symmetry},
                   {"invariants", split_csv(a.invariants)}};
    emit({{"command", "explore"}, {"params", params}, {"result", rj}}, text, a.json_out);
    return report.all_hold ? 0 : 1;
}

struct TraceFileArgs {
    std::string file;
    bool json_out = false;
};

int run_replay(const TraceFileArgs& a) {
    Trace trace = trace_from_json(load_json_file(a.file));
    ReplayResult r = replay(trace);
    std::string text = r.valid ? "Valid\n"
                               : "InvalidAtStep(" + std::to_string(r.failed_step) + ", " +
                                     to_string(r.reason) + ")\n";
    json result = {{"valid", r.valid}};
    if (!r.valid) {
        result["failedStep"] = r.failed_step;
        result["reason"] = to_string(r.reason);
    } else {
        result["final"] = to_json(r.final);
    }
    emit({{"command", "replay"}, {"params", {{"file", a.file}}}, {"result", result}}, text,
         a.json_out);
    return r.valid ? 0 : 1;
}

int run_refine(const TraceFileArgs& a) {
    Trace trace = trace_from_json(load_json_file(a.file));
    RefinementResult r = project_and_check_refinement(trace);
    std::string text =
        r.refines ? "Refines\n"
                  : "FailsAtStep(" + std::to_string(r.failed_step) + "): " + r.reason + "\n";
    json result = {{"refines", r.refines}};
    if (!r.refines) {
        result["failedStep"] = r.failed_step;
        result["reason"] = r.reason;
    }
    emit({{"command", "refine"}, {"params", {{"file", a.file}}}, {"result", result}}, text,
         a.json_out);
    return r.refines ? 0 : 1;
}

struct SimulateArgs {
    std::uint64_t seed = 0;
    std::uint32_t servers = 3;
    std::uint64_t duration_ms = 10000;
    std::string faults_file;
    std::string out;
    std::string trace_out;
    std::uint64_t writer_period_ms = 0;  // 0: no client workload
    std::uint64_t writer_timeout_ms = 100;
    bool json_out = false;
};

FaultSchedule faults_from_json(const json& j) {
    FaultSchedule out;
    for (const auto& wj : j) {
        FaultWindow w;
        w.start_ms = wj.at("startMs").get<std::uint64_t>();
        w.end_ms = wj.at("endMs").get<std::uint64_t>();
        for (const auto& id : wj.at("affected")) w.affected.add(id.get<ServerId>());
        const std::string kind = wj.value("kind", "pause-replication");
        if (kind != "pause-replication") throw std::invalid_argument("unknown fault kind: " + kind);
        out.push_back(w);
    }
    return out;
}

int run_simulate(const SimulateArgs& a) {
    SimConfig cfg;
    cfg.seed = a.seed;
    cfg.universe = a.servers;
    cfg.duration_ms = a.duration_ms;
    FaultSchedule faults;
    if (!a.faults_file.empty()) faults = faults_from_json(load_json_file(a.faults_file));
    std::optional<ClientWorkload> client;
    if (a.writer_period_ms > 0)
        client = ClientWorkload{a.writer_period_ms, a.writer_timeout_ms, 0};

    SimOutput out = run_simulation(cfg, faults, client, !a.out.empty());

    if (!a.out.empty()) {
        std::string lines;
        for (const auto& e : out.event_log) {
            json row = {{"timeMs", e.time_ms}, {"kind", e.kind}, {"details", e.details}};
            lines += row.dump() + "\n";
        }
        write_file(a.out, lines);
    }
    if (!a.trace_out.empty() && out.trace)
        write_file(a.trace_out, to_json(*out.trace).dump(2) + "\n");

    json stats = {{"eventsProcessed", out.stats.events_processed},
                  {"messagesSent", out.stats.messages_sent},
                  {"messagesDelivered", out.stats.messages_delivered},
                  {"deferredEvents", out.stats.deferred_events},
                  {"electionsStarted", out.stats.elections_started},
                  {"electionsWon", out.stats.elections_won},
                  {"entriesAppended", out.stats.entries_appended},
                  {"entriesRolledBack", out.stats.entries_rolled_back},
                  {"commitActions", out.stats.commit_actions},
                  {"configAdoptions", out.stats.config_adoptions},
                  {"termUpdates", out.stats.term_updates},
                  {"writesIssued", out.stats.writes_issued},
                  {"writesCommitted", out.stats.writes_committed},
                  {"writesTimedOut", out.stats.writes_timed_out}};
    json result = {{"observerVerdict", out.all_hold ? "AllHold" : "Violation"}, {"stats", stats}};
    if (!out.all_hold) result["violatedInvariant"] = out.violation_invariant;
    std::string text = std::string("observer verdict: ") +
                       (out.all_hold ? "AllHold" : ("Violation (" + out.violation_invariant + ")")) +
                       "\nevents: " + std::to_string(out.stats.events_processed) +
                       "\nelections won: " + std::to_string(out.stats.elections_won) +
                       "\nentries appended: " + std::to_string(out.stats.entries_appended) +
                       "\ncommit actions: " + std::to_string(out.stats.commit_actions) + "\n";
    json params = {{"seed", a.seed},
                   {"servers", a.servers},
                   {"durationMs", a.duration_ms},
                   {"faults", a.faults_file}};
    emit({{"command", "simulate"}, {"params", params}, {"result", result}}, text, a.json_out);
    return out.all_hold ? 0 : 1;
}

struct ExperimentArgs {
    std::string backend = "logless";
    ExperimentParams params;
    std::string out;
    std::string phases_out;
    std::string stats_out;
    bool json_out = false;
};

json stats_to_json(const ExperimentResult& r) {
    json phases = json::array();
    for (const auto& p : r.stats.phases) {
        json pj = {{"startMs", p.start_ms},
                   {"endMs", p.end_ms},
                   {"recoveryMs", p.recovery_ms ? json(*p.recovery_ms) : json(nullptr)},
                   {"timeouts", p.timeouts},
                   {"committed", p.committed},
                   {"reconfigCompletionsMs", p.reconfig_completions_ms}};
        phases.push_back(pj);
    }
    return {{"epochMs", r.epoch_ms},
            {"allHold", r.all_hold},
            {"totals",
             {{"committed", r.stats.total_committed},
              {"timeouts", r.stats.total_timeouts},
              {"reconfigs", r.stats.total_reconfigs}}},
            {"phases", phases}};
}

int run_experiment(const ExperimentArgs& a) {
    Backend backend;
    if (a.backend == "logless")
        backend = Backend::Logless;
    else if (a.backend == "raft-oplog")
        backend = Backend::RaftOplog;
    else
        throw std::invalid_argument("unknown backend: " + a.backend);

    ExperimentResult r = run_availability_experiment(backend, a.params);

    if (!a.out.empty()) {
        std::string csv = "issued_at_ms,latency_ms,outcome\n";
        for (const auto& rec : r.records)
            csv += std::to_string(rec.issued_at_ms) + "," + std::to_string(rec.latency_ms) + "," +
                   (rec.outcome == WriteOutcome::Committed ? "committed" : "timeout") + "\n";
        write_file(a.out, csv);
    }
    if (!a.phases_out.empty()) {
        std::string csv = "start_ms,end_ms,kind\n";
        for (const auto& w : r.schedule)
            csv += std::to_string(w.start_ms) + "," + std::to_string(w.end_ms) + "," +
                   (w.degraded ? "degraded" : "steady") + "\n";
        write_file(a.phases_out, csv);
    }
    json stats = stats_to_json(r);
    if (!a.stats_out.empty()) write_file(a.stats_out, stats.dump(2) + "\n");

    std::string text = "backend: " + a.backend + "\nwrites: " +
                       std::to_string(r.stats.total_committed) + " committed, " +
                       std::to_string(r.stats.total_timeouts) + " timed out\nreconfigs: " +
                       std::to_string(r.stats.total_reconfigs) + "\nobserver: " +
                       (r.all_hold ? "AllHold" : "Violation (" + r.violation_invariant + ")") + "\n";
    std::size_t k = 0;
    for (const auto& p : r.stats.phases) {
        text += "degraded phase " + std::to_string(k++) + " [" + std::to_string(p.start_ms) + "," +
                std::to_string(p.end_ms) + "): " +
                (p.recovery_ms ? "recovered at +" + std::to_string(*p.recovery_ms) + "ms"
                               : "no recovery") +
                ", " + std::to_string(p.timeouts) + " timeouts\n";
    }
    json params = {{"backend", a.backend},
                   {"seed", a.params.seed},
                   {"steadyMs", a.params.steady_ms},
                   {"degradedMs", a.params.degraded_ms},
                   {"detectionDelayMs", a.params.detection_delay_ms},
                   {"writeTimeoutMs", a.params.write_timeout_ms},
                   {"totalMs", a.params.total_ms},
                   {"writerPeriodMs", a.params.writer_period_ms}};
    emit({{"command", "experiment"}, {"params", params}, {"result", stats}}, text, a.json_out);
    return r.all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logless dynamic reconfiguration for Raft-style replication: "
                 "bounded model checking, simulation, and the availability experiment"};
    app.require_subcommand(1);

    ExploreArgs ex;
    auto* explore_cmd = app.add_subcommand("explore", "bounded exhaustive state exploration");
    explore_cmd->add_option("--servers", ex.servers, "universe size");
    explore_cmd->add_option("--max-term", ex.max_term, "term bound");
    explore_cmd->add_option("--max-log-len", ex.max_log_len, "log length bound");
    explore_cmd->add_option("--max-config-version", ex.max_config_version, "version bound");
    explore_cmd->add_option("--mode", ex.mode, "full|logless");
    explore_cmd->add_option("--invariants", ex.invariants, "comma-separated names or 'all'");
    explore_cmd->add_flag("--symmetry", ex.symmetry, "identify states up to server relabelling");
    explore_cmd->add_option("--trace-out", ex.trace_out, "write a counterexample trace here");
    explore_cmd->add_option("--preset", ex.preset, "fig2a|fig2b bound presets");
#ifdef LOGLESSRAFT_ENABLE_MUTATIONS
    explore_cmd->add_option("--mutate", ex.mutations,
                            "disable a guard (test builds only): drop-q1, drop-q2, drop-p1, "
                            "drop-config-vote-guard, drop-config-term-rewrite");
#endif
    explore_cmd->add_flag("--json", ex.json_out, "machine-readable output");

    TraceFileArgs rp;
    auto* replay_cmd = app.add_subcommand("replay", "replay a trace file");
    replay_cmd->add_option("file", rp.file, "trace JSON file")->required();
    replay_cmd->add_flag("--json", rp.json_out, "machine-readable output");

    TraceFileArgs rf;
    auto* refine_cmd = app.add_subcommand("refine", "check a trace against the config machine");
    refine_cmd->add_option("file", rf.file, "trace JSON file")->required();
    refine_cmd->add_flag("--json", rf.json_out, "machine-readable output");

    SimulateArgs sm;
    auto* sim_cmd = app.add_subcommand("simulate", "deterministic message-level simulation");
    sim_cmd->add_option("--seed", sm.seed, "random seed");
    sim_cmd->add_option("--servers", sm.servers, "universe size");
    sim_cmd->add_option("--duration-ms", sm.duration_ms, "virtual run time");
    sim_cmd->add_option("--faults", sm.faults_file, "fault schedule JSON file");
    sim_cmd->add_option("--out", sm.out, "event log output (JSON lines)");
    sim_cmd->add_option("--trace-out", sm.trace_out, "abstract behavior trace output");
    sim_cmd->add_option("--writer-period-ms", sm.writer_period_ms,
                        "enable a majority-write client with this period");
    sim_cmd->add_option("--writer-timeout-ms", sm.writer_timeout_ms, "write concern timeout");
    sim_cmd->add_flag("--json", sm.json_out, "machine-readable output");

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "availability under degraded replication");
    exp_cmd->add_option("--backend", exp.backend, "logless|raft-oplog");
    exp_cmd->add_option("--seed", exp.params.seed, "random seed");
    exp_cmd->add_option("--steady-ms", exp.params.steady_ms, "steady phase length");
    exp_cmd->add_option("--degraded-ms", exp.params.degraded_ms, "degraded phase length");
    exp_cmd->add_option("--detection-delay-ms", exp.params.detection_delay_ms,
                        "delay before recovery starts");
    exp_cmd->add_option("--write-timeout-ms", exp.params.write_timeout_ms,
                        "write concern timeout");
    exp_cmd->add_option("--total-ms", exp.params.total_ms, "measured duration");
    exp_cmd->add_option("--writer-period-ms", exp.params.writer_period_ms, "writer period");
    exp_cmd->add_option("--out", exp.out, "latency records CSV");
    exp_cmd->add_option("--phases-out", exp.phases_out, "phase schedule CSV");
    exp_cmd->add_option("--stats-out", exp.stats_out, "availability stats JSON");
    exp_cmd->add_flag("--json", exp.json_out, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (explore_cmd->parsed()) return run_explore(ex, explore_cmd);
        if (replay_cmd->parsed()) return run_replay(rp);
        if (refine_cmd->parsed()) return run_refine(rf);
        if (sim_cmd->parsed()) return run_simulate(sm);
        if (exp_cmd->parsed()) return run_experiment(exp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
