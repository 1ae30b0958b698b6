#include "loglessraft/experiment.hpp"

#include <algorithm>

namespace loglessraft {

namespace {

// 5-node replica set (voting trio + two replicating non-members) plus two
// spare standbys so every degraded phase has healthy replacements on hand.
constexpr std::uint32_t kUniverse = 7;
constexpr std::uint32_t kVoting = 3;
constexpr std::uint64_t kEpochMs = 1000;        // startup settle time
constexpr std::uint64_t kRetryIntervalMs = 20;  // controller step cadence

// Wakeup tag space.
constexpr std::uint64_t kTagOnset = 1u << 20;
constexpr std::uint64_t kTagDetect = 2u << 20;
constexpr std::uint64_t kTagRetry = 3u << 20;

struct PlanOp {
    bool add = true;
    ServerId who = 0;
};

// Drives degradation and recovery: at each degraded onset it pauses the
// two voting secondaries, and after the detection delay issues the
// membership swap one single-server change at a time.
class RecoveryController {
public:
    RecoveryController(Backend backend, const ExperimentParams& params,
                       FaultSchedule* degraded_phases)
        : backend_(backend), params_(params), degraded_phases_(degraded_phases) {}

    void install(Simulation& sim) {
        std::uint64_t t = kEpochMs;
        std::uint64_t phase = 0;
        const std::uint64_t end = kEpochMs + params_.total_ms;
        while (t < end && params_.degraded_ms > 0) {
            const std::uint64_t onset = t + params_.steady_ms;
            if (onset >= end) break;
            sim.schedule_wakeup(onset, kTagOnset + phase);
            degraded_phases_->push_back(
                {onset, std::min(onset + params_.degraded_ms, end), MemberSet(),
                 FaultKind::PauseReplication});
            t = onset + params_.degraded_ms;
            ++phase;
        }
    }

    void on_wakeup(Simulation& sim, std::uint64_t tag) {
        if (tag >= kTagRetry)
            run_step(sim);
        else if (tag >= kTagDetect)
            plan_recovery(sim, tag - kTagDetect);
        else if (tag >= kTagOnset)
            degrade(sim, tag - kTagOnset);
    }

    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& completions() const {
        return completions_;  // (phase, completion time)
    }

private:
    void degrade(Simulation& sim, std::uint64_t phase) {
        auto primary = sim.current_primary();
        if (!primary) {  // not settled yet; look again shortly
            sim.schedule_wakeup(sim.now() + kRetryIntervalMs, kTagOnset + phase);
            return;
        }
        FaultWindow& window = (*degraded_phases_)[phase];
        MemberSet victims;
        for (ServerId id : sim.state().at(*primary).config.members.ids()) {
            if (id == *primary) continue;
            victims.add(id);
            if (victims.size() == 2) break;
        }
        window.affected = victims;
        FaultWindow imposed = window;
        imposed.start_ms = sim.now();
        sim.add_fault(imposed);
        sim.schedule_wakeup(sim.now() + params_.detection_delay_ms, kTagDetect + phase);
    }

    void plan_recovery(Simulation& sim, std::uint64_t phase) {
        auto primary = sim.current_primary();
        if (!primary) {
            sim.schedule_wakeup(sim.now() + kRetryIntervalMs, kTagDetect + phase);
            return;
        }
        const MemberSet members = sim.state().at(*primary).config.members;
        const MemberSet degraded = (*degraded_phases_)[phase].affected;
        std::vector<ServerId> standbys;
        for (ServerId id = 0; id < kUniverse; ++id)
            if (!members.contains(id) && !sim.is_paused(id, sim.now())) standbys.push_back(id);
        const auto victims = degraded.ids();
        if (standbys.size() < victims.size()) throw std::invalid_argument("not enough standbys");

        plan_.clear();
        plan_phase_ = phase;
        pending_.reset();
        for (std::size_t k = 0; k < victims.size(); ++k) {
            plan_.push_back({true, standbys[k]});
            plan_.push_back({false, victims[k]});
        }
        sim.schedule_wakeup(sim.now(), kTagRetry);
    }

    void run_step(Simulation& sim) {
        if (plan_.empty()) return;
        auto retry = [&] { sim.schedule_wakeup(sim.now() + kRetryIntervalMs, kTagRetry); };
        auto primary = sim.current_primary();
        if (!primary) return retry();

        // RaftOplog: a step in flight completes once its no-op commits.
        if (pending_) {
            if (!sim.commit_covers(pending_->first, pending_->second)) return retry();
            completions_.emplace_back(plan_phase_, sim.now());
            pending_.reset();
            plan_.erase(plan_.begin());
            if (!plan_.empty()) retry();
            return;
        }

        const PlanOp op = plan_.front();
        MemberSet current = sim.state().at(*primary).config.members;
        if (op.add == current.contains(op.who)) {  // already satisfied
            plan_.erase(plan_.begin());
            if (!plan_.empty()) retry();
            return;
        }
        MemberSet target = current;
        if (op.add)
            target.add(op.who);
        else
            target.remove(op.who);
        // Single-server changes always keep adjacent quorums overlapping;
        // re-checked here because the controller promises it at issue time.
        if (!quorums_overlap(current, target)) throw std::logic_error("non-overlapping step");

        if (backend_ == Backend::Logless) {
            if (sim.try_action({ActionKind::Reconfig, *primary, 0, target}) == Guard::Ok) {
                completions_.emplace_back(plan_phase_, sim.now());
                plan_.erase(plan_.begin());
                if (!plan_.empty()) retry();
            } else {
                retry();
            }
            return;
        }
        // RaftOplog: write the no-op, switch the primary's config at
        // append, then wait for the entry to commit.
        if (sim.try_action({ActionKind::ClientRequest, *primary, 0, {}}) != Guard::Ok)
            return retry();
        const ServerState& p = sim.state().at(*primary);
        pending_ = {{static_cast<std::uint32_t>(p.log.size()), p.term}};
        sim.force_config(*primary, target);
        retry();
    }

    Backend backend_;
    ExperimentParams params_;
    FaultSchedule* degraded_phases_;
    std::vector<PlanOp> plan_;
    std::uint64_t plan_phase_ = 0;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> pending_;  // (index, term)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> completions_;
};

}  // namespace

void ExperimentParams::validate() const {
    if (steady_ms == 0 || detection_delay_ms == 0 || write_timeout_ms == 0 || total_ms == 0 ||
        writer_period_ms == 0)
        throw std::invalid_argument("experiment durations must be positive");
}

AvailabilityStats summarize(const std::vector<LatencyRecord>& records,
                            const FaultSchedule& degraded_phases) {
    for (std::size_t k = 1; k < records.size(); ++k)
        if (records[k].issued_at_ms < records[k - 1].issued_at_ms)
            throw std::invalid_argument("records must be ordered by issue time");

    AvailabilityStats stats;
    for (const auto& w : degraded_phases)
        stats.phases.push_back({w.start_ms, w.end_ms, {}, 0, 0, {}});
    for (const auto& r : records) {
        if (r.outcome == WriteOutcome::Committed)
            ++stats.total_committed;
        else
            ++stats.total_timeouts;
        for (auto& p : stats.phases) {
            if (r.issued_at_ms < p.start_ms || r.issued_at_ms >= p.end_ms) continue;
            if (r.outcome == WriteOutcome::Committed) {
                ++p.committed;
                if (!p.recovery_ms) p.recovery_ms = r.issued_at_ms - p.start_ms;
            } else {
                ++p.timeouts;
            }
        }
    }
    return stats;
}

ExperimentResult run_availability_experiment(Backend backend, const ExperimentParams& params) {
    params.validate();

    SimConfig cfg;
    cfg.seed = params.seed;
    cfg.universe = kUniverse;
    cfg.m_init = MemberSet::universe(kVoting);
    cfg.duration_ms = kEpochMs + params.total_ms;

    ClientWorkload client;
    client.period_ms = params.writer_period_ms;
    client.timeout_ms = params.write_timeout_ms;
    client.start_ms = kEpochMs;

    ExperimentResult result;
    result.epoch_ms = kEpochMs;

    RecoveryController controller(backend, params, &result.degraded_phases);
    Simulation sim(cfg, {}, client, false);
    controller.install(sim);
    while (sim.has_pending() && !sim.violation()) {
        sim.step_inplace();
        for (std::uint64_t tag : sim.fired_wakeups()) controller.on_wakeup(sim, tag);
    }
    sim.run();  // flush trailing writes

    result.records = sim.records();
    result.all_hold = !sim.violation();
    result.violation_invariant = sim.violation_invariant();
    result.stats = summarize(result.records, result.degraded_phases);
    for (const auto& [phase, when] : controller.completions()) {
        result.stats.phases[phase].reconfig_completions_ms.push_back(when);
        ++result.stats.total_reconfigs;
    }

    // The alternating grid, for the exported phase schedule.
    std::uint64_t t = kEpochMs;
    const std::uint64_t end = kEpochMs + params.total_ms;
    while (t < end) {
        const std::uint64_t steady_end = std::min(t + params.steady_ms, end);
        result.schedule.push_back({t, steady_end, false});
        t = steady_end;
        if (t >= end || params.degraded_ms == 0) continue;
        const std::uint64_t degraded_end = std::min(t + params.degraded_ms, end);
        result.schedule.push_back({t, degraded_end, true});
        t = degraded_end;
    }
    return result;
}

}  // namespace loglessraft
