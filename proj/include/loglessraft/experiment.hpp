#pragma once

#include "loglessraft/simnet.hpp"

// Availability under degraded replication: a majority-write client against
// a simulated replica set whose voting secondaries periodically stall,
// with a controller that swaps in healthy standbys one membership change
// at a time. Two reconfiguration backends run the identical scenario:
//
//   Logless   - configuration changes go through the config state machine
//               directly and never touch the oplog.
//   RaftOplog - every configuration change appends a no-op oplog entry
//               that must commit before the change counts as complete (the
//               change is effective on the primary at append), so a
//               stalled oplog stalls reconfiguration too.

namespace loglessraft {

enum class Backend : std::uint8_t { Logless, RaftOplog };

struct ExperimentParams {
    std::uint64_t steady_ms = 5000;
    std::uint64_t degraded_ms = 2500;
    std::uint64_t detection_delay_ms = 500;
    std::uint64_t write_timeout_ms = 100;
    std::uint64_t total_ms = 60000;
    std::uint64_t writer_period_ms = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

// One entry of the alternating steady/degraded grid.
struct PhaseWindow {
    std::uint64_t start_ms = 0;
    std::uint64_t end_ms = 0;
    bool degraded = false;
};

struct PhaseStats {
    std::uint64_t start_ms = 0;
    std::uint64_t end_ms = 0;
    // Issue-time offset of the first write committed after degradation
    // onset; absent when nothing committed inside the phase.
    std::optional<std::uint64_t> recovery_ms;
    std::uint32_t timeouts = 0;
    std::uint32_t committed = 0;
    std::vector<std::uint64_t> reconfig_completions_ms;
};

struct AvailabilityStats {
    std::vector<PhaseStats> phases;  // one per degraded phase
    std::uint32_t total_timeouts = 0;
    std::uint32_t total_committed = 0;
    std::uint32_t total_reconfigs = 0;
};

// Per-degraded-phase aggregation over time-ordered records. Throws
// std::invalid_argument when records are not ordered by issue time.
// Reconfiguration completions are merged in by the experiment runner.
AvailabilityStats summarize(const std::vector<LatencyRecord>& records,
                            const FaultSchedule& degraded_phases);

struct ExperimentResult {
    std::vector<LatencyRecord> records;
    AvailabilityStats stats;
    std::vector<PhaseWindow> schedule;  // full steady/degraded grid
    FaultSchedule degraded_phases;
    std::uint64_t epoch_ms = 0;  // virtual time where the measured window begins
    bool all_hold = true;
    std::string violation_invariant;
};

ExperimentResult run_availability_experiment(Backend backend, const ExperimentParams& params);

}  // namespace loglessraft
