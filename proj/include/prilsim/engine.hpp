#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prilsim/channel.hpp"
#include "prilsim/metrics.hpp"
#include "prilsim/schedule.hpp"
#include "prilsim/strategy.hpp"

namespace prilsim {

struct RunConfig {
    ScheduleConfig schedule;
    AppFlow flow;
    Strategy strategy;
    LossModel loss;
    int n_tries = 16;       // maximum transmission attempts (retry limit + 1)
    double duration = 60.0; // simulated seconds
    EnergyModel energy;

    void validate() const;
};

enum class EventKind {
    TxAttempt,
    RxFrame,
    RxIdle,
    RxCcaExtend,
    UselessAttempt,
    AckOk,
    AckLost,
    FrameLost,
    Drop,
    DupDelivery,
    SleepApplied,
};

const char* event_kind_name(EventKind kind);

struct EventRecord {
    std::int64_t asn = 0;
    std::int64_t x = 0;
    char side = 'T';  // 'T' sender, 'R' receiver
    EventKind kind = EventKind::TxAttempt;
    std::int64_t packet_id = -1;
};

// asn, x, side, kind, packet_id separated by tabs.
std::string format_event(const EventRecord& record);

// One record per completed (or run-truncated) transmission procedure;
// used by trace-level property tests.
struct PacketTrace {
    std::int64_t id = -1;
    double gen_time = 0.0;
    int attempts = 0;
    std::int64_t phi = 0;  // on-air frame losses before the first delivery
    bool first_attempt_delivered = false;
    bool first_delivery_ack_lost = false;
    std::int64_t sleep_t0 = 0;              // sleep value of the first attempt
    std::int64_t t_at_first_delivery = 0;
    std::int64_t useless = 0;
    bool delivered = false;
    bool acked = false;
    bool dropped = false;
};

struct RunOptions {
    std::function<void(const EventRecord&)> trace;
    std::vector<PacketTrace>* packet_traces = nullptr;
};

struct RunResult {
    RunConfig config;
    std::uint64_t seed = 0;
    double phase = 0.0;  // resolved waiting-delay phase, seconds
    Counters counters;
    std::optional<LatencyStats> latency;
    PowerBreakdown power;
};

RunResult run(const RunConfig& config, const RunOptions& options = {});

// One result per (point, seed), point-major order, reproducible regardless
// of the number of worker threads.
std::vector<RunResult> run_campaign(const std::vector<RunConfig>& points,
                                    const std::vector<std::uint64_t>& seeds, int jobs = 1);

enum class SweepAxis { EpsF, EpsA, Joint, NTries, TApp };

const char* sweep_axis_name(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& text);

// Grid points for one axis crossed with the strategy list. The joint axis
// interprets each value as eps_f and scales eps_a by the base eps_a/eps_f
// ratio (the proportional law through the default condition).
std::vector<RunConfig> sweep_points(const RunConfig& base, SweepAxis axis,
                                    const std::vector<double>& values,
                                    const std::vector<Strategy>& strategies);

}  // namespace prilsim
