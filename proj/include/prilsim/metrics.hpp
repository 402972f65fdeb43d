#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace prilsim {

// Per-event energy constants (joules). e_tx_attempt lumps frame
// transmission plus the ACK wait/reception and is charged whether or not
// the ACK arrives; with that lumping the sender has no separate idle
// listening term. e_ack_wait, when set, splits out the ACK-wait cost of
// unconfirmed attempts into p_listen_ntx for calibration studies.
struct EnergyModel {
    double e_tx_attempt = 485.7e-6;
    double e_rx_exchange = 651.0e-6;
    double e_idle = 303.3e-6;
    std::optional<double> e_cca;       // defaults to e_idle
    std::optional<double> e_ack_wait;  // defaults to 0 (lumped into e_tx_attempt)

    double cca() const { return e_cca ? *e_cca : e_idle; }
    void validate() const;
};

struct Counters {
    // Sender attempts into occurrences the receiver was listening in.
    std::uint64_t tx_attempts = 0;
    // Sender attempts into occurrences disabled at the receiver.
    std::uint64_t useless_attempts = 0;
    std::uint64_t acks_sent = 0;
    std::uint64_t acks_received = 0;
    std::uint64_t rx_frames = 0;  // decoded frames, duplicates included
    std::uint64_t rx_idle = 0;    // listening occurrences without a decoded frame
    std::uint64_t rx_cca_only = 0;  // a-open occurrences resolved by a clear CCA
    std::uint64_t drops = 0;        // retry budget exhausted without confirmation
    std::uint64_t dup_deliveries = 0;
    std::uint64_t early_failures_phi = 0;  // frame losses preceding an unACKed delivery
    std::uint64_t max_queue_depth = 0;

    // Accounting support.
    std::uint64_t generated = 0;
    std::uint64_t delivered_first = 0;
    std::uint64_t undelivered_drops = 0;  // drops of packets never decoded at RX
    std::uint64_t in_queue_end = 0;
    std::uint64_t rx_enabled = 0;  // occurrences the receiver listened in

    // n-open residual-miss bookkeeping (deliveries with >= n retries left,
    // and how many of those saw the ACK plus the next n frames all lost).
    std::uint64_t residual_opportunities = 0;
    std::uint64_t residual_events = 0;
};

// All fields in watts, derived exactly from Counters x EnergyModel / duration.
struct PowerBreakdown {
    double p_total = 0.0;
    double p_ntx = 0.0;
    double p_nrx = 0.0;
    double p_listen_ntx = 0.0;
    double p_listen_nrx = 0.0;
    double p_nrx_nonlisten = 0.0;
};

PowerBreakdown compute_power(const Counters& counters, const EnergyModel& energy,
                             double duration);

struct LatencyStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double p99 = 0.0;
    double p999 = 0.0;
    double p9999 = 0.0;
    double max = 0.0;
};

// Empty input means no delivered packets and yields nullopt. Percentiles use
// nearest-rank: the value at index ceil(p * N) of the sorted samples, 1-based.
std::optional<LatencyStats> compute_latency(std::vector<double> samples);

}  // namespace prilsim
