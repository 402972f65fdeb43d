#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>

namespace prilsim {

// Slotframe geometry of the single reserved link.
struct ScheduleConfig {
    double t_slot = 0.02;          // seconds per slot
    std::int64_t n_slot = 101;     // slots per slotframe
    std::int64_t slot_offset = 0;  // position of the reserved cell, [0, n_slot)
    std::int64_t capacity_c = 1;   // reserved cell occurrences per slotframe
    std::int64_t n_ch = 16;        // channels (informational)

    double slotframe_interval() const { return static_cast<double>(n_slot) * t_slot; }

    void validate() const;

    // ASN and wall-clock time of the x-th reserved occurrence.
    std::int64_t asn_of(std::int64_t x) const;
    double time_of(std::int64_t x) const;
};

struct Asn {
    std::int64_t value = 0;
};

// One concrete repetition of the reserved cell.
struct CellOccurrence {
    std::int64_t x = 0;
    std::int64_t asn = 0;
    double time = 0.0;  // seconds from simulation start (slot start)
};

CellOccurrence occurrence_at(const ScheduleConfig& config, std::int64_t x);

// Earliest occurrence with time strictly greater than t.
CellOccurrence occurrence_for_time(const ScheduleConfig& config, double t);

// Count of occurrences with index > from_x and time < deadline.
std::int64_t cells_until(const ScheduleConfig& config, std::int64_t from_x, double deadline);

// Periodic application flow. Generation instants are phase + k * t_app,
// computed directly from k so long runs cannot drift.
struct AppFlow {
    double t_app = 60.0;
    // When unset the engine draws the phase uniformly in [0, T_sfr) from the
    // run seed.
    std::optional<double> phase;

    double generation_time(std::int64_t k, double resolved_phase) const {
        return resolved_phase + static_cast<double>(k) * t_app;
    }
};

struct Packet {
    std::int64_t id = 0;
    double gen_time = 0.0;
};

using TxQueue = std::deque<Packet>;

}  // namespace prilsim
