#include "prilsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace prilsim {

void ScheduleConfig::validate() const {
    if (!(t_slot > 0.0)) throw std::invalid_argument("t_slot must be > 0");
    if (n_slot < 1) throw std::invalid_argument("n_slot must be >= 1");
    if (slot_offset < 0 || slot_offset >= n_slot)
        throw std::invalid_argument("slot_offset must be in [0, n_slot)");
    if (capacity_c < 1) throw std::invalid_argument("capacity_c must be >= 1");
    if (capacity_c > n_slot) throw std::invalid_argument("capacity_c must be <= n_slot");
    if (n_ch < 1) throw std::invalid_argument("n_ch must be >= 1");
}

namespace {

// Slot offsets of the capacity_c occurrences inside one slotframe, ascending.
std::vector<std::int64_t> frame_offsets(const ScheduleConfig& c) {
    std::vector<std::int64_t> offs;
    offs.reserve(static_cast<std::size_t>(c.capacity_c));
    for (std::int64_t j = 0; j < c.capacity_c; ++j) {
        offs.push_back((c.slot_offset + j * c.n_slot / c.capacity_c) % c.n_slot);
    }
    std::sort(offs.begin(), offs.end());
    return offs;
}

}  // namespace

std::int64_t ScheduleConfig::asn_of(std::int64_t x) const {
    if (capacity_c == 1) return x * n_slot + slot_offset;
    const auto offs = frame_offsets(*this);
    const std::int64_t frame = x / capacity_c;
    const std::int64_t j = x % capacity_c;
    return frame * n_slot + offs[static_cast<std::size_t>(j)];
}

double ScheduleConfig::time_of(std::int64_t x) const {
    return static_cast<double>(asn_of(x)) * t_slot;
}

CellOccurrence occurrence_at(const ScheduleConfig& config, std::int64_t x) {
    CellOccurrence occ;
    occ.x = x;
    occ.asn = config.asn_of(x);
    occ.time = config.time_of(x);
    return occ;
}

CellOccurrence occurrence_for_time(const ScheduleConfig& config, double t) {
    if (t < 0.0) throw std::invalid_argument("occurrence_for_time: t must be >= 0");
    // Arithmetic guess, then adjust with the exact same time_of() used
    // everywhere else so strict comparisons stay consistent.
    const double t_sfr = config.slotframe_interval();
    std::int64_t x = static_cast<std::int64_t>(std::floor(t / t_sfr)) * config.capacity_c;
    if (x < 0) x = 0;
    while (x > 0 && config.time_of(x - 1) > t) --x;
    while (config.time_of(x) <= t) ++x;
    return occurrence_at(config, x);
}

std::int64_t cells_until(const ScheduleConfig& config, std::int64_t from_x, double deadline) {
    if (deadline < config.time_of(from_x))
        throw std::invalid_argument("cells_until: deadline precedes from_x");
    // Largest x with time(x) < deadline.
    const double t_sfr = config.slotframe_interval();
    std::int64_t x = static_cast<std::int64_t>(std::floor(deadline / t_sfr) + 1.0) * config.capacity_c;
    if (x < from_x) x = from_x;
    while (config.time_of(x) < deadline) ++x;
    while (x > from_x && config.time_of(x - 1) >= deadline) --x;
    // x is now the first occurrence with time >= deadline.
    return x - 1 - from_x > 0 ? x - 1 - from_x : 0;
}

}  // namespace prilsim
