#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "prilsim/schedule.hpp"

namespace prilsim {

enum class StrategyKind {
    TschBaseline,  // plain TSCH, no sleep commands
    Closed,
    NOpen,  // n >= 1; 1-open and 2-open are n = 1, n = 2
    AOpen,
};

struct Strategy {
    StrategyKind kind = StrategyKind::Closed;
    int n = 1;  // meaningful for NOpen only

    bool uses_sleep_commands() const { return kind != StrategyKind::TschBaseline; }
    // Cells forced open right after a sleep command takes effect.
    int open_window() const {
        switch (kind) {
            case StrategyKind::NOpen: return n;
            case StrategyKind::AOpen: return 1;
            default: return 0;
        }
    }

    std::string name() const;
    static Strategy parse(const std::string& text);  // throws std::invalid_argument

    static Strategy baseline() { return {StrategyKind::TschBaseline, 1}; }
    static Strategy closed() { return {StrategyKind::Closed, 1}; }
    static Strategy n_open(int n) { return {StrategyKind::NOpen, n}; }
    static Strategy a_open() { return {StrategyKind::AOpen, 1}; }
};

// A frame with t = 0 carries no sleep command.
struct SleepCommand {
    std::int64_t t = 0;
};

// Enable/disable bookkeeping over future occurrences. Used both for the
// receiver's real state and for the sender's belief about it; the two
// diverge exactly when an ACK is lost.
struct CellStateView {
    std::int64_t disabled_until_x = -1;
    std::set<std::int64_t> forced_open;

    bool enabled(std::int64_t x) const {
        return x > disabled_until_x || forced_open.count(x) != 0;
    }
    // Drop forced entries below x; past occurrences no longer matter.
    void prune(std::int64_t x) {
        while (!forced_open.empty() && *forced_open.begin() < x) {
            forced_open.erase(forced_open.begin());
        }
    }
};

using RxCellState = CellStateView;
using TxCellView = CellStateView;

// Receiver reaction to a decoded frame carrying cmd in occurrence x.
void rx_apply_frame(RxCellState& state, const Strategy& strategy, std::int64_t x,
                    SleepCommand cmd);

// A-open only: a busy CCA in occurrence x keeps x+1 enabled.
void rx_apply_cca(RxCellState& state, const Strategy& strategy, std::int64_t x, bool busy);

// Sender bookkeeping on ACK reception for the attempt in occurrence x that
// carried sleep value t. Never invoked on ACK loss.
void tx_apply_ack(TxCellView& view, const Strategy& strategy, std::int64_t x, std::int64_t t);

// Sleep value for the frame being dequeued at `current`: 0 while backlog
// remains, otherwise the number of reserved occurrences lying strictly
// between the current cell and the next application generation instant.
std::int64_t get_next_t(const AppFlow& flow, const TxQueue& queue, const CellOccurrence& current,
                        const ScheduleConfig& config, double resolved_phase);

// Probability that an ACK loss is followed by n consecutive data-frame
// losses, exceeding the n-open recovery window: eps_a * eps_f^n.
double residual_miss_probability(double eps_f, double eps_a, int n);

}  // namespace prilsim
