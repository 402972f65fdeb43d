#include "prilsim/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace prilsim {

std::string Strategy::name() const {
    switch (kind) {
        case StrategyKind::TschBaseline: return "tsch-baseline";
        case StrategyKind::Closed: return "closed";
        case StrategyKind::NOpen: return std::to_string(n) + "-open";
        case StrategyKind::AOpen: return "a-open";
    }
    return "?";
}

Strategy Strategy::parse(const std::string& text) {
    if (text == "tsch-baseline" || text == "baseline" || text == "tsch") return baseline();
    if (text == "closed") return closed();
    if (text == "a-open" || text == "A-open") return a_open();
    const auto pos = text.find("-open");
    if (pos != std::string::npos && pos > 0 && pos + 5 == text.size()) {
        try {
            const int n = std::stoi(text.substr(0, pos));
            if (n >= 1) return n_open(n);
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown strategy '" + text +
                                "' (expected tsch-baseline, closed, <n>-open, or a-open)");
}

void rx_apply_frame(RxCellState& state, const Strategy& strategy, std::int64_t x,
                    SleepCommand cmd) {
    if (!strategy.uses_sleep_commands()) return;
    if (cmd.t > 0 && x + cmd.t > state.disabled_until_x) {
        state.disabled_until_x = x + cmd.t;
    }
    for (int j = 1; j <= strategy.open_window(); ++j) {
        state.forced_open.insert(x + j);
    }
}

void rx_apply_cca(RxCellState& state, const Strategy& strategy, std::int64_t x, bool busy) {
    if (strategy.kind != StrategyKind::AOpen) return;
    if (busy) state.forced_open.insert(x + 1);
}

void tx_apply_ack(TxCellView& view, const Strategy& strategy, std::int64_t x, std::int64_t t) {
    if (!strategy.uses_sleep_commands()) return;
    if (t > 0 && x + t > view.disabled_until_x) {
        view.disabled_until_x = x + t;
    }
    for (int j = 1; j <= strategy.open_window(); ++j) {
        view.forced_open.insert(x + j);
    }
}

std::int64_t get_next_t(const AppFlow& flow, const TxQueue& queue, const CellOccurrence& current,
                        const ScheduleConfig& config, double resolved_phase) {
    if (!queue.empty()) return 0;
    // First generation instant not yet enqueued, i.e. the first one >= the
    // current cell time (generations strictly before it are in the queue).
    std::int64_t k = static_cast<std::int64_t>(
        std::ceil((current.time - resolved_phase) / flow.t_app));
    if (k < 0) k = 0;
    while (flow.generation_time(k, resolved_phase) < current.time) ++k;
    while (k > 0 && flow.generation_time(k - 1, resolved_phase) >= current.time) --k;
    const double next_gen = flow.generation_time(k, resolved_phase);
    if (next_gen < config.time_of(current.x)) return 0;
    return cells_until(config, current.x, next_gen);
}

double residual_miss_probability(double eps_f, double eps_a, int n) {
    if (eps_f < 0.0 || eps_f > 1.0 || eps_a < 0.0 || eps_a > 1.0)
        throw std::invalid_argument("probabilities must be in [0, 1]");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    return eps_a * std::pow(eps_f, n);
}

}  // namespace prilsim
