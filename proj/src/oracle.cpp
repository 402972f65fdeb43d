#include "prilsim/oracle.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prilsim {

namespace {

enum CounterIndex {
    kTxAttempts,
    kUseless,
    kRxFrames,
    kRxIdle,
    kRxCcaOnly,
    kAcksSent,
    kAcksReceived,
    kDrops,
    kDupDeliveries,
    kDeliveredFirst,
    kRxEnabled,
    kNumCounters,
};

constexpr std::array<const char*, kNumCounters> kCounterNames = {
    "tx_attempts",   "useless_attempts", "rx_frames", "rx_idle",
    "rx_cca_only",   "acks_sent",        "acks_received", "drops",
    "dup_deliveries", "delivered_first", "rx_enabled",
};

using CounterVec = std::array<double, kNumCounters>;

// Enumeration state, independent of the engine's data structures. Cell
// enable/disable at the receiver is a plain bitmask over future occurrences.
struct EnumState {
    int occ = 0;
    std::int64_t m = 0;  // attempts left after the current one
    std::int64_t t = 0;  // sleep value of the current attempt
    bool procedure_active = true;
    bool delivered_ever = false;
    std::int64_t closed_until = -1;
    std::uint32_t forced = 0;  // bit i: occurrence i kept enabled
    CounterVec counters{};
};

struct Accumulator {
    CounterVec mean{};
    CounterVec second_moment{};
};

class Enumerator {
  public:
    explicit Enumerator(const OracleScenario& s) : s_(s) {}

    Accumulator run() {
        EnumState init;
        init.m = s_.n_tries - 1;
        init.t = s_.strategy.uses_sleep_commands() ? s_.horizon - 1 : 0;
        walk(init, 1.0);
        return acc_;
    }

  private:
    bool rx_on(const EnumState& st, int i) const {
        if (!s_.strategy.uses_sleep_commands()) return true;
        return i > st.closed_until || (st.forced & (1u << i)) != 0;
    }

    int open_window() const { return s_.strategy.open_window(); }

    void close_and_open(EnumState& st, int i, std::int64_t t) const {
        // Sleep command decoded at occurrence i with value t.
        if (t > 0 && i + t > st.closed_until) st.closed_until = i + t;
        for (int j = 1; j <= open_window(); ++j) {
            if (i + j < 32) st.forced |= 1u << (i + j);
        }
    }

    void fail_step(EnumState& st) const {
        if (st.m > 0) {
            --st.m;
            --st.t;
        } else {
            st.counters[kDrops] += 1;
            st.procedure_active = false;
        }
    }

    void leaf(const EnumState& st, double prob) {
        for (int i = 0; i < kNumCounters; ++i) {
            acc_.mean[i] += prob * st.counters[i];
            acc_.second_moment[i] += prob * st.counters[i] * st.counters[i];
        }
    }

    void walk(EnumState st, double prob) {
        if (st.occ == s_.horizon) {
            leaf(st, prob);
            return;
        }
        const int i = st.occ;
        const bool listening = rx_on(st, i);
        const bool radiates = st.procedure_active;
        st.occ = i + 1;

        if (!radiates) {
            if (listening) {
                st.counters[kRxEnabled] += 1;
                if (s_.strategy.kind == StrategyKind::AOpen) {
                    st.counters[kRxCcaOnly] += 1;
                } else {
                    st.counters[kRxIdle] += 1;
                }
            }
            walk(st, prob);
            return;
        }

        if (!listening) {
            st.counters[kUseless] += 1;
            fail_step(st);
            walk(st, prob);
            return;
        }

        st.counters[kTxAttempts] += 1;
        st.counters[kRxEnabled] += 1;
        const bool has_cmd = s_.strategy.uses_sleep_commands() && st.t > 0;

        // Branch: frame lost on air.
        {
            EnumState lost = st;
            lost.counters[kRxIdle] += 1;
            if (s_.strategy.kind == StrategyKind::AOpen && i + 1 < 32) {
                lost.forced |= 1u << (i + 1);  // CCA hears the ongoing transmission
            }
            fail_step(lost);
            walk(lost, prob * s_.eps_f);
        }

        // Branch: frame delivered.
        EnumState del = st;
        del.counters[kRxFrames] += 1;
        if (del.delivered_ever) {
            del.counters[kDupDeliveries] += 1;
        } else {
            del.counters[kDeliveredFirst] += 1;
        }
        del.counters[kAcksSent] += 1;
        if (has_cmd) close_and_open(del, i, st.t);
        if (s_.strategy.kind == StrategyKind::AOpen && i + 1 < 32) {
            del.forced |= 1u << (i + 1);
        }
        del.delivered_ever = true;

        {
            EnumState acked = del;
            acked.counters[kAcksReceived] += 1;
            acked.procedure_active = false;
            walk(acked, prob * (1.0 - s_.eps_f) * (1.0 - s_.eps_a));
        }
        {
            EnumState nacked = del;
            fail_step(nacked);
            walk(nacked, prob * (1.0 - s_.eps_f) * s_.eps_a);
        }
    }

    OracleScenario s_;
    Accumulator acc_{};
};

CounterVec counters_of(const Counters& c) {
    CounterVec v{};
    v[kTxAttempts] = static_cast<double>(c.tx_attempts);
    v[kUseless] = static_cast<double>(c.useless_attempts);
    v[kRxFrames] = static_cast<double>(c.rx_frames);
    v[kRxIdle] = static_cast<double>(c.rx_idle);
    v[kRxCcaOnly] = static_cast<double>(c.rx_cca_only);
    v[kAcksSent] = static_cast<double>(c.acks_sent);
    v[kAcksReceived] = static_cast<double>(c.acks_received);
    v[kDrops] = static_cast<double>(c.drops);
    v[kDupDeliveries] = static_cast<double>(c.dup_deliveries);
    v[kDeliveredFirst] = static_cast<double>(c.delivered_first);
    v[kRxEnabled] = static_cast<double>(c.rx_enabled);
    return v;
}

}  // namespace

void OracleScenario::validate() const {
    if (horizon < 1 || horizon > 8)
        throw std::invalid_argument("oracle horizon must be in [1, 8]");
    if (n_tries < 1 || n_tries > 4)
        throw std::invalid_argument("oracle n_tries must be in [1, 4]");
    if (eps_f < 0.0 || eps_f > 1.0 || eps_a < 0.0 || eps_a > 1.0)
        throw std::invalid_argument("probabilities must be in [0, 1]");
}

RunConfig oracle_run_config(const OracleScenario& scenario, std::uint64_t seed) {
    scenario.validate();
    RunConfig cfg;
    cfg.schedule.t_slot = 0.1;
    cfg.schedule.n_slot = 10;
    cfg.schedule.slot_offset = 5;  // occurrence x sits at 0.5 + x seconds
    cfg.flow.t_app = scenario.horizon - 0.1;
    cfg.flow.phase = 0.2;  // single packet ready before occurrence 0
    cfg.strategy = scenario.strategy;
    cfg.loss.eps_f = scenario.eps_f;
    cfg.loss.eps_a = scenario.eps_a;
    cfg.loss.seed = seed;
    cfg.n_tries = scenario.n_tries;
    cfg.duration = scenario.horizon;
    return cfg;
}

std::vector<OracleCounterStat> enumerate_expectation(const OracleScenario& scenario) {
    scenario.validate();
    const Accumulator acc = Enumerator(scenario).run();
    std::vector<OracleCounterStat> stats;
    stats.reserve(kNumCounters);
    for (int i = 0; i < kNumCounters; ++i) {
        OracleCounterStat s;
        s.name = kCounterNames[static_cast<std::size_t>(i)];
        s.mean = acc.mean[i];
        s.variance = acc.second_moment[i] - acc.mean[i] * acc.mean[i];
        if (s.variance < 0.0) s.variance = 0.0;  // rounding
        stats.push_back(std::move(s));
    }
    return stats;
}

OracleComparison oracle_compare(const OracleScenario& scenario, std::uint64_t trials,
                                std::uint64_t base_seed) {
    scenario.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const auto expected = enumerate_expectation(scenario);

    CounterVec sums{};
    for (std::uint64_t i = 0; i < trials; ++i) {
        const RunResult result = run(oracle_run_config(scenario, base_seed + i));
        const CounterVec v = counters_of(result.counters);
        for (int j = 0; j < kNumCounters; ++j) sums[j] += v[j];
    }

    OracleComparison cmp;
    cmp.scenario = scenario;
    cmp.trials = trials;
    cmp.pass = true;
    for (int j = 0; j < kNumCounters; ++j) {
        OracleCounterComparison c;
        c.name = expected[static_cast<std::size_t>(j)].name;
        c.expected = expected[static_cast<std::size_t>(j)].mean;
        c.simulated = sums[j] / static_cast<double>(trials);
        const double variance = expected[static_cast<std::size_t>(j)].variance;
        c.sigma = std::sqrt(variance / static_cast<double>(trials));
        if (c.sigma > 0.0) {
            c.z = (c.simulated - c.expected) / c.sigma;
            c.pass = std::abs(c.z) <= 3.0;
        } else {
            c.z = 0.0;
            c.pass = std::abs(c.simulated - c.expected) < 1e-12;
        }
        cmp.pass = cmp.pass && c.pass;
        cmp.counters.push_back(std::move(c));
    }
    return cmp;
}

std::string format_oracle_report(const OracleComparison& cmp) {
    std::ostringstream out;
    out.precision(6);
    out << "strategy = " << cmp.scenario.strategy.name() << "\n";
    out << "horizon = " << cmp.scenario.horizon << "\n";
    out << "n_tries = " << cmp.scenario.n_tries << "\n";
    out << "eps_f = " << cmp.scenario.eps_f << "\n";
    out << "eps_a = " << cmp.scenario.eps_a << "\n";
    out << "trials = " << cmp.trials << "\n";
    for (const auto& c : cmp.counters) {
        out << c.name << ": expected=" << c.expected << " simulated=" << c.simulated
            << " z=" << c.z << " " << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    out << "verdict = " << (cmp.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace prilsim
