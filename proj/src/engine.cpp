#include "prilsim/engine.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace prilsim {

void RunConfig::validate() const {
    schedule.validate();
    loss.validate();
    energy.validate();
    if (!(flow.t_app > 0.0)) throw std::invalid_argument("t_app must be > 0");
    if (flow.phase && (*flow.phase < 0.0 || *flow.phase >= schedule.slotframe_interval()))
        throw std::invalid_argument("phase must be in [0, T_sfr)");
    if (n_tries < 1) throw std::invalid_argument("n_tries must be >= 1");
    if (!(duration >= flow.t_app))
        throw std::invalid_argument("duration must be >= t_app");
    if (strategy.kind == StrategyKind::NOpen && strategy.n < 1)
        throw std::invalid_argument("n must be >= 1 for n-open");
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::TxAttempt: return "tx_attempt";
        case EventKind::RxFrame: return "rx_frame";
        case EventKind::RxIdle: return "rx_idle";
        case EventKind::RxCcaExtend: return "rx_cca_extend";
        case EventKind::UselessAttempt: return "useless_attempt";
        case EventKind::AckOk: return "ack_ok";
        case EventKind::AckLost: return "ack_lost";
        case EventKind::FrameLost: return "frame_lost";
        case EventKind::Drop: return "drop";
        case EventKind::DupDelivery: return "dup_delivery";
        case EventKind::SleepApplied: return "sleep_applied";
    }
    return "?";
}

std::string format_event(const EventRecord& r) {
    return std::to_string(r.asn) + "\t" + std::to_string(r.x) + "\t" + r.side + "\t" +
           event_kind_name(r.kind) + "\t" + std::to_string(r.packet_id);
}

namespace {

// State of the transmission procedure currently occupying the sender.
struct Inflight {
    Packet pkt;
    std::int64_t m = 0;  // remaining attempts after the current one
    std::int64_t t = 0;  // sleep value carried by the current attempt
    std::int64_t sleep_t0 = 0;
    int attempts = 0;
    bool delivered_ever = false;
    std::int64_t phi = 0;
    bool phi_counted = false;
    std::int64_t useless = 0;
    bool first_attempt_delivered = false;
    bool first_delivery_ack_lost = false;
    std::int64_t t_at_first_delivery = 0;
    std::int64_t residual_watch = -1;  // countdown of frame losses after an unACKed delivery
};

PacketTrace make_trace(const Inflight& fl, bool acked, bool dropped) {
    PacketTrace tr;
    tr.id = fl.pkt.id;
    tr.gen_time = fl.pkt.gen_time;
    tr.attempts = fl.attempts;
    tr.phi = fl.phi;
    tr.first_attempt_delivered = fl.first_attempt_delivered;
    tr.first_delivery_ack_lost = fl.first_delivery_ack_lost;
    tr.sleep_t0 = fl.sleep_t0;
    tr.t_at_first_delivery = fl.t_at_first_delivery;
    tr.useless = fl.useless;
    tr.delivered = fl.delivered_ever;
    tr.acked = acked;
    tr.dropped = dropped;
    return tr;
}

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& options) {
    config.validate();

    const ScheduleConfig& sched = config.schedule;
    const Strategy& strategy = config.strategy;
    LossChannel channel(config.loss);
    const double t_sfr = sched.slotframe_interval();
    const double phase =
        config.flow.phase ? *config.flow.phase
                          : detail::uniform01(config.loss.seed, 0, 3) * t_sfr;
    const double duration = config.duration;

    RxCellState rx_state;
    TxCellView tx_view;
    TxQueue queue;
    Counters c;
    std::vector<double> latency_samples;
    std::optional<Inflight> fl;
    std::int64_t next_gen = 0;

    const auto emit = [&](std::int64_t x, char side, EventKind kind, std::int64_t pkt) {
        if (options.trace) options.trace({sched.asn_of(x), x, side, kind, pkt});
    };
    const auto finish = [&](bool acked, bool dropped) {
        if (options.packet_traces) options.packet_traces->push_back(make_trace(*fl, acked, dropped));
        fl.reset();
    };

    for (std::int64_t x = 0;; ++x) {
        const double tau = sched.time_of(x);
        if (tau >= duration) break;
        rx_state.prune(x);
        tx_view.prune(x);

        // Packets generated strictly before this slot are available for it.
        while (config.flow.generation_time(next_gen, phase) < tau) {
            queue.push_back({next_gen, config.flow.generation_time(next_gen, phase)});
            ++next_gen;
            ++c.generated;
            if (queue.size() > c.max_queue_depth) c.max_queue_depth = queue.size();
        }

        bool radiates = false;
        if (!fl && !queue.empty() && tx_view.enabled(x)) {
            Inflight nf;
            nf.pkt = queue.front();
            queue.pop_front();
            nf.m = config.n_tries - 1;
            nf.t = strategy.uses_sleep_commands()
                       ? get_next_t(config.flow, queue, occurrence_at(sched, x), sched, phase)
                       : 0;
            nf.sleep_t0 = nf.t;
            fl = nf;
            radiates = true;
        } else if (fl) {
            radiates = true;  // retries radiate at every subsequent occurrence
        }

        const bool rx_on = rx_state.enabled(x);
        bool delivered = false;
        bool ack_ok = false;
        bool has_cmd = false;

        if (radiates) {
            ++fl->attempts;
            has_cmd = strategy.uses_sleep_commands() && fl->t > 0;
            if (!rx_on) {
                ++c.useless_attempts;
                ++fl->useless;
                emit(x, 'T', EventKind::UselessAttempt, fl->pkt.id);
            } else {
                ++c.tx_attempts;
                emit(x, 'T', EventKind::TxAttempt, fl->pkt.id);
                const AttemptOutcome out = channel.at(static_cast<std::uint64_t>(x));
                delivered = out.frame_delivered;
                ack_ok = delivered && out.ack_delivered;
            }
        }

        if (rx_on) {
            ++c.rx_enabled;
            if (delivered) {
                ++c.rx_frames;
                emit(x, 'R', EventKind::RxFrame, fl->pkt.id);
                if (fl->delivered_ever) {
                    ++c.dup_deliveries;
                    emit(x, 'R', EventKind::DupDelivery, fl->pkt.id);
                } else {
                    ++c.delivered_first;
                    latency_samples.push_back(tau + sched.t_slot - fl->pkt.gen_time);
                }
                ++c.acks_sent;
                if (has_cmd) {
                    rx_apply_frame(rx_state, strategy, x, SleepCommand{fl->t});
                    emit(x, 'R', EventKind::SleepApplied, fl->pkt.id);
                }
            } else if (radiates) {
                // Energy on air but the frame-loss draw failed: no full decode.
                ++c.rx_idle;
                emit(x, 'R', EventKind::RxIdle, fl->pkt.id);
            } else if (strategy.kind == StrategyKind::AOpen) {
                ++c.rx_cca_only;
                emit(x, 'R', EventKind::RxIdle, -1);
            } else {
                ++c.rx_idle;
                emit(x, 'R', EventKind::RxIdle, -1);
            }
            if (strategy.kind == StrategyKind::AOpen && radiates &&
                channel.cca_observe(true, static_cast<std::uint64_t>(x))) {
                rx_apply_cca(rx_state, strategy, x, true);
                emit(x, 'R', EventKind::RxCcaExtend, fl->pkt.id);
            }
        }

        if (radiates) {
            if (strategy.kind == StrategyKind::NOpen) {
                if (delivered) {
                    fl->residual_watch = -1;
                    if (fl->m >= strategy.n) {
                        ++c.residual_opportunities;
                        if (!ack_ok) fl->residual_watch = strategy.n;
                    }
                } else if (fl->residual_watch > 0) {
                    if (rx_on) {
                        if (--fl->residual_watch == 0) {
                            ++c.residual_events;
                            fl->residual_watch = -1;
                        }
                    } else {
                        fl->residual_watch = -1;
                    }
                }
            }

            if (delivered && ack_ok) {
                ++c.acks_received;
                emit(x, 'T', EventKind::AckOk, fl->pkt.id);
                if (!fl->delivered_ever) {
                    fl->first_attempt_delivered = (fl->attempts == 1);
                    fl->t_at_first_delivery = fl->t;
                }
                fl->delivered_ever = true;
                tx_apply_ack(tx_view, strategy, x, fl->t);
                finish(/*acked=*/true, /*dropped=*/false);
            } else {
                if (delivered) {
                    emit(x, 'T', EventKind::AckLost, fl->pkt.id);
                    if (!fl->delivered_ever) {
                        fl->first_attempt_delivered = (fl->attempts == 1);
                        fl->first_delivery_ack_lost = true;
                        fl->t_at_first_delivery = fl->t;
                        if (!fl->phi_counted) {
                            c.early_failures_phi += static_cast<std::uint64_t>(fl->phi);
                            fl->phi_counted = true;
                        }
                    }
                    fl->delivered_ever = true;
                } else if (rx_on) {
                    if (!fl->delivered_ever) ++fl->phi;
                    emit(x, 'T', EventKind::FrameLost, fl->pkt.id);
                }
                if (fl->m > 0) {
                    --fl->m;
                    --fl->t;
                } else {
                    ++c.drops;
                    emit(x, 'T', EventKind::Drop, fl->pkt.id);
                    if (!fl->delivered_ever) ++c.undelivered_drops;
                    finish(/*acked=*/false, /*dropped=*/true);
                }
            }
        }
    }

    // Generations falling after the last occurrence but inside the run.
    while (config.flow.generation_time(next_gen, phase) < duration) {
        queue.push_back({next_gen, config.flow.generation_time(next_gen, phase)});
        ++next_gen;
        ++c.generated;
        if (queue.size() > c.max_queue_depth) c.max_queue_depth = queue.size();
    }
    c.in_queue_end = queue.size() + (fl ? 1u : 0u);
    if (fl) finish(/*acked=*/false, /*dropped=*/false);

    RunResult result;
    result.config = config;
    result.seed = config.loss.seed;
    result.phase = phase;
    result.counters = c;
    result.latency = compute_latency(std::move(latency_samples));
    result.power = compute_power(c, config.energy, duration);
    return result;
}

std::vector<RunResult> run_campaign(const std::vector<RunConfig>& points,
                                    const std::vector<std::uint64_t>& seeds, int jobs) {
    if (points.empty()) throw std::invalid_argument("empty grid");
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    std::vector<RunConfig> flat;
    flat.reserve(points.size() * seeds.size());
    for (const auto& point : points) {
        for (const auto seed : seeds) {
            RunConfig cfg = point;
            cfg.loss.seed = seed;
            flat.push_back(cfg);
        }
    }
    std::vector<RunResult> results(flat.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < flat.size(); ++i) results[i] = run(flat[i]);
        return results;
    }
    std::atomic<std::size_t> next{0};
    const unsigned n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), flat.size());
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= flat.size()) return;
                results[i] = run(flat[i]);
            }
        });
    }
    for (auto& worker : workers) worker.join();
    return results;
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::EpsF: return "eps_f";
        case SweepAxis::EpsA: return "eps_a";
        case SweepAxis::Joint: return "joint";
        case SweepAxis::NTries: return "n_tries";
        case SweepAxis::TApp: return "t_app";
    }
    return "?";
}

SweepAxis parse_sweep_axis(const std::string& text) {
    if (text == "eps_f") return SweepAxis::EpsF;
    if (text == "eps_a") return SweepAxis::EpsA;
    if (text == "joint") return SweepAxis::Joint;
    if (text == "n_tries") return SweepAxis::NTries;
    if (text == "t_app") return SweepAxis::TApp;
    throw std::invalid_argument("unknown sweep axis '" + text +
                                "' (expected eps_f, eps_a, joint, n_tries, or t_app)");
}

std::vector<RunConfig> sweep_points(const RunConfig& base, SweepAxis axis,
                                    const std::vector<double>& values,
                                    const std::vector<Strategy>& strategies) {
    if (values.empty()) throw std::invalid_argument("empty grid");
    if (strategies.empty()) throw std::invalid_argument("empty strategy list");
    std::vector<RunConfig> points;
    points.reserve(values.size() * strategies.size());
    for (const double value : values) {
        for (const Strategy& strategy : strategies) {
            RunConfig cfg = base;
            cfg.strategy = strategy;
            switch (axis) {
                case SweepAxis::EpsF:
                    cfg.loss.eps_f = value;
                    break;
                case SweepAxis::EpsA:
                    cfg.loss.eps_a = value;
                    break;
                case SweepAxis::Joint: {
                    if (!(base.loss.eps_f > 0.0))
                        throw std::invalid_argument("joint sweep needs base eps_f > 0");
                    cfg.loss.eps_f = value;
                    cfg.loss.eps_a = value * base.loss.eps_a / base.loss.eps_f;
                    break;
                }
                case SweepAxis::NTries:
                    cfg.n_tries = static_cast<int>(std::llround(value));
                    break;
                case SweepAxis::TApp:
                    cfg.flow.t_app = value;
                    break;
            }
            points.push_back(cfg);
        }
    }
    return points;
}

}  // namespace prilsim
