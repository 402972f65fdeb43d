#include "prilsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prilsim {

void EnergyModel::validate() const {
    if (e_tx_attempt < 0.0 || e_rx_exchange < 0.0 || e_idle < 0.0)
        throw std::invalid_argument("energy constants must be >= 0");
    if (e_cca && *e_cca < 0.0) throw std::invalid_argument("e_cca must be >= 0");
    if (e_ack_wait && *e_ack_wait < 0.0) throw std::invalid_argument("e_ack_wait must be >= 0");
}

PowerBreakdown compute_power(const Counters& c, const EnergyModel& energy, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
    PowerBreakdown p;
    const double attempts = static_cast<double>(c.tx_attempts + c.useless_attempts);
    p.p_listen_ntx = 0.0;
    if (energy.e_ack_wait) {
        const double unconfirmed = attempts - static_cast<double>(c.acks_received);
        p.p_listen_ntx = unconfirmed * (*energy.e_ack_wait) / duration;
    }
    p.p_ntx = attempts * energy.e_tx_attempt / duration + p.p_listen_ntx;
    p.p_listen_nrx = (static_cast<double>(c.rx_idle) * energy.e_idle +
                      static_cast<double>(c.rx_cca_only) * energy.cca()) /
                     duration;
    p.p_nrx_nonlisten = static_cast<double>(c.rx_frames) * energy.e_rx_exchange / duration;
    p.p_nrx = p.p_listen_nrx + p.p_nrx_nonlisten;
    p.p_total = p.p_ntx + p.p_nrx;
    return p;
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double p) {
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

}  // namespace

std::optional<LatencyStats> compute_latency(std::vector<double> samples) {
    if (samples.empty()) return std::nullopt;
    std::sort(samples.begin(), samples.end());
    LatencyStats s;
    s.count = samples.size();
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.stddev = samples.size() > 1
                   ? std::sqrt(ss / static_cast<double>(samples.size() - 1))
                   : 0.0;
    s.p99 = nearest_rank(samples, 0.99);
    s.p999 = nearest_rank(samples, 0.999);
    s.p9999 = nearest_rank(samples, 0.9999);
    s.max = samples.back();
    return s;
}

}  // namespace prilsim
