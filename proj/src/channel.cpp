#include "prilsim/channel.hpp"

#include <stdexcept>

namespace prilsim {

void LossModel::validate() const {
    if (eps_f < 0.0 || eps_f > 1.0) throw std::invalid_argument("eps_f must be in [0, 1]");
    if (eps_a < 0.0 || eps_a > 1.0) throw std::invalid_argument("eps_a must be in [0, 1]");
    if (cca_detection < 0.0 || cca_detection > 1.0)
        throw std::invalid_argument("cca_detection must be in [0, 1]");
}

namespace detail {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ (lane * 0x9e3779b97f4a7c15ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

LossChannel::LossChannel(LossModel model) : model_(model) { model_.validate(); }

AttemptOutcome LossChannel::at(std::uint64_t index) const {
    AttemptOutcome out;
    out.frame_delivered = detail::uniform01(model_.seed, index, 0) >= model_.eps_f;
    if (out.frame_delivered) {
        out.ack_delivered = detail::uniform01(model_.seed, index, 1) >= model_.eps_a;
    }
    return out;
}

AttemptOutcome LossChannel::draw() { return at(counter_++); }

bool LossChannel::cca_observe(bool tx_active, std::uint64_t index) const {
    if (!tx_active) return false;
    if (model_.cca_detection >= 1.0) return true;
    return detail::uniform01(model_.seed, index, 2) < model_.cca_detection;
}

}  // namespace prilsim
