#pragma once

#include <cstdint>

namespace prilsim {

// Independent Bernoulli losses for data and ACK frames on the link. The
// same pair applies to both directions.
struct LossModel {
    double eps_f = 0.126;        // data-frame loss probability
    double eps_a = 0.080;        // ACK-frame loss probability
    std::uint64_t seed = 1;
    double cca_detection = 1.0;  // sensitivity knob; 1.0 = perfect

    void validate() const;
};

struct AttemptOutcome {
    bool frame_delivered = false;
    // Sampled only when frame_delivered; an unreceived frame generates no ACK.
    bool ack_delivered = false;
};

namespace detail {
// Counter-based uniform draw in [0, 1). Fully determined by (seed, index,
// lane), so outcomes are addressable per cell occurrence and identical seeds
// give identical channel conditions regardless of which cells are visited.
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t lane);
}  // namespace detail

class LossChannel {
  public:
    explicit LossChannel(LossModel model);

    // Sequential draw (advances an internal counter).
    AttemptOutcome draw();

    // Outcome addressed by cell index; does not consume sequential state.
    AttemptOutcome at(std::uint64_t index) const;

    // Perfect activity detection by default; the knob only matters when
    // cca_detection < 1.
    bool cca_observe(bool tx_active, std::uint64_t index) const;

    const LossModel& model() const { return model_; }

  private:
    LossModel model_;
    std::uint64_t counter_ = 0;
};

inline AttemptOutcome draw_attempt(LossChannel& channel) { return channel.draw(); }

}  // namespace prilsim
