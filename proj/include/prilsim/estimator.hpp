#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace prilsim {

struct PingLogSummary {
    std::uint64_t n_ping = 0;  // ICMP echo requests issued
    std::uint64_t n_dup = 0;   // replies marked DUP!
};

// Probability that a confirmed transmission with up to n_tries attempts ends
// with the sender holding an ACK: 1 - [eps_f + (1 - eps_f) eps_a]^n_tries.
double p_ack(double eps_f, double eps_a, int n_tries);

// Mean data-frame copies received per request: sqrt(n_dup / n_ping + 1).
double mean_rx_frames(const PingLogSummary& summary);

struct EpsAEstimate {
    double eps_a = 0.0;
    std::vector<double> iterates;  // value after each iteration
    double last_delta = 0.0;
    bool clamped = false;
};

// Fixed-point iteration eps_a <- 1 - p_ack(eps_f, eps_a, n_tries) / N_rxf,
// started from eps_a = eps_f. Iterates leaving [0, 1] are clamped.
EpsAEstimate estimate_eps_a(double eps_f, const PingLogSummary& summary, int n_tries,
                            int iterations = 10);

// Counts DUP!-marked lines. The request total comes from a `requests=<N>`
// header line or, failing that, from a ping summary line of the form
// `<N> packets transmitted, ...`. Throws std::runtime_error when the request
// count cannot be resolved.
PingLogSummary parse_ping_log(std::istream& in);

// key = value report including the iteration trace.
std::string format_estimate_report(double eps_f, const PingLogSummary& summary, int n_tries,
                                   const EpsAEstimate& estimate);

}  // namespace prilsim
