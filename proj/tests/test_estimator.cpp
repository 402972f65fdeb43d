#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prilsim/estimator.hpp"

using namespace prilsim;

TEST_CASE("confirmation probability closed form") {
    // With both losses at the default values and 16 tries, failure is
    // (0.126 + 0.874 * 0.080255)^16, which is vanishingly small.
    const double p = p_ack(0.126, 0.080255, 16);
    CHECK(1.0 - p == doctest::Approx(4.4e-12).epsilon(0.05));
    CHECK(p_ack(0.0, 0.0, 1) == doctest::Approx(1.0));
    CHECK(p_ack(1.0, 0.0, 16) == doctest::Approx(0.0));
    CHECK(p_ack(0.5, 0.5, 1) == doctest::Approx(0.25));
    CHECK_THROWS_AS(p_ack(-0.1, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(p_ack(0.1, 0.5, 0), std::invalid_argument);
}

TEST_CASE("mean received frame copies from duplicate counts") {
    PingLogSummary s;
    s.n_ping = 10800;
    s.n_dup = 1967;
    // sqrt(1967 / 10800 + 1) = sqrt(1.18213) = 1.08726
    CHECK(mean_rx_frames(s) == doctest::Approx(1.08726).epsilon(1e-5));
    s.n_dup = 0;
    CHECK(mean_rx_frames(s) == doctest::Approx(1.0));
    s.n_ping = 0;
    CHECK_THROWS_AS(mean_rx_frames(s), std::invalid_argument);
}

TEST_CASE("fixed point reproduces the reference estimate") {
    PingLogSummary s;
    s.n_ping = 10800;
    s.n_dup = 1967;
    const EpsAEstimate est = estimate_eps_a(0.126, s, 16);
    CHECK(std::abs(est.eps_a - 0.080255) < 1e-6);
    CHECK(est.iterates.size() == 10);
    CHECK_FALSE(est.clamped);
    // Converged to machine-level stability well before the last iteration.
    CHECK(std::abs(est.last_delta) < 1e-9);
}

TEST_CASE("estimate is monotone in the duplicate count") {
    double prev = -1.0;
    for (std::uint64_t dup : {0ULL, 500ULL, 1000ULL, 2000ULL, 4000ULL}) {
        PingLogSummary s;
        s.n_ping = 10800;
        s.n_dup = dup;
        const double e = estimate_eps_a(0.126, s, 16).eps_a;
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("no duplicates means no measurable ACK loss") {
    PingLogSummary s;
    s.n_ping = 1000;
    s.n_dup = 0;
    const EpsAEstimate est = estimate_eps_a(0.126, s, 16);
    // N_rxf = 1 and P_ACK <= 1 force the fixed point to 0.
    CHECK(est.eps_a == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("iteration count is respected and must be positive") {
    PingLogSummary s;
    s.n_ping = 100;
    s.n_dup = 30;
    CHECK(estimate_eps_a(0.126, s, 16, 3).iterates.size() == 3);
    CHECK_THROWS_AS(estimate_eps_a(0.126, s, 16, 0), std::invalid_argument);
}

TEST_CASE("ping log parsing with a requests header") {
    std::istringstream in(
        "# requests=10800\n"
        "64 bytes from host: icmp_seq=1 time=40 ms\n"
        "64 bytes from host: icmp_seq=1 time=55 ms (DUP!)\n"
        "64 bytes from host: icmp_seq=2 time=41 ms\n"
        "64 bytes from host: icmp_seq=2 time=58 ms (DUP!)\n");
    const PingLogSummary s = parse_ping_log(in);
    CHECK(s.n_ping == 10800);
    CHECK(s.n_dup == 2);
}

TEST_CASE("ping log parsing with a transmitted summary line") {
    std::istringstream in(
        "64 bytes from host: icmp_seq=1 time=40 ms\n"
        "64 bytes from host: icmp_seq=1 time=55 ms (DUP!)\n"
        "--- host ping statistics ---\n"
        "500 packets transmitted, 499 received, +1 duplicates, 0% packet loss\n");
    const PingLogSummary s = parse_ping_log(in);
    CHECK(s.n_ping == 500);
    CHECK(s.n_dup == 1);
}

TEST_CASE("ping log without a request count is rejected") {
    std::istringstream in("64 bytes from host: icmp_seq=1 time=40 ms (DUP!)\n");
    CHECK_THROWS_AS(parse_ping_log(in), std::runtime_error);
}

TEST_CASE("report carries the inputs and the final value") {
    PingLogSummary s;
    s.n_ping = 10800;
    s.n_dup = 1967;
    const EpsAEstimate est = estimate_eps_a(0.126, s, 16);
    const std::string report = format_estimate_report(0.126, s, 16, est);
    CHECK(report.find("n_dup = 1967") != std::string::npos);
    CHECK(report.find("n_ping = 10800") != std::string::npos);
    CHECK(report.find("eps_a = 0.08025") != std::string::npos);
    CHECK(report.find("iterate_10") != std::string::npos);
}
