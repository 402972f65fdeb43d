#include "prilsim/estimator.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace prilsim {

double p_ack(double eps_f, double eps_a, int n_tries) {
    if (eps_f < 0.0 || eps_f > 1.0 || eps_a < 0.0 || eps_a > 1.0)
        throw std::invalid_argument("probabilities must be in [0, 1]");
    if (n_tries < 1) throw std::invalid_argument("n_tries must be >= 1");
    const double fail = eps_f + (1.0 - eps_f) * eps_a;
    return 1.0 - std::pow(fail, n_tries);
}

double mean_rx_frames(const PingLogSummary& summary) {
    if (summary.n_ping < 1) throw std::invalid_argument("n_ping must be >= 1");
    const double alpha_dup =
        static_cast<double>(summary.n_dup) / static_cast<double>(summary.n_ping);
    return std::sqrt(alpha_dup + 1.0);
}

EpsAEstimate estimate_eps_a(double eps_f, const PingLogSummary& summary, int n_tries,
                            int iterations) {
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    const double n_rxf = mean_rx_frames(summary);
    EpsAEstimate est;
    double eps_a = eps_f;
    double prev = eps_a;
    for (int i = 0; i < iterations; ++i) {
        prev = eps_a;
        eps_a = 1.0 - p_ack(eps_f, eps_a, n_tries) / n_rxf;
        if (eps_a < 0.0) {
            eps_a = 0.0;
            est.clamped = true;
        } else if (eps_a > 1.0) {
            eps_a = 1.0;
            est.clamped = true;
        }
        est.iterates.push_back(eps_a);
    }
    est.eps_a = eps_a;
    est.last_delta = eps_a - prev;
    return est;
}

PingLogSummary parse_ping_log(std::istream& in) {
    PingLogSummary summary;
    bool have_n_ping = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("DUP!") != std::string::npos) ++summary.n_dup;
        if (!have_n_ping) {
            const auto eq = line.find("requests=");
            if (eq != std::string::npos) {
                std::istringstream num(line.substr(eq + 9));
                if (num >> summary.n_ping) have_n_ping = true;
            } else if (line.find(" packets transmitted") != std::string::npos) {
                std::istringstream num(line);
                if (num >> summary.n_ping) have_n_ping = true;
            }
        }
    }
    if (!have_n_ping || summary.n_ping < 1)
        throw std::runtime_error(
            "ping log does not state the request count (expected a 'requests=<N>' header "
            "or a '<N> packets transmitted' summary line)");
    return summary;
}

std::string format_estimate_report(double eps_f, const PingLogSummary& summary, int n_tries,
                                   const EpsAEstimate& estimate) {
    std::ostringstream out;
    out.precision(10);
    out << "eps_f = " << eps_f << "\n";
    out << "n_dup = " << summary.n_dup << "\n";
    out << "n_ping = " << summary.n_ping << "\n";
    out << "n_tries = " << n_tries << "\n";
    out << "mean_rx_frames = " << mean_rx_frames(summary) << "\n";
    for (std::size_t i = 0; i < estimate.iterates.size(); ++i) {
        out << "iterate_" << (i + 1) << " = " << estimate.iterates[i] << "\n";
    }
    out << "last_delta = " << estimate.last_delta << "\n";
    out << "clamped = " << (estimate.clamped ? 1 : 0) << "\n";
    out << "eps_a = " << estimate.eps_a << "\n";
    return out.str();
}

}  // namespace prilsim
