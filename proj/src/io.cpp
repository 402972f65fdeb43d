#include "prilsim/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prilsim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("invalid numeric value for '" + key + "': " + value);
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("invalid integer value for '" + key + "': " + value);
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("invalid unsigned value for '" + key + "': " + value);
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

RunConfigBuilder::RunConfigBuilder() = default;

void RunConfigBuilder::set(const std::string& key, const std::string& value) {
    RunConfig& c = config_;
    if (key == "strategy") {
        c.strategy = Strategy::parse(value);
    } else if (key == "seed") {
        c.loss.seed = parse_u64(key, value);
    } else if (key == "eps_f") {
        c.loss.eps_f = parse_double(key, value);
    } else if (key == "eps_a") {
        c.loss.eps_a = parse_double(key, value);
    } else if (key == "cca_detection") {
        c.loss.cca_detection = parse_double(key, value);
    } else if (key == "n_tries") {
        c.n_tries = static_cast<int>(parse_int(key, value));
    } else if (key == "t_app") {
        c.flow.t_app = parse_double(key, value);
    } else if (key == "phase") {
        if (value.empty() || value == "auto") {
            c.flow.phase.reset();
        } else {
            c.flow.phase = parse_double(key, value);
        }
    } else if (key == "t_slot") {
        c.schedule.t_slot = parse_double(key, value);
    } else if (key == "n_slot") {
        c.schedule.n_slot = parse_int(key, value);
    } else if (key == "slot_offset") {
        c.schedule.slot_offset = parse_int(key, value);
    } else if (key == "capacity") {
        c.schedule.capacity_c = parse_int(key, value);
    } else if (key == "n_ch") {
        c.schedule.n_ch = parse_int(key, value);
    } else if (key == "duration") {
        c.duration = parse_double(key, value);
    } else if (key == "e_tx_attempt") {
        c.energy.e_tx_attempt = parse_double(key, value);
    } else if (key == "e_rx_exchange") {
        c.energy.e_rx_exchange = parse_double(key, value);
    } else if (key == "e_idle") {
        c.energy.e_idle = parse_double(key, value);
    } else if (key == "e_cca") {
        if (value.empty() || value == "auto") {
            c.energy.e_cca.reset();
        } else {
            c.energy.e_cca = parse_double(key, value);
        }
    } else if (key == "e_ack_wait") {
        if (value.empty() || value == "auto") {
            c.energy.e_ack_wait.reset();
        } else {
            c.energy.e_ack_wait = parse_double(key, value);
        }
    } else {
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

std::string RunConfigBuilder::get(const std::string& key) const {
    const RunConfig& c = config_;
    if (key == "strategy") return c.strategy.name();
    if (key == "seed") return std::to_string(c.loss.seed);
    if (key == "eps_f") return format_double(c.loss.eps_f);
    if (key == "eps_a") return format_double(c.loss.eps_a);
    if (key == "cca_detection") return format_double(c.loss.cca_detection);
    if (key == "n_tries") return std::to_string(c.n_tries);
    if (key == "t_app") return format_double(c.flow.t_app);
    if (key == "phase") return c.flow.phase ? format_double(*c.flow.phase) : "auto";
    if (key == "t_slot") return format_double(c.schedule.t_slot);
    if (key == "n_slot") return std::to_string(c.schedule.n_slot);
    if (key == "slot_offset") return std::to_string(c.schedule.slot_offset);
    if (key == "capacity") return std::to_string(c.schedule.capacity_c);
    if (key == "n_ch") return std::to_string(c.schedule.n_ch);
    if (key == "duration") return format_double(c.duration);
    if (key == "e_tx_attempt") return format_double(c.energy.e_tx_attempt);
    if (key == "e_rx_exchange") return format_double(c.energy.e_rx_exchange);
    if (key == "e_idle") return format_double(c.energy.e_idle);
    if (key == "e_cca") return c.energy.e_cca ? format_double(*c.energy.e_cca) : "auto";
    if (key == "e_ack_wait")
        return c.energy.e_ack_wait ? format_double(*c.energy.e_ack_wait) : "auto";
    throw std::invalid_argument("unknown configuration key '" + key + "'");
}

void RunConfigBuilder::load_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
}

void RunConfigBuilder::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    load_text(buf.str());
}

const std::vector<std::string>& RunConfigBuilder::config_keys() {
    static const std::vector<std::string> keys = {
        "strategy", "seed",       "eps_f",       "eps_a",        "cca_detection",
        "n_tries",  "t_app",      "phase",       "t_slot",       "n_slot",
        "slot_offset", "capacity", "n_ch",       "duration",     "e_tx_attempt",
        "e_rx_exchange", "e_idle", "e_cca",      "e_ack_wait",
    };
    return keys;
}

std::string csv_header() {
    return "strategy,seed,eps_f,eps_a,n_tries,t_app_s,duration_s,"
           "p_total_uW,p_ntx_uW,p_nrx_uW,p_listen_ntx_uW,p_listen_nrx_uW,"
           "useless_attempts,rx_idle,drops,dup_deliveries,max_queue_depth,"
           "lat_mean_s,lat_std_s,lat_p99_s,lat_p999_s,lat_p9999_s,lat_max_s";
}

std::string csv_row(const RunResult& r) {
    std::string row;
    row += r.config.strategy.name();
    row += ',';
    row += std::to_string(r.seed);
    row += ',';
    row += format_double(r.config.loss.eps_f);
    row += ',';
    row += format_double(r.config.loss.eps_a);
    row += ',';
    row += std::to_string(r.config.n_tries);
    row += ',';
    row += format_double(r.config.flow.t_app);
    row += ',';
    row += format_double(r.config.duration);
    row += ',';
    row += format_double(r.power.p_total * 1e6);
    row += ',';
    row += format_double(r.power.p_ntx * 1e6);
    row += ',';
    row += format_double(r.power.p_nrx * 1e6);
    row += ',';
    row += format_double(r.power.p_listen_ntx * 1e6);
    row += ',';
    row += format_double(r.power.p_listen_nrx * 1e6);
    row += ',';
    row += std::to_string(r.counters.useless_attempts);
    row += ',';
    row += std::to_string(r.counters.rx_idle);
    row += ',';
    row += std::to_string(r.counters.drops);
    row += ',';
    row += std::to_string(r.counters.dup_deliveries);
    row += ',';
    row += std::to_string(r.counters.max_queue_depth);
    if (r.latency) {
        row += ',';
        row += format_double(r.latency->mean);
        row += ',';
        row += format_double(r.latency->stddev);
        row += ',';
        row += format_double(r.latency->p99);
        row += ',';
        row += format_double(r.latency->p999);
        row += ',';
        row += format_double(r.latency->p9999);
        row += ',';
        row += format_double(r.latency->max);
    } else {
        row += ",,,,,,";  // no delivered packets
    }
    return row;
}

std::string summarize(const RunResult& r) {
    std::ostringstream out;
    out.precision(6);
    out << r.config.strategy.name() << " seed=" << r.seed << " duration=" << r.config.duration
        << "s\n";
    out << "  packets: generated=" << r.counters.generated
        << " delivered=" << r.counters.delivered_first << " drops=" << r.counters.drops
        << " dups=" << r.counters.dup_deliveries << " queued_at_end=" << r.counters.in_queue_end
        << "\n";
    out << "  attempts: tx=" << r.counters.tx_attempts
        << " useless=" << r.counters.useless_attempts << " acks=" << r.counters.acks_received
        << "/" << r.counters.acks_sent << "\n";
    out << "  receiver: frames=" << r.counters.rx_frames << " idle=" << r.counters.rx_idle
        << " cca_only=" << r.counters.rx_cca_only << " enabled=" << r.counters.rx_enabled
        << "\n";
    out << "  power: total=" << r.power.p_total * 1e6 << "uW tx=" << r.power.p_ntx * 1e6
        << "uW rx=" << r.power.p_nrx * 1e6 << "uW rx_listen=" << r.power.p_listen_nrx * 1e6
        << "uW\n";
    if (r.latency) {
        out << "  latency: mean=" << r.latency->mean << "s p99=" << r.latency->p99
            << "s max=" << r.latency->max << "s (n=" << r.latency->count << ")\n";
    } else {
        out << "  latency: no delivered packets\n";
    }
    return out.str();
}

}  // namespace prilsim
