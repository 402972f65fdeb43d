#include "prilsim.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>

#include "prilsim/engine.hpp"
#include "prilsim/estimator.hpp"
#include "prilsim/io.hpp"
#include "prilsim/oracle.hpp"

namespace {

thread_local std::string g_last_error;

prilsim_status fail(prilsim_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

prilsim_status ok() {
    g_last_error.clear();
    return PRILSIM_OK;
}

// Maps exceptions thrown by the core to status codes.
prilsim_status from_exception(std::exception_ptr ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const std::invalid_argument& e) {
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(PRILSIM_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PRILSIM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PRILSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PRILSIM_ERR_INTERNAL, "unknown error");
    }
}

prilsim_status copy_out(const std::string& text, char* buf, size_t* len) {
    if (len == nullptr) return fail(PRILSIM_ERR_INVALID_ARGUMENT, "len is null");
    const size_t needed = text.size();
    if (buf == nullptr || *len < needed + 1) {
        *len = needed;
        if (buf == nullptr) return ok();
        return fail(PRILSIM_ERR_BUFFER_TOO_SMALL, "buffer too small");
    }
    std::memcpy(buf, text.data(), needed);
    buf[needed] = '\0';
    *len = needed;
    return ok();
}

}  // namespace

struct prilsim_config {
    prilsim::RunConfigBuilder builder;
};

struct prilsim_result {
    prilsim::RunResult result;
};

extern "C" {

const char* prilsim_version(void) { return "1.0.0"; }

const char* prilsim_last_error(void) { return g_last_error.c_str(); }

prilsim_status prilsim_config_create(prilsim_config** out) {
    if (out == nullptr) return fail(PRILSIM_ERR_INVALID_ARGUMENT, "out is null");
    try {
        *out = new prilsim_config();
        return ok();
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_config_clone(const prilsim_config* cfg, prilsim_config** out) {
    if (cfg == nullptr || out == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        *out = new prilsim_config(*cfg);
        return ok();
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

void prilsim_config_destroy(prilsim_config* cfg) { delete cfg; }

prilsim_status prilsim_config_set(prilsim_config* cfg, const char* key, const char* value) {
    if (cfg == nullptr || key == nullptr || value == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        cfg->builder.set(key, value);
        return ok();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.rfind("unknown configuration key", 0) == 0)
            return fail(PRILSIM_ERR_BAD_KEY, what);
        return fail(PRILSIM_ERR_PARSE, what);
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_config_get(const prilsim_config* cfg, const char* key, char* buf,
                                  size_t* len) {
    if (cfg == nullptr || key == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        return copy_out(cfg->builder.get(key), buf, len);
    } catch (const std::invalid_argument& e) {
        return fail(PRILSIM_ERR_BAD_KEY, e.what());
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_config_load_file(prilsim_config* cfg, const char* path) {
    if (cfg == nullptr || path == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        cfg->builder.load_file(path);
        return ok();
    } catch (const std::invalid_argument& e) {
        return fail(PRILSIM_ERR_PARSE, e.what());
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_run(const prilsim_config* cfg, prilsim_result** out) {
    if (cfg == nullptr || out == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        auto* res = new prilsim_result();
        try {
            res->result = prilsim::run(cfg->builder.config());
        } catch (...) {
            delete res;
            throw;
        }
        *out = res;
        return ok();
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

void prilsim_result_destroy(prilsim_result* result) { delete result; }

prilsim_status prilsim_result_metric(const prilsim_result* result, const char* name,
                                     double* out) {
    if (result == nullptr || name == nullptr || out == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    const prilsim::RunResult& r = result->result;
    const std::string key = name;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    double value;
    if (key == "seed") value = static_cast<double>(r.seed);
    else if (key == "eps_f") value = r.config.loss.eps_f;
    else if (key == "eps_a") value = r.config.loss.eps_a;
    else if (key == "n_tries") value = r.config.n_tries;
    else if (key == "t_app_s") value = r.config.flow.t_app;
    else if (key == "duration_s") value = r.config.duration;
    else if (key == "phase_s") value = r.phase;
    else if (key == "p_total_uW") value = r.power.p_total * 1e6;
    else if (key == "p_ntx_uW") value = r.power.p_ntx * 1e6;
    else if (key == "p_nrx_uW") value = r.power.p_nrx * 1e6;
    else if (key == "p_listen_ntx_uW") value = r.power.p_listen_ntx * 1e6;
    else if (key == "p_listen_nrx_uW") value = r.power.p_listen_nrx * 1e6;
    else if (key == "tx_attempts") value = static_cast<double>(r.counters.tx_attempts);
    else if (key == "useless_attempts") value = static_cast<double>(r.counters.useless_attempts);
    else if (key == "acks_sent") value = static_cast<double>(r.counters.acks_sent);
    else if (key == "acks_received") value = static_cast<double>(r.counters.acks_received);
    else if (key == "rx_frames") value = static_cast<double>(r.counters.rx_frames);
    else if (key == "rx_idle") value = static_cast<double>(r.counters.rx_idle);
    else if (key == "rx_cca_only") value = static_cast<double>(r.counters.rx_cca_only);
    else if (key == "rx_enabled") value = static_cast<double>(r.counters.rx_enabled);
    else if (key == "drops") value = static_cast<double>(r.counters.drops);
    else if (key == "dup_deliveries") value = static_cast<double>(r.counters.dup_deliveries);
    else if (key == "max_queue_depth") value = static_cast<double>(r.counters.max_queue_depth);
    else if (key == "generated") value = static_cast<double>(r.counters.generated);
    else if (key == "delivered_first") value = static_cast<double>(r.counters.delivered_first);
    else if (key == "lat_mean_s") value = r.latency ? r.latency->mean : nan;
    else if (key == "lat_std_s") value = r.latency ? r.latency->stddev : nan;
    else if (key == "lat_p99_s") value = r.latency ? r.latency->p99 : nan;
    else if (key == "lat_p999_s") value = r.latency ? r.latency->p999 : nan;
    else if (key == "lat_p9999_s") value = r.latency ? r.latency->p9999 : nan;
    else if (key == "lat_max_s") value = r.latency ? r.latency->max : nan;
    else return fail(PRILSIM_ERR_BAD_KEY, "unknown metric '" + key + "'");

    *out = value;
    return ok();
}

prilsim_status prilsim_result_csv_row(const prilsim_result* result, char* buf, size_t* len) {
    if (result == nullptr) return fail(PRILSIM_ERR_INVALID_ARGUMENT, "result is null");
    try {
        return copy_out(prilsim::csv_row(result->result), buf, len);
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_result_summary(const prilsim_result* result, char* buf, size_t* len) {
    if (result == nullptr) return fail(PRILSIM_ERR_INVALID_ARGUMENT, "result is null");
    try {
        return copy_out(prilsim::summarize(result->result), buf, len);
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_csv_header(char* buf, size_t* len) {
    try {
        return copy_out(prilsim::csv_header(), buf, len);
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_estimate_eps_a(double eps_f, uint64_t n_dup, uint64_t n_ping,
                                      int n_tries, int iterations, double* out) {
    if (out == nullptr) return fail(PRILSIM_ERR_INVALID_ARGUMENT, "out is null");
    try {
        prilsim::PingLogSummary summary{n_ping, n_dup};
        *out = prilsim::estimate_eps_a(eps_f, summary, n_tries, iterations).eps_a;
        return ok();
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_estimate_report(double eps_f, uint64_t n_dup, uint64_t n_ping,
                                       int n_tries, int iterations, char* buf, size_t* len) {
    try {
        prilsim::PingLogSummary summary{n_ping, n_dup};
        const auto est = prilsim::estimate_eps_a(eps_f, summary, n_tries, iterations);
        return copy_out(prilsim::format_estimate_report(eps_f, summary, n_tries, est), buf,
                        len);
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_parse_ping_log(const char* path, uint64_t* n_dup, uint64_t* n_ping) {
    if (path == nullptr || n_dup == nullptr || n_ping == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        std::ifstream in(path);
        if (!in) return fail(PRILSIM_ERR_IO, std::string("cannot open '") + path + "'");
        const auto summary = prilsim::parse_ping_log(in);
        *n_dup = summary.n_dup;
        *n_ping = summary.n_ping;
        return ok();
    } catch (const std::runtime_error& e) {
        return fail(PRILSIM_ERR_PARSE, e.what());
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

prilsim_status prilsim_oracle_check(const char* strategy, double eps_f, double eps_a,
                                    int n_tries, int horizon, uint64_t trials,
                                    uint64_t base_seed, int* pass, char* buf, size_t* len) {
    if (strategy == nullptr || pass == nullptr)
        return fail(PRILSIM_ERR_INVALID_ARGUMENT, "null argument");
    try {
        prilsim::OracleScenario scenario;
        scenario.strategy = prilsim::Strategy::parse(strategy);
        scenario.eps_f = eps_f;
        scenario.eps_a = eps_a;
        scenario.n_tries = n_tries;
        scenario.horizon = horizon;
        const auto cmp = prilsim::oracle_compare(scenario, trials, base_seed);
        *pass = cmp.pass ? 1 : 0;
        if (len != nullptr) return copy_out(prilsim::format_oracle_report(cmp), buf, len);
        return ok();
    } catch (...) {
        return from_exception(std::current_exception());
    }
}

}  // extern "C"
