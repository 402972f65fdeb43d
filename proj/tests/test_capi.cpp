#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "prilsim.h"

namespace {

std::string get_string(prilsim_status (*fn)(char*, size_t*)) {
    size_t len = 0;
    REQUIRE(fn(nullptr, &len) == PRILSIM_OK);
    std::string out(len + 1, '\0');
    size_t cap = out.size();
    REQUIRE(fn(out.data(), &cap) == PRILSIM_OK);
    out.resize(cap);
    return out;
}

}  // namespace

TEST_CASE("version and initial error state") {
    CHECK(prilsim_version() != nullptr);
    CHECK(std::strlen(prilsim_version()) > 0);
}

TEST_CASE("config lifecycle, set and get") {
    prilsim_config* cfg = nullptr;
    REQUIRE(prilsim_config_create(&cfg) == PRILSIM_OK);

    CHECK(prilsim_config_set(cfg, "strategy", "2-open") == PRILSIM_OK);
    CHECK(prilsim_config_set(cfg, "eps_f", "0.2") == PRILSIM_OK);
    CHECK(prilsim_config_set(cfg, "seed", "123") == PRILSIM_OK);

    char buf[64];
    size_t len = sizeof(buf);
    REQUIRE(prilsim_config_get(cfg, "strategy", buf, &len) == PRILSIM_OK);
    CHECK(std::string(buf) == "2-open");
    len = sizeof(buf);
    REQUIRE(prilsim_config_get(cfg, "eps_f", buf, &len) == PRILSIM_OK);
    CHECK(std::string(buf) == "0.2");

    // Unknown key vs. bad value are distinct errors.
    CHECK(prilsim_config_set(cfg, "bogus", "1") == PRILSIM_ERR_BAD_KEY);
    CHECK(std::strlen(prilsim_last_error()) > 0);
    CHECK(prilsim_config_set(cfg, "eps_f", "xyz") == PRILSIM_ERR_PARSE);
    len = sizeof(buf);
    CHECK(prilsim_config_get(cfg, "bogus", buf, &len) == PRILSIM_ERR_BAD_KEY);

    // Clone keeps the values.
    prilsim_config* copy = nullptr;
    REQUIRE(prilsim_config_clone(cfg, &copy) == PRILSIM_OK);
    len = sizeof(buf);
    REQUIRE(prilsim_config_get(copy, "seed", buf, &len) == PRILSIM_OK);
    CHECK(std::string(buf) == "123");

    prilsim_config_destroy(copy);
    prilsim_config_destroy(cfg);
    CHECK(prilsim_config_create(nullptr) == PRILSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("buffer length protocol") {
    size_t len = 0;
    CHECK(prilsim_csv_header(nullptr, &len) == PRILSIM_OK);
    CHECK(len > 10);
    const size_t needed = len;

    char tiny[4];
    len = sizeof(tiny);
    CHECK(prilsim_csv_header(tiny, &len) == PRILSIM_ERR_BUFFER_TOO_SMALL);
    CHECK(len == needed);

    std::string buf(needed + 1, '\0');
    len = buf.size();
    REQUIRE(prilsim_csv_header(buf.data(), &len) == PRILSIM_OK);
    CHECK(len == needed);
    CHECK(std::string(buf.c_str()).rfind("strategy,seed,", 0) == 0);
}

TEST_CASE("run a short simulation and read metrics") {
    prilsim_config* cfg = nullptr;
    REQUIRE(prilsim_config_create(&cfg) == PRILSIM_OK);
    REQUIRE(prilsim_config_set(cfg, "strategy", "closed") == PRILSIM_OK);
    REQUIRE(prilsim_config_set(cfg, "duration", "3600") == PRILSIM_OK);
    REQUIRE(prilsim_config_set(cfg, "seed", "7") == PRILSIM_OK);

    prilsim_result* result = nullptr;
    REQUIRE(prilsim_run(cfg, &result) == PRILSIM_OK);

    double generated = 0.0;
    REQUIRE(prilsim_result_metric(result, "generated", &generated) == PRILSIM_OK);
    CHECK(generated == doctest::Approx(60.0));
    double p_total = 0.0;
    REQUIRE(prilsim_result_metric(result, "p_total_uW", &p_total) == PRILSIM_OK);
    CHECK(p_total > 10.0);
    CHECK(p_total < 100.0);
    double bogus = 0.0;
    CHECK(prilsim_result_metric(result, "bogus", &bogus) == PRILSIM_ERR_BAD_KEY);

    size_t len = 0;
    CHECK(prilsim_result_csv_row(result, nullptr, &len) == PRILSIM_OK);
    std::string row(len + 1, '\0');
    size_t cap = row.size();
    REQUIRE(prilsim_result_csv_row(result, row.data(), &cap) == PRILSIM_OK);
    CHECK(std::string(row.c_str()).rfind("closed,7,", 0) == 0);

    len = 0;
    CHECK(prilsim_result_summary(result, nullptr, &len) == PRILSIM_OK);
    CHECK(len > 0);

    prilsim_result_destroy(result);
    prilsim_config_destroy(cfg);
}

TEST_CASE("invalid configuration is reported at run time") {
    prilsim_config* cfg = nullptr;
    REQUIRE(prilsim_config_create(&cfg) == PRILSIM_OK);
    REQUIRE(prilsim_config_set(cfg, "duration", "5") == PRILSIM_OK);  // < t_app
    prilsim_result* result = nullptr;
    CHECK(prilsim_run(cfg, &result) == PRILSIM_ERR_INVALID_ARGUMENT);
    CHECK(result == nullptr);
    CHECK(std::strlen(prilsim_last_error()) > 0);
    prilsim_config_destroy(cfg);
}

TEST_CASE("config file loading") {
    const char* path = "capi_test_config.tmp";
    std::FILE* f = std::fopen(path, "w");
    REQUIRE(f != nullptr);
    std::fputs("# comment\nstrategy = a-open\neps_f = 0.063  # inline comment\n", f);
    std::fclose(f);

    prilsim_config* cfg = nullptr;
    REQUIRE(prilsim_config_create(&cfg) == PRILSIM_OK);
    REQUIRE(prilsim_config_load_file(cfg, path) == PRILSIM_OK);
    char buf[64];
    size_t len = sizeof(buf);
    REQUIRE(prilsim_config_get(cfg, "strategy", buf, &len) == PRILSIM_OK);
    CHECK(std::string(buf) == "a-open");

    CHECK(prilsim_config_load_file(cfg, "no_such_file.cfg") == PRILSIM_ERR_IO);
    prilsim_config_destroy(cfg);
    std::remove(path);
}

TEST_CASE("estimator entry points") {
    double eps_a = 0.0;
    REQUIRE(prilsim_estimate_eps_a(0.126, 1967, 10800, 16, 10, &eps_a) == PRILSIM_OK);
    CHECK(std::abs(eps_a - 0.080255) < 1e-6);

    size_t len = 0;
    REQUIRE(prilsim_estimate_report(0.126, 1967, 10800, 16, 10, nullptr, &len) == PRILSIM_OK);
    std::string report(len + 1, '\0');
    size_t cap = report.size();
    REQUIRE(prilsim_estimate_report(0.126, 1967, 10800, 16, 10, report.data(), &cap) ==
            PRILSIM_OK);
    CHECK(report.find("eps_a = 0.08025") != std::string::npos);

    CHECK(prilsim_estimate_eps_a(0.126, 10, 0, 16, 10, &eps_a) ==
          PRILSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("ping log parsing") {
    const char* path = "capi_ping_log.tmp";
    std::FILE* f = std::fopen(path, "w");
    REQUIRE(f != nullptr);
    std::fputs("reply seq=1\nreply seq=1 (DUP!)\n3 packets transmitted, 3 received\n", f);
    std::fclose(f);

    uint64_t n_dup = 0;
    uint64_t n_ping = 0;
    REQUIRE(prilsim_parse_ping_log(path, &n_dup, &n_ping) == PRILSIM_OK);
    CHECK(n_dup == 1);
    CHECK(n_ping == 3);
    CHECK(prilsim_parse_ping_log("no_such.log", &n_dup, &n_ping) == PRILSIM_ERR_IO);
    std::remove(path);
}

TEST_CASE("oracle check through the C surface") {
    int pass = -1;
    size_t len = 0;
    REQUIRE(prilsim_oracle_check("closed", 0.126, 0.080, 2, 4, 20000, 1, &pass, nullptr,
                                 &len) == PRILSIM_OK);
    CHECK(pass == 1);
    CHECK(len > 0);
    CHECK(prilsim_oracle_check("bogus", 0.126, 0.080, 2, 4, 100, 1, &pass, nullptr, &len) ==
          PRILSIM_ERR_INVALID_ARGUMENT);
}
