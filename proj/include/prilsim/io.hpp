#pragma once

#include <string>
#include <vector>

#include "prilsim/engine.hpp"

namespace prilsim {

// String key/value view of a RunConfig. Keys double as config-file keys and
// CLI flag names; see config_keys() for the full list.
class RunConfigBuilder {
  public:
    RunConfigBuilder();

    // Throws std::invalid_argument on unknown key or unparseable value.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;

    // Line-oriented `key = value` text with # comments.
    void load_text(const std::string& text);
    void load_file(const std::string& path);  // throws std::runtime_error on IO failure

    const RunConfig& config() const { return config_; }
    RunConfig& config() { return config_; }

    static const std::vector<std::string>& config_keys();

  private:
    RunConfig config_;
};

// Locale-independent number rendering (shortest round-trip form).
std::string format_double(double value);

std::string csv_header();
std::string csv_row(const RunResult& result);

// Short human-readable run summary.
std::string summarize(const RunResult& result);

}  // namespace prilsim
