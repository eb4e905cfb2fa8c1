#pragma once

#include <map>
#include <string>
#include <vector>

namespace snoc {

// Sectioned key-value configuration file.
//
//   [photonics]
//   waveguide_loss_db_per_m = 100
//   # comment
//
// Keys are looked up as "section.key". Unknown keys are kept so callers can
// reject typos; values are parsed on access.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    // Comma-separated list of numbers.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value);

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace snoc
