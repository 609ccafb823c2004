#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace stsync {

// Flat key=value text (UTF-8, '#' comments). Used for run configs and the
// manifests inside dataset/model bundles.
std::map<std::string, std::string> parse_kv(const std::string& text, const std::string& origin);
std::string serialize_kv(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path);
void write_kv_file(const std::filesystem::path& path, const std::map<std::string, std::string>& kv);

// Run configuration: every tunable named by the library, with its default.
// Parsing rejects unknown keys and malformed values, naming the line.
class RunConfig {
public:
    RunConfig(); // defaults only

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_text(const std::string& text, const std::string& origin);

    void set(const std::string& key, const std::string& value); // throws on unknown key

    const std::string& get(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    std::string serialize() const; // sorted, round-trips through from_text

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace stsync
