#include "stsync/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stsync {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const std::map<std::string, std::string>& default_config() {
    static const std::map<std::string, std::string> defaults = {
        {"seed", "42"},
        // dataset generation
        {"data.kind", "translations"},
        {"data.count", "50000"},
        {"data.frames", "10"},
        {"data.height", "16"},
        {"data.width", "16"},
        {"data.max_shift", "1"},
        {"data.shift_set", "grid"}, // grid | cardinal
        {"data.source_count", "16"},
        {"data.source_size", "64"},
        {"data.source_blur", "4"},
        {"sinusoid.n", "64"},
        {"sinusoid.freq", "0.0625"},
        {"sinusoid.phase", "0.0"},
        {"sinusoid.shift", "4"},
        // whitening
        {"whitening.retained_dims", "0"}, // 0 = keep 99% variance
        {"whitening.variance_fraction", "0.99"},
        {"whitening.eigenvalue_floor_rel", "1e-8"},
        {"whitening.sample", "0"}, // 0 = fit on all patches
        // models
        {"model.q", "300"},
        {"model.mode", "sequence"}, // sequence | pair
        {"train.eta", "0.01"},
        {"train.epochs", "5"},
        {"train.eta_decay", "0.95"},
        {"train.normalize_every", "1000"},
        {"sae.lambda", "0.5"},
        {"sae.eta", "0.001"},
        {"sae.epochs", "20"},
        {"sae.batch", "128"},
        {"sae.momentum", "0.9"},
        {"sae.tied", "true"},
        // descriptor pipeline
        {"pipeline.super_frames", "14"},
        {"pipeline.super_height", "20"},
        {"pipeline.super_width", "20"},
        {"pipeline.sub_frames", "10"},
        {"pipeline.sub_height", "16"},
        {"pipeline.sub_width", "16"},
        {"pipeline.sub_stride", "4"},
        {"pipeline.overlap", "0.5"},
        {"pipeline.descriptor_pca_dims", "100"},
        {"pipeline.vocab_size", "3000"},
        {"pipeline.vocab_iterations", "20"},
        {"pipeline.vocab_samples", "500000"},
        {"pipeline.pooling", "false"},
        {"pipeline.pooling_centroids", "500"},
        // classification
        {"knn.k", "5"},
        {"chi2.gamma", "0"}, // 0 = mean pairwise train distance
        {"eval.loo", "false"},
    };
    return defaults;
}

} // namespace

std::map<std::string, std::string> parse_kv(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
        if (out.count(key))
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        out[key] = value;
    }
    return out;
}

std::string serialize_kv(const std::map<std::string, std::string>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_kv(ss.str(), path.string());
}

void write_kv_file(const std::filesystem::path& path, const std::map<std::string, std::string>& kv) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << serialize_kv(kv);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

RunConfig::RunConfig() : values_(default_config()) {}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path.string());
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    auto kv = parse_kv(text, origin);
    for (const auto& [k, v] : kv) {
        if (!cfg.values_.count(k))
            throw std::runtime_error(origin + ": unknown config key '" + k + "'");
        cfg.values_[k] = v;
    }
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("unknown config key '" + key + "'");
    it->second = value;
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("unknown config key '" + key + "'");
    return it->second;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
    const std::string& s = get(key);
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw std::runtime_error("config key '" + key + "': not an integer: '" + s + "'");
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
    std::int64_t v = get_int(key);
    if (v < 0) throw std::runtime_error("config key '" + key + "': must be non-negative");
    return static_cast<std::uint64_t>(v);
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& s = get(key);
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': not a number: '" + s + "'");
    }
    if (pos != s.size()) throw std::runtime_error("config key '" + key + "': not a number: '" + s + "'");
    return v;
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("config key '" + key + "': expected true/false, got '" + s + "'");
}

std::string RunConfig::serialize() const {
    return serialize_kv(values_);
}

} // namespace stsync
