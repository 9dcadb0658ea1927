#include "semimt/config.hpp"

#include <charconv>
#include <fstream>

#include "semimt/errors.hpp"

namespace semimt {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig load_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_data("cannot open config file: " + path);
    KvConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail_usage(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            fail_usage(path + ":" + std::to_string(lineno) + ": empty config key");
        cfg[key] = value;
    }
    return cfg;
}

void apply_override(KvConfig& cfg, const std::string& key_eq_value) {
    size_t eq = key_eq_value.find('=');
    if (eq == std::string::npos || eq == 0)
        fail_usage("override must look like key=value, got '" + key_eq_value + "'");
    cfg[trim(key_eq_value.substr(0, eq))] = trim(key_eq_value.substr(eq + 1));
}

std::string kv_get(const KvConfig& cfg, const std::string& key, const std::string& fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

long long kv_get_int(const KvConfig& cfg, const std::string& key, long long fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    long long v = 0;
    auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc() || res.ptr != it->second.data() + it->second.size())
        fail_usage("config key '" + key + "' expects an integer, got '" + it->second + "'");
    return v;
}

double kv_get_double(const KvConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    const std::string& s = it->second;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail_usage("config key '" + key + "' expects a number, got '" + s + "'");
    return v;
}

bool kv_get_bool(const KvConfig& cfg, const std::string& key, bool fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    fail_usage("config key '" + key + "' expects true/false, got '" + it->second + "'");
}

uint64_t kv_get_u64(const KvConfig& cfg, const std::string& key, uint64_t fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    uint64_t v = 0;
    auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc() || res.ptr != it->second.data() + it->second.size())
        fail_usage("config key '" + key + "' expects an unsigned integer, got '" + it->second +
                   "'");
    return v;
}

}  // namespace semimt
