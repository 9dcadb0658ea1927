#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace semimt {

// Flat key-value run configuration: "key = value" lines, '#' comments.
// Precedence is defaults < file < explicit overrides.
using KvConfig = std::map<std::string, std::string>;

KvConfig load_kv_file(const std::string& path);
void apply_override(KvConfig& cfg, const std::string& key_eq_value);

// Typed getters; all parse failures are usage errors naming the key.
std::string kv_get(const KvConfig& cfg, const std::string& key, const std::string& fallback);
long long kv_get_int(const KvConfig& cfg, const std::string& key, long long fallback);
double kv_get_double(const KvConfig& cfg, const std::string& key, double fallback);
bool kv_get_bool(const KvConfig& cfg, const std::string& key, bool fallback);
uint64_t kv_get_u64(const KvConfig& cfg, const std::string& key, uint64_t fallback);

}  // namespace semimt
