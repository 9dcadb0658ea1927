#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semimt/param_store.hpp"

namespace semimt {

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing model snapshot: header plus name -> {shape, values} map.
// Values are decimal text with enough digits that load(save(x)) == x exactly.
struct CheckpointHeader {
    int format_version = kCheckpointFormatVersion;
    nlohmann::json model_config;
    std::string rng_state;
    long long iteration = 0;
};

void save_checkpoint(const std::string& path, const CheckpointHeader& header,
                     const ParameterStore& store);

struct Checkpoint {
    CheckpointHeader header;
    std::vector<std::pair<std::string, Tensor>> parameters;
};

Checkpoint load_checkpoint(const std::string& path);

// Copies checkpoint tensors into an already-laid-out store; parameter names
// and shapes must match exactly.
void fill_store(ParameterStore& store, const Checkpoint& ckpt);

}  // namespace semimt
