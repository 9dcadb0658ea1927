#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semimt/corpus.hpp"

namespace semimt {

// Deterministic synthetic language pair: a bijective token-substitution
// cipher with optional full reversal. The task is exactly learnable, so
// training-method comparisons are not confounded by task ambiguity, and
// pseudo-parallel pipelines can be checked against ground truth.
struct TaskSpec {
    int vocab_size = 100;  // cipherable tokens per side, excluding the OOV pool
    int len_min = 3;
    int len_max = 8;
    uint64_t cipher_seed = 7;
    std::string reorder = "none";  // none | reverse
    int parallel_count = 500;
    int target_mono_count = 5000;
    int source_mono_count = 0;
    int validation_count = 200;
    int test_count = 200;
    double oov_rate = 0.0;  // per-token injection rate for the mono corpora
    int oov_pool = -1;      // extra tokens reserved for injection; -1 derives a default
    double zipf_exponent = 1.1;
    uint64_t seed = 1;

    int effective_oov_pool() const;
    void validate() const;
    nlohmann::json to_json() const;
    static TaskSpec from_json(const nlohmann::json& j);
};

struct GeneratedData {
    std::vector<TokenLine> parallel_src, parallel_tgt;
    std::vector<TokenLine> target_mono, source_mono;
    std::vector<TokenLine> valid_src, valid_tgt;
    std::vector<TokenLine> test_src, test_tgt;
};

// All splits are disjoint in their underlying source sentences; mono corpora
// are fresh unpaired samples from the same generative process, with OOV
// tokens injected at the requested rate.
GeneratedData generate(const TaskSpec& spec);

// Ground-truth translation (reorder after cipher) and its inverse.
TokenLine oracle_translate(const TaskSpec& spec, const TokenLine& src);
TokenLine oracle_inverse(const TaskSpec& spec, const TokenLine& tgt);

}  // namespace semimt
