#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "semimt/checkpoint.hpp"
#include "semimt/corpus.hpp"
#include "semimt/graph.hpp"
#include "semimt/param_store.hpp"
#include "semimt/vocab.hpp"

namespace semimt {

struct ModelConfig {
    std::string direction;  // "src_to_tgt" or "tgt_to_src"
    int vocab_in = 0;
    int vocab_out = 0;
    int embed_dim = 32;
    int hidden_dim = 64;
    int attn_dim = 64;

    nlohmann::json to_json() const;
    static ModelConfig from_json(const nlohmann::json& j);
};

// One directed encoder-decoder with attention: a bidirectional GRU encoder,
// a GRU decoder initialized from the final backward encoder state through a
// tanh affine map, additive attention, and an output layer over
// [decoder state; context; previous embedding].
//
// Scoring accepts empty sequences on either side: an empty source yields a
// zero-state decoder with zero context, and an empty target scores just the
// terminating EOS step. Corpus sentences are never empty; search candidates
// can be.
class TranslationModel {
public:
    TranslationModel(ModelConfig cfg, uint64_t seed);
    static TranslationModel from_checkpoint(const Checkpoint& ckpt);

    const ModelConfig& config() const { return cfg_; }
    ParameterStore& store() { return store_; }
    const ParameterStore& store() const { return store_; }

    // --- graph builders, for composing larger objectives ---

    struct Encoded {
        int length = 0;
        NodeRef states;     // [T, 2H] stacked encoder states (invalid when length 0)
        NodeRef attn_keys;  // [T, A] precomputed U_a * h_j
        NodeRef dec_init;   // [H] initial decoder state
    };

    Encoded encode(Graph& g, int slot, std::span<const int> source) const;

    struct StepOutput {
        NodeRef state;       // [H] next decoder state
        NodeRef log_probs;   // [V_out] log-distribution over the next token
    };

    // One decoder step conditioned on the previous state and previous token
    // (BOS for the first step).
    StepOutput decode_step(Graph& g, int slot, const Encoded& enc, NodeRef prev_state,
                           int prev_token) const;

    // Scalar node holding log P(target | source), teacher-forced, including
    // the terminating EOS step.
    NodeRef build_log_prob(Graph& g, int slot, std::span<const int> source,
                           std::span<const int> target) const;
    // Variant on a pre-encoded source, so several targets can share one
    // encoder pass.
    NodeRef build_log_prob(Graph& g, int slot, const Encoded& enc,
                           std::span<const int> target) const;

    // --- convenience evaluation entry points ---

    double log_prob(std::span<const int> source, std::span<const int> target) const;
    // As log_prob but without the final EOS term; used by enumeration checks.
    double prefix_log_prob(std::span<const int> source, std::span<const int> target) const;
    // Accumulates d log_prob / d theta into the store's accumulators.
    double log_prob_grad(std::span<const int> source, std::span<const int> target);

    void validate_sentence_ids(std::span<const int> source, std::span<const int> target) const;

private:
    struct Weights {
        int src_embed, tgt_embed;
        int enc_fwd[9], enc_bwd[9];  // Wz,Uz,bz, Wr,Ur,br, Wc,Uc,bc
        int init_W, init_b;
        int attn_W, attn_U, attn_v;
        int dec[9];
        int out_W, out_b;
    };

    NodeRef gru(Graph& g, int slot, const int idx[9], NodeRef x, NodeRef h) const;
    NodeRef build_targets(Graph& g, int slot, const Encoded& enc, std::span<const int> target,
                          bool include_eos) const;

    ModelConfig cfg_;
    ParameterStore store_;
    Weights w_;
};

}  // namespace semimt
