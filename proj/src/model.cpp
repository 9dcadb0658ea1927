#include "semimt/model.hpp"

#include <cmath>

#include "semimt/errors.hpp"
#include "semimt/rng.hpp"

namespace semimt {

namespace {
constexpr double kInitRange = 0.08;
}

nlohmann::json ModelConfig::to_json() const {
    return {{"direction", direction}, {"vocab_in", vocab_in},   {"vocab_out", vocab_out},
            {"embed_dim", embed_dim}, {"hidden_dim", hidden_dim}, {"attn_dim", attn_dim}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
    ModelConfig c;
    try {
        c.direction = j.at("direction").get<std::string>();
        c.vocab_in = j.at("vocab_in").get<int>();
        c.vocab_out = j.at("vocab_out").get<int>();
        c.embed_dim = j.at("embed_dim").get<int>();
        c.hidden_dim = j.at("hidden_dim").get<int>();
        c.attn_dim = j.at("attn_dim").get<int>();
    } catch (const nlohmann::json::exception& e) {
        fail_data(std::string("malformed model config: ") + e.what());
    }
    return c;
}

TranslationModel::TranslationModel(ModelConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    if (cfg_.vocab_in < Vocabulary::kReserved || cfg_.vocab_out < Vocabulary::kReserved)
        fail_data("model: vocabulary sizes must cover the reserved ids");
    if (cfg_.embed_dim <= 0 || cfg_.hidden_dim <= 0 || cfg_.attn_dim <= 0)
        fail_data("model: dimensions must be positive");

    const int E = cfg_.embed_dim;
    const int H = cfg_.hidden_dim;
    const int A = cfg_.attn_dim;

    w_.src_embed = store_.add("src_embed", Tensor::zeros(cfg_.vocab_in, E));
    w_.tgt_embed = store_.add("tgt_embed", Tensor::zeros(cfg_.vocab_out, E));

    auto add_gru = [&](const std::string& prefix, int in_dim, int out[9]) {
        static const char* gate[3] = {"z", "r", "c"};
        for (int gi = 0; gi < 3; ++gi) {
            out[gi * 3 + 0] = store_.add(prefix + "_W" + gate[gi], Tensor::zeros(H, in_dim));
            out[gi * 3 + 1] = store_.add(prefix + "_U" + gate[gi], Tensor::zeros(H, H));
            out[gi * 3 + 2] = store_.add(prefix + "_b" + gate[gi], Tensor::zeros(H));
        }
    };
    add_gru("enc_fwd", E, w_.enc_fwd);
    add_gru("enc_bwd", E, w_.enc_bwd);
    w_.init_W = store_.add("dec_init_W", Tensor::zeros(H, H));
    w_.init_b = store_.add("dec_init_b", Tensor::zeros(H));
    w_.attn_W = store_.add("attn_W", Tensor::zeros(A, H));
    w_.attn_U = store_.add("attn_U", Tensor::zeros(A, 2 * H));
    w_.attn_v = store_.add("attn_v", Tensor::zeros(A));
    add_gru("dec", E + 2 * H, w_.dec);
    w_.out_W = store_.add("out_W", Tensor::zeros(cfg_.vocab_out, H + 2 * H + E));
    w_.out_b = store_.add("out_b", Tensor::zeros(cfg_.vocab_out));

    Rng rng(seed);
    store_.init_uniform(rng, -kInitRange, kInitRange);
}

TranslationModel TranslationModel::from_checkpoint(const Checkpoint& ckpt) {
    TranslationModel m(ModelConfig::from_json(ckpt.header.model_config), 0);
    fill_store(m.store_, ckpt);
    return m;
}

NodeRef TranslationModel::gru(Graph& g, int slot, const int idx[9], NodeRef x, NodeRef h) const {
    return g.gru_cell(x, h, g.param(slot, idx[0]), g.param(slot, idx[1]), g.param(slot, idx[2]),
                      g.param(slot, idx[3]), g.param(slot, idx[4]), g.param(slot, idx[5]),
                      g.param(slot, idx[6]), g.param(slot, idx[7]), g.param(slot, idx[8]));
}

TranslationModel::Encoded TranslationModel::encode(Graph& g, int slot,
                                                   std::span<const int> source) const {
    const int H = cfg_.hidden_dim;
    const int T = static_cast<int>(source.size());
    for (int id : source)
        if (id < 0 || id >= cfg_.vocab_in) fail_data("encode: source token id out of range");

    Encoded enc;
    enc.length = T;

    NodeRef src_embed = g.param(slot, w_.src_embed);
    NodeRef zero_h = g.constant(Tensor::zeros(H));

    if (T == 0) {
        // Degenerate source: decoder starts from the zero state, attention
        // context is pinned to zero in decode_step.
        enc.dec_init = g.tanh(g.affine(g.param(slot, w_.init_W), zero_h, g.param(slot, w_.init_b)));
        return enc;
    }

    std::vector<NodeRef> embeds(T);
    for (int t = 0; t < T; ++t) embeds[t] = g.embed(src_embed, source[t]);

    std::vector<NodeRef> fwd(T), bwd(T);
    NodeRef h = zero_h;
    for (int t = 0; t < T; ++t) {
        h = gru(g, slot, w_.enc_fwd, embeds[t], h);
        fwd[t] = h;
    }
    h = zero_h;
    for (int t = T - 1; t >= 0; --t) {
        h = gru(g, slot, w_.enc_bwd, embeds[t], h);
        bwd[t] = h;
    }

    std::vector<NodeRef> states(T);
    for (int t = 0; t < T; ++t) states[t] = g.concat(fwd[t], bwd[t]);
    enc.states = g.stack_rows(states);

    std::vector<NodeRef> keys(T);
    NodeRef attn_U = g.param(slot, w_.attn_U);
    for (int t = 0; t < T; ++t) keys[t] = g.matvec(attn_U, states[t]);
    enc.attn_keys = g.stack_rows(keys);

    enc.dec_init = g.tanh(g.affine(g.param(slot, w_.init_W), bwd[0], g.param(slot, w_.init_b)));
    return enc;
}

TranslationModel::StepOutput TranslationModel::decode_step(Graph& g, int slot, const Encoded& enc,
                                                           NodeRef prev_state,
                                                           int prev_token) const {
    const int H = cfg_.hidden_dim;
    if (prev_token < 0 || prev_token >= cfg_.vocab_out)
        fail_data("decode_step: previous token id out of range");

    NodeRef prev_embed = g.embed(g.param(slot, w_.tgt_embed), prev_token);

    NodeRef context;
    if (enc.length > 0) {
        NodeRef query = g.matvec(g.param(slot, w_.attn_W), prev_state);
        NodeRef scores = g.matvec(g.tanh(g.add_rowvec(enc.attn_keys, query)),
                                  g.param(slot, w_.attn_v));
        NodeRef alpha = g.softmax(scores);
        context = g.matvec_t(enc.states, alpha);
    } else {
        context = g.constant(Tensor::zeros(2 * H));
    }

    NodeRef dec_in = g.concat(prev_embed, context);
    StepOutput out;
    out.state = gru(g, slot, w_.dec, dec_in, prev_state);
    NodeRef readout = g.concat(g.concat(out.state, context), prev_embed);
    NodeRef logits = g.affine(g.param(slot, w_.out_W), readout, g.param(slot, w_.out_b));
    out.log_probs = g.log_softmax(logits);
    return out;
}

NodeRef TranslationModel::build_targets(Graph& g, int slot, const Encoded& enc,
                                        std::span<const int> target, bool include_eos) const {
    for (int id : target)
        if (id < 0 || id >= cfg_.vocab_out) fail_data("decode: target token id out of range");

    std::vector<NodeRef> terms;
    std::vector<double> coeffs;
    NodeRef state = enc.dec_init;
    int prev = Vocabulary::kBos;
    const size_t steps = target.size() + (include_eos ? 1 : 0);
    terms.reserve(steps);
    for (size_t t = 0; t < steps; ++t) {
        StepOutput out = decode_step(g, slot, enc, state, prev);
        const int gold = t < target.size() ? target[t] : Vocabulary::kEos;
        terms.push_back(g.pick(out.log_probs, gold));
        coeffs.push_back(1.0);
        state = out.state;
        prev = gold;
    }
    if (terms.empty()) return g.scalar(0.0);
    return g.lincomb(terms, coeffs);
}

NodeRef TranslationModel::build_log_prob(Graph& g, int slot, const Encoded& enc,
                                         std::span<const int> target) const {
    return build_targets(g, slot, enc, target, /*include_eos=*/true);
}

NodeRef TranslationModel::build_log_prob(Graph& g, int slot, std::span<const int> source,
                                         std::span<const int> target) const {
    Encoded enc = encode(g, slot, source);
    return build_log_prob(g, slot, enc, target);
}

void TranslationModel::validate_sentence_ids(std::span<const int> source,
                                             std::span<const int> target) const {
    for (int id : source)
        if (id < 0 || id >= cfg_.vocab_in) fail_data("sentence: source token id out of range");
    for (int id : target)
        if (id < 0 || id >= cfg_.vocab_out) fail_data("sentence: target token id out of range");
}

double TranslationModel::log_prob(std::span<const int> source, std::span<const int> target) const {
    Graph g;
    GradStore unused;
    int slot = g.bind(store_, unused);
    return g.scalar_value(build_log_prob(g, slot, source, target));
}

double TranslationModel::prefix_log_prob(std::span<const int> source,
                                         std::span<const int> target) const {
    Graph g;
    GradStore unused;
    int slot = g.bind(store_, unused);
    Encoded enc = encode(g, slot, source);
    return g.scalar_value(build_targets(g, slot, enc, target, /*include_eos=*/false));
}

double TranslationModel::log_prob_grad(std::span<const int> source, std::span<const int> target) {
    Graph g;
    int slot = g.bind(store_, store_.grads());
    NodeRef lp = build_log_prob(g, slot, source, target);
    g.backward(lp);
    return g.scalar_value(lp);
}

}  // namespace semimt
