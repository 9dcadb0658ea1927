#include "semimt/semisup.hpp"

#include <algorithm>
#include <cmath>

#include "semimt/errors.hpp"
#include "semimt/parallel.hpp"

namespace semimt {

namespace {

// Runs body(i, sink_i) for every batch item and merges per-item gradients
// into `sink` in item order. The serial path accumulates directly into
// `sink`, which produces bitwise-identical sums.
template <class Body>
void batched_grads(int n, GradStore& sink, std::vector<GradStore>* buffers, Body&& body) {
    const bool fan_out = par::threads() > 1 && n > 1;
    if (!fan_out) {
        for (int i = 0; i < n; ++i) body(i, sink);
        return;
    }
    std::vector<GradStore> local;
    std::vector<GradStore>& bufs = buffers ? *buffers : local;
    if (bufs.size() < static_cast<size_t>(n)) bufs.resize(n);
    par::for_each_item(n, [&](int i) {
        bufs[i].ensure_like_of(sink);
        bufs[i].clear();
        body(i, bufs[i]);
    });
    for (int i = 0; i < n; ++i) sink.merge(bufs[i]);
}

}  // namespace

double supervised_batch(const TranslationModel& model, std::span<const SentencePair> batch,
                        GradStore& sink, std::vector<GradStore>* item_buffers) {
    if (batch.empty()) fail_data("supervised_batch: empty batch");
    sink.ensure_like(model.store().values());
    const int n = static_cast<int>(batch.size());
    const double inv_n = 1.0 / n;
    std::vector<double> nll(n);
    batched_grads(n, sink, item_buffers, [&](int i, GradStore& out) {
        Graph g;
        int slot = g.bind(model.store(), out);
        NodeRef lp = model.build_log_prob(g, slot, batch[i].src, batch[i].tgt);
        nll[i] = -g.scalar_value(lp);
        NodeRef loss = g.scale_shift(lp, -inv_n, 0.0);
        g.backward(loss);
    });
    double mean = 0.0;
    for (double v : nll) mean += v;
    return mean * inv_n;
}

namespace {

// Scores every candidate under both factors inside one graph and reduces
// with log-sum-exp, so one backward pass yields the exact gradients of the
// restricted marginal for both parameter sets.
struct MarginalGraph {
    Graph g;
    NodeRef log_marginal;
    std::vector<double> scores;  // joint score per candidate
};

MarginalGraph build_marginal_graph(const TranslationModel& enc, const TranslationModel& dec,
                                   std::span<const int> observed,
                                   std::span<const std::vector<int>> candidates,
                                   GradStore& enc_sink, GradStore& dec_sink) {
    if (candidates.empty()) fail_data("reconstruction: empty candidate set");
    MarginalGraph m;
    int enc_slot = m.g.bind(enc.store(), enc_sink);
    int dec_slot = m.g.bind(dec.store(), dec_sink);
    TranslationModel::Encoded enc_obs = enc.encode(m.g, enc_slot, observed);
    std::vector<NodeRef> terms;
    terms.reserve(candidates.size());
    for (const std::vector<int>& cand : candidates) {
        NodeRef s_enc = enc.build_log_prob(m.g, enc_slot, enc_obs, cand);
        NodeRef s_dec = dec.build_log_prob(m.g, dec_slot, cand, observed);
        NodeRef joint = m.g.add(s_enc, s_dec);
        m.scores.push_back(m.g.scalar_value(joint));
        terms.push_back(joint);
    }
    m.log_marginal = m.g.logsumexp(terms);
    return m;
}

std::vector<std::vector<int>> candidate_tokens(const CandidateSet& set) {
    std::vector<std::vector<int>> out;
    out.reserve(set.hypotheses.size());
    for (const Hypothesis& h : set.hypotheses) out.push_back(h.tokens);
    return out;
}

}  // namespace

Reconstruction reconstruction_marginal(const TranslationModel& enc, const TranslationModel& dec,
                                       std::span<const int> observed, int k, int beam_width,
                                       int max_len) {
    if (observed.empty()) fail_data("reconstruction: empty observed sentence");
    Reconstruction r;
    r.candidates = beam_search(enc, observed, beam_width, k, max_len);

    GradStore enc_unused, dec_unused;
    auto cands = candidate_tokens(r.candidates);
    MarginalGraph m =
        build_marginal_graph(enc, dec, observed, cands, enc_unused, dec_unused);
    r.log_marginal = m.g.scalar_value(m.log_marginal);
    r.candidates.weights.resize(cands.size());
    for (size_t i = 0; i < cands.size(); ++i)
        r.candidates.weights[i] = std::exp(m.scores[i] - r.log_marginal);
    return r;
}

double restricted_log_marginal(const TranslationModel& enc, const TranslationModel& dec,
                               std::span<const int> observed,
                               std::span<const std::vector<int>> candidates) {
    GradStore enc_unused, dec_unused;
    MarginalGraph m = build_marginal_graph(enc, dec, observed, candidates, enc_unused, dec_unused);
    return m.g.scalar_value(m.log_marginal);
}

double reconstruction_grads(const TranslationModel& enc, const TranslationModel& dec,
                            std::span<const int> observed, const CandidateSet& candidates,
                            double coeff, GradStore& enc_sink, GradStore& dec_sink) {
    if (candidates.weights.size() != candidates.hypotheses.size())
        fail_data("reconstruction_grads: candidate weights missing");
    double wsum = 0.0;
    for (double w : candidates.weights) wsum += w;
    if (std::fabs(wsum - 1.0) > 1e-8)
        fail_numeric("reconstruction_grads: candidate weights not normalized");

    auto cands = candidate_tokens(candidates);
    MarginalGraph m = build_marginal_graph(enc, dec, observed, cands, enc_sink, dec_sink);
    NodeRef loss = m.g.scale_shift(m.log_marginal, coeff, 0.0);
    m.g.backward(loss);
    return m.g.scalar_value(m.log_marginal);
}

Hypothesis viterbi_latent(const TranslationModel& enc, const TranslationModel& dec,
                          std::span<const int> observed, int k, int beam_width, int max_len) {
    Reconstruction r = reconstruction_marginal(enc, dec, observed, k, beam_width, max_len);
    size_t best = 0;
    for (size_t i = 1; i < r.candidates.hypotheses.size(); ++i) {
        double wi = r.candidates.weights[i];
        double wb = r.candidates.weights[best];
        if (wi > wb ||
            (wi == wb && r.candidates.hypotheses[i].tokens < r.candidates.hypotheses[best].tokens))
            best = i;
    }
    return r.candidates.hypotheses[best];
}

namespace {

// Mean restricted log marginal over a mono batch; coeff -lambda/n per item.
double reconstruction_batch(const TranslationModel& enc, const TranslationModel& dec,
                            std::span<const Sentence> batch, double lambda, int k, int beam_width,
                            GradStore& enc_sink, GradStore& dec_sink,
                            std::vector<GradStore>* enc_buffers,
                            std::vector<GradStore>* dec_buffers) {
    enc_sink.ensure_like(enc.store().values());
    dec_sink.ensure_like(dec.store().values());
    const int n = static_cast<int>(batch.size());
    const double coeff = -lambda / n;
    std::vector<double> marginals(n);

    const bool fan_out = par::threads() > 1 && n > 1;
    auto run_item = [&](int i, GradStore& eout, GradStore& dout) {
        const Sentence& y = batch[i];
        CandidateSet cands = beam_search(enc, y, beam_width, k, default_max_len(y.size()));
        auto toks = candidate_tokens(cands);
        MarginalGraph m = build_marginal_graph(enc, dec, y, toks, eout, dout);
        marginals[i] = m.g.scalar_value(m.log_marginal);
        NodeRef loss = m.g.scale_shift(m.log_marginal, coeff, 0.0);
        m.g.backward(loss);
    };

    if (!fan_out) {
        for (int i = 0; i < n; ++i) run_item(i, enc_sink, dec_sink);
    } else {
        std::vector<GradStore> local_e, local_d;
        std::vector<GradStore>& ebufs = enc_buffers ? *enc_buffers : local_e;
        std::vector<GradStore>& dbufs = dec_buffers ? *dec_buffers : local_d;
        if (ebufs.size() < static_cast<size_t>(n)) ebufs.resize(n);
        if (dbufs.size() < static_cast<size_t>(n)) dbufs.resize(n);
        par::for_each_item(n, [&](int i) {
            ebufs[i].ensure_like_of(enc_sink);
            dbufs[i].ensure_like_of(dec_sink);
            ebufs[i].clear();
            dbufs[i].clear();
            run_item(i, ebufs[i], dbufs[i]);
        });
        for (int i = 0; i < n; ++i) {
            enc_sink.merge(ebufs[i]);
            dec_sink.merge(dbufs[i]);
        }
    }

    double mean = 0.0;
    for (double v : marginals) mean += v;
    return mean / n;
}

}  // namespace

JointBatchResult joint_objective(const TranslationModel& fwd, const TranslationModel& bwd,
                                 std::span<const SentencePair> parallel_batch,
                                 std::span<const Sentence> target_mono_batch,
                                 std::span<const Sentence> source_mono_batch,
                                 const ObjectiveWeights& weights, int k, int beam_width,
                                 GradStore& fwd_sink, GradStore& bwd_sink,
                                 BatchWorkspace* workspace) {
    if (parallel_batch.empty() && target_mono_batch.empty() && source_mono_batch.empty())
        fail_data("joint_objective: all batches empty");
    if (weights.lambda1 < 0.0 || weights.lambda2 < 0.0)
        fail_data("joint_objective: lambda weights must be non-negative");

    JointBatchResult r;
    std::vector<GradStore>* fb = workspace ? &workspace->fwd_items : nullptr;
    std::vector<GradStore>* bb = workspace ? &workspace->bwd_items : nullptr;

    if (!parallel_batch.empty()) {
        r.sup_loss_fwd = supervised_batch(fwd, parallel_batch, fwd_sink, fb);
        std::vector<SentencePair> reversed(parallel_batch.size());
        for (size_t i = 0; i < parallel_batch.size(); ++i)
            reversed[i] = {parallel_batch[i].tgt, parallel_batch[i].src};
        r.sup_loss_bwd = supervised_batch(bwd, reversed, bwd_sink, bb);
    }

    if (weights.lambda1 > 0.0 && !target_mono_batch.empty()) {
        // Target autoencoder: bwd proposes latent sources, fwd reconstructs.
        r.recon_tgt = reconstruction_batch(bwd, fwd, target_mono_batch, weights.lambda1, k,
                                           beam_width, bwd_sink, fwd_sink, bb, fb);
        r.has_recon_tgt = true;
    }
    if (weights.lambda2 > 0.0 && !source_mono_batch.empty()) {
        // Source autoencoder: fwd proposes latent targets, bwd reconstructs.
        r.recon_src = reconstruction_batch(fwd, bwd, source_mono_batch, weights.lambda2, k,
                                           beam_width, fwd_sink, bwd_sink, fb, bb);
        r.has_recon_src = true;
    }
    return r;
}

}  // namespace semimt
