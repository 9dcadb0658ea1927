#pragma once

#include <span>
#include <vector>

#include "semimt/beam.hpp"
#include "semimt/corpus.hpp"
#include "semimt/model.hpp"

namespace semimt {

struct ObjectiveWeights {
    double lambda1 = 0.1;
    double lambda2 = 0.0;
};

// Reusable per-item gradient buffers for the batch kernels, so parallel runs
// do not allocate a store-sized buffer per item per call.
struct BatchWorkspace {
    std::vector<GradStore> fwd_items;
    std::vector<GradStore> bwd_items;
};

// Mean negative log-likelihood over the batch; gradients of the mean are
// accumulated into `sink`. Items fan out over the worker pool and merge in
// item order, so results are identical for any thread count.
double supervised_batch(const TranslationModel& model, std::span<const SentencePair> batch,
                        GradStore& sink, std::vector<GradStore>* item_buffers = nullptr);

struct Reconstruction {
    double log_marginal = 0.0;
    CandidateSet candidates;
};

// Restricted reconstruction marginal of `observed` through latent sentences
// proposed by `enc` and scored back by `dec`:
//   log sum_{x in top-k} exp(log P(x|observed; enc) + log P(observed|x; dec))
// Computed with log-sum-exp; candidate weights are the normalized terms.
Reconstruction reconstruction_marginal(const TranslationModel& enc, const TranslationModel& dec,
                                       std::span<const int> observed, int k, int beam_width,
                                       int max_len);

// Same marginal over an explicit (frozen) candidate list.
double restricted_log_marginal(const TranslationModel& enc, const TranslationModel& dec,
                               std::span<const int> observed,
                               std::span<const std::vector<int>> candidates);

// Accumulates coeff * d(log marginal)/d(theta) for both parameter sets into
// the sinks, treating the candidate list as constant. The weights on the
// candidate set must already be normalized. Returns the log marginal.
double reconstruction_grads(const TranslationModel& enc, const TranslationModel& dec,
                            std::span<const int> observed, const CandidateSet& candidates,
                            double coeff, GradStore& enc_sink, GradStore& dec_sink);

// Max-weight candidate; ties break toward the lexicographically smaller
// token sequence.
Hypothesis viterbi_latent(const TranslationModel& enc, const TranslationModel& dec,
                          std::span<const int> observed, int k, int beam_width, int max_len);

struct JointBatchResult {
    double sup_loss_fwd = 0.0;      // mean NLL, forward direction
    double sup_loss_bwd = 0.0;      // mean NLL, backward direction
    double recon_tgt = 0.0;         // mean restricted log marginal, target autoencoder
    double recon_src = 0.0;         // mean restricted log marginal, source autoencoder
    bool has_recon_tgt = false;
    bool has_recon_src = false;

    // J contribution of the batch under the given weights.
    double objective(const ObjectiveWeights& w) const {
        double j = -sup_loss_fwd - sup_loss_bwd;
        if (has_recon_tgt) j += w.lambda1 * recon_tgt;
        if (has_recon_src) j += w.lambda2 * recon_src;
        return j;
    }
};

// One parallel batch plus one batch from each monolingual corpus: the two
// supervised terms and the lambda-weighted autoencoder terms, with gradients
// for both models accumulated into the two sinks.
JointBatchResult joint_objective(const TranslationModel& fwd, const TranslationModel& bwd,
                                 std::span<const SentencePair> parallel_batch,
                                 std::span<const Sentence> target_mono_batch,
                                 std::span<const Sentence> source_mono_batch,
                                 const ObjectiveWeights& weights, int k, int beam_width,
                                 GradStore& fwd_sink, GradStore& bwd_sink,
                                 BatchWorkspace* workspace = nullptr);

}  // namespace semimt
