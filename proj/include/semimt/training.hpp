#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semimt/config.hpp"
#include "semimt/corpus.hpp"
#include "semimt/model.hpp"
#include "semimt/semisup.hpp"

namespace semimt {

struct TrainingConfig {
    double lambda1 = 0.1;
    double lambda2 = 0.0;
    int k = 10;
    int beam_width = 0;  // 0 -> 2k
    double learning_rate = 0.2;
    double clip = 0.05;
    ClipNorm clip_norm = ClipNorm::l2;
    int batch_parallel = 16;
    int batch_mono_target = 16;
    int batch_mono_source = 16;
    long long max_iterations = 1000;
    long long eval_interval = 100;
    uint64_t seed = 1;
    int embed_dim = 32;
    int hidden_dim = 64;
    int attn_dim = 0;  // 0 -> hidden_dim
    int recon_eval_sample = 32;
    bool select_best = true;  // restore the best-validation-BLEU checkpoint after training
    bool fine_tune = false;   // back-translation step 4: continue from a parallel-only model
    bool log_wall_time = false;  // wall time makes runlog files non-reproducible

    int effective_beam_width() const { return beam_width > 0 ? beam_width : 2 * k; }
    int effective_attn_dim() const { return attn_dim > 0 ? attn_dim : hidden_dim; }
    void validate() const;

    static TrainingConfig from_kv(const KvConfig& cfg);
    KvConfig to_kv() const;
};

// Seed derivation shared by every pipeline, so e.g. the back-translation
// baseline initializes its forward model exactly like plain supervised
// training would.
uint64_t model_seed(uint64_t base_seed, std::string_view role);

// One record per evaluation point.
struct EvalRecord {
    long long iteration = 0;
    bool has_sup_fwd = false;
    bool has_sup_bwd = false;
    double sup_loss_fwd = 0.0;
    double sup_loss_bwd = 0.0;
    double recon_loss_tgt = 0.0;  // -mean restricted log marginal over training batches
    double recon_loss_src = 0.0;
    double recon_eval_tgt = 0.0;  // mean restricted log marginal on the held mono sample
    bool has_recon_tgt = false;
    bool has_recon_src = false;
    bool has_recon_eval = false;
    double bleu_fwd = -1.0;  // -1 when no validation set
    double bleu_bwd = -1.0;
    long long clip_events_fwd = 0;
    long long clip_events_bwd = 0;
    double wall_time_s = 0.0;
};

struct RunLog {
    std::vector<EvalRecord> records;
};

void write_runlog(const std::string& path, const RunLog& log, bool include_wall_time);
RunLog read_runlog(const std::string& path);

struct TrainData {
    ParallelCorpus parallel;
    MonolingualCorpus target_mono;
    MonolingualCorpus source_mono;
    ParallelCorpus validation;  // optional; enables BLEU logging and model selection
};

// Called at every evaluation point, after the record is appended.
using EvalHook = std::function<void(const EvalRecord&, const TranslationModel& fwd,
                                    const TranslationModel& bwd)>;

struct TrainOptions {
    std::string checkpoint_dir;  // empty: keep checkpoints in memory only
    long long start_iteration = 0;
    EvalHook on_eval;
};

// Mini-batch SGD on the supervised likelihood for both directions.
RunLog pretrain_supervised(TranslationModel& fwd, TranslationModel& bwd, const ParallelCorpus& d,
                           const TrainingConfig& cfg, const ParallelCorpus* validation = nullptr,
                           const TrainOptions& opts = {});

// Joint semi-supervised training: per iteration, one parallel batch plus one
// batch from each monolingual corpus feed the joint objective; both stores
// are clipped and stepped once.
RunLog train_joint(TranslationModel& fwd, TranslationModel& bwd, const TrainData& data,
                   const TrainingConfig& cfg, const TrainOptions& opts = {});

struct BackTranslationOutput {
    TranslationModel fwd;
    TranslationModel bwd;
    ParallelCorpus augmented;      // original pairs first, pseudo-pairs appended
    size_t dropped_empty = 0;      // pseudo-pairs discarded for empty translations
    RunLog log;                    // from the final retraining stage
};

// Pseudo-parallel baseline: (1) train the reverse model on the parallel
// corpus, (2) translate the target monolingual corpus, (3) append the
// pseudo-pairs to the parallel corpus, (4) retrain the forward model on the
// union (from scratch by default, from a parallel-only model with
// cfg.fine_tune).
BackTranslationOutput back_translation_baseline(const ModelConfig& fwd_cfg,
                                                const ModelConfig& bwd_cfg,
                                                const ParallelCorpus& d,
                                                const MonolingualCorpus& t,
                                                const TrainingConfig& cfg,
                                                const ParallelCorpus* validation = nullptr);

// Deterministic infinite index stream: per-epoch seeded shuffles with
// wraparound. Position-addressable so training can resume mid-stream.
class IndexStream {
public:
    IndexStream(size_t n, uint64_t seed, uint64_t tag);
    size_t at(long long pos);

private:
    size_t n_;
    uint64_t seed_, tag_;
    long long cached_epoch_ = -1;
    std::vector<uint32_t> perm_;
};

}  // namespace semimt
