#include "semimt/training.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "semimt/beam.hpp"
#include "semimt/bleu.hpp"
#include "semimt/errors.hpp"
#include "semimt/rng.hpp"

namespace semimt {

namespace {

constexpr uint64_t kParallelStreamTag = 1;
constexpr uint64_t kTargetMonoStreamTag = 2;
constexpr uint64_t kSourceMonoStreamTag = 3;

ClipNorm parse_clip_norm(const std::string& s) {
    if (s == "l2") return ClipNorm::l2;
    if (s == "linf") return ClipNorm::linf;
    fail_usage("clip_norm must be 'l2' or 'linf', got '" + s + "'");
}

std::string clip_norm_name(ClipNorm n) { return n == ClipNorm::l2 ? "l2" : "linf"; }

// BLEU over id sequences; injective id->text keeps scores identical to
// token-level scoring.
double bleu_on_ids(const std::vector<std::vector<int>>& candidates,
                   const std::vector<Sentence>& references) {
    std::vector<TokenLine> cand(candidates.size());
    std::vector<std::vector<TokenLine>> refs(references.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        for (int id : candidates[i]) cand[i].push_back(std::to_string(id));
        TokenLine r;
        for (int id : references[i]) r.push_back(std::to_string(id));
        refs[i].push_back(std::move(r));
    }
    return corpus_bleu(cand, refs).bleu;
}

}  // namespace

uint64_t model_seed(uint64_t base_seed, std::string_view role) {
    uint64_t h = 1469598103934665603ULL;
    for (char c : role) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return detail::splitmix64(base_seed ^ h);
}

void TrainingConfig::validate() const {
    if (lambda1 < 0.0 || lambda2 < 0.0) fail_usage("lambda weights must be non-negative");
    if (k <= 0) fail_usage("k must be positive");
    if (effective_beam_width() < k) fail_usage("beam_width must be >= k");
    if (!(learning_rate > 0.0)) fail_usage("learning_rate must be positive");
    if (!(clip > 0.0)) fail_usage("clip must be positive");
    if (batch_parallel <= 0 || batch_mono_target <= 0 || batch_mono_source <= 0)
        fail_usage("batch sizes must be positive");
    if (max_iterations < 0) fail_usage("max_iterations must be non-negative");
    if (eval_interval <= 0) fail_usage("eval_interval must be positive");
    if (embed_dim <= 0 || hidden_dim <= 0) fail_usage("model dimensions must be positive");
    if (recon_eval_sample < 0) fail_usage("recon_eval_sample must be non-negative");
}

TrainingConfig TrainingConfig::from_kv(const KvConfig& kv) {
    TrainingConfig c;
    c.lambda1 = kv_get_double(kv, "lambda1", c.lambda1);
    c.lambda2 = kv_get_double(kv, "lambda2", c.lambda2);
    c.k = static_cast<int>(kv_get_int(kv, "k", c.k));
    c.beam_width = static_cast<int>(kv_get_int(kv, "beam_width", c.beam_width));
    c.learning_rate = kv_get_double(kv, "learning_rate", c.learning_rate);
    c.clip = kv_get_double(kv, "clip", c.clip);
    c.clip_norm = parse_clip_norm(kv_get(kv, "clip_norm", clip_norm_name(c.clip_norm)));
    c.batch_parallel = static_cast<int>(kv_get_int(kv, "batch_parallel", c.batch_parallel));
    c.batch_mono_target =
        static_cast<int>(kv_get_int(kv, "batch_mono_target", c.batch_mono_target));
    c.batch_mono_source =
        static_cast<int>(kv_get_int(kv, "batch_mono_source", c.batch_mono_source));
    c.max_iterations = kv_get_int(kv, "max_iterations", c.max_iterations);
    c.eval_interval = kv_get_int(kv, "eval_interval", c.eval_interval);
    c.seed = kv_get_u64(kv, "seed", c.seed);
    c.embed_dim = static_cast<int>(kv_get_int(kv, "embed_dim", c.embed_dim));
    c.hidden_dim = static_cast<int>(kv_get_int(kv, "hidden_dim", c.hidden_dim));
    c.attn_dim = static_cast<int>(kv_get_int(kv, "attn_dim", c.attn_dim));
    c.recon_eval_sample =
        static_cast<int>(kv_get_int(kv, "recon_eval_sample", c.recon_eval_sample));
    c.select_best = kv_get_bool(kv, "select_best", c.select_best);
    c.fine_tune = kv_get_bool(kv, "fine_tune", c.fine_tune);
    c.log_wall_time = kv_get_bool(kv, "log_wall_time", c.log_wall_time);
    c.validate();
    return c;
}

KvConfig TrainingConfig::to_kv() const {
    KvConfig kv;
    auto num = [](double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    kv["lambda1"] = num(lambda1);
    kv["lambda2"] = num(lambda2);
    kv["k"] = std::to_string(k);
    kv["beam_width"] = std::to_string(effective_beam_width());
    kv["learning_rate"] = num(learning_rate);
    kv["clip"] = std::isinf(clip) ? "inf" : num(clip);
    kv["clip_norm"] = clip_norm_name(clip_norm);
    kv["batch_parallel"] = std::to_string(batch_parallel);
    kv["batch_mono_target"] = std::to_string(batch_mono_target);
    kv["batch_mono_source"] = std::to_string(batch_mono_source);
    kv["max_iterations"] = std::to_string(max_iterations);
    kv["eval_interval"] = std::to_string(eval_interval);
    kv["seed"] = std::to_string(seed);
    kv["embed_dim"] = std::to_string(embed_dim);
    kv["hidden_dim"] = std::to_string(hidden_dim);
    kv["attn_dim"] = std::to_string(effective_attn_dim());
    kv["recon_eval_sample"] = std::to_string(recon_eval_sample);
    kv["select_best"] = select_best ? "true" : "false";
    kv["fine_tune"] = fine_tune ? "true" : "false";
    kv["log_wall_time"] = log_wall_time ? "true" : "false";
    return kv;
}

void write_runlog(const std::string& path, const RunLog& log, bool include_wall_time) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_data("cannot open runlog for writing: " + path);
    for (const EvalRecord& r : log.records) {
        nlohmann::json j;
        j["iteration"] = r.iteration;
        j["sup_loss_fwd"] = r.has_sup_fwd ? nlohmann::json(r.sup_loss_fwd) : nullptr;
        j["sup_loss_bwd"] = r.has_sup_bwd ? nlohmann::json(r.sup_loss_bwd) : nullptr;
        j["recon_loss_tgt"] = r.has_recon_tgt ? nlohmann::json(r.recon_loss_tgt) : nullptr;
        j["recon_loss_src"] = r.has_recon_src ? nlohmann::json(r.recon_loss_src) : nullptr;
        j["recon_eval_tgt"] = r.has_recon_eval ? nlohmann::json(r.recon_eval_tgt) : nullptr;
        j["bleu_fwd"] = r.bleu_fwd >= 0.0 ? nlohmann::json(r.bleu_fwd) : nullptr;
        j["bleu_bwd"] = r.bleu_bwd >= 0.0 ? nlohmann::json(r.bleu_bwd) : nullptr;
        j["clip_events_fwd"] = r.clip_events_fwd;
        j["clip_events_bwd"] = r.clip_events_bwd;
        if (include_wall_time) j["wall_time_s"] = r.wall_time_s;
        out << j.dump() << '\n';
    }
    if (!out) fail_data("write failed for runlog: " + path);
}

RunLog read_runlog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open runlog: " + path);
    RunLog log;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            EvalRecord r;
            r.iteration = j.at("iteration").get<long long>();
            auto opt = [&](const char* key, double& dst, bool& flag) {
                if (j.contains(key) && !j[key].is_null()) {
                    dst = j[key].get<double>();
                    flag = true;
                }
            };
            opt("sup_loss_fwd", r.sup_loss_fwd, r.has_sup_fwd);
            opt("sup_loss_bwd", r.sup_loss_bwd, r.has_sup_bwd);
            opt("recon_loss_tgt", r.recon_loss_tgt, r.has_recon_tgt);
            opt("recon_loss_src", r.recon_loss_src, r.has_recon_src);
            opt("recon_eval_tgt", r.recon_eval_tgt, r.has_recon_eval);
            if (j.contains("bleu_fwd") && !j["bleu_fwd"].is_null())
                r.bleu_fwd = j["bleu_fwd"].get<double>();
            if (j.contains("bleu_bwd") && !j["bleu_bwd"].is_null())
                r.bleu_bwd = j["bleu_bwd"].get<double>();
            r.clip_events_fwd = j.value("clip_events_fwd", 0LL);
            r.clip_events_bwd = j.value("clip_events_bwd", 0LL);
            r.wall_time_s = j.value("wall_time_s", 0.0);
            if (!log.records.empty() && r.iteration <= log.records.back().iteration)
                fail_data(path + ":" + std::to_string(lineno) +
                          ": iterations must be strictly increasing");
            log.records.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            fail_data(path + ":" + std::to_string(lineno) + ": malformed record: " + e.what());
        }
    }
    return log;
}

IndexStream::IndexStream(size_t n, uint64_t seed, uint64_t tag) : n_(n), seed_(seed), tag_(tag) {}

size_t IndexStream::at(long long pos) {
    if (n_ == 0) fail_data("index stream over an empty corpus");
    long long epoch = pos / static_cast<long long>(n_);
    if (epoch != cached_epoch_) {
        perm_.resize(n_);
        std::iota(perm_.begin(), perm_.end(), 0u);
        Rng rng = Rng(seed_).fork(tag_).fork(static_cast<uint64_t>(epoch));
        rng.shuffle(perm_);
        cached_epoch_ = epoch;
    }
    return perm_[static_cast<size_t>(pos % static_cast<long long>(n_))];
}

namespace {

struct Snapshot {
    std::vector<Tensor> values;
    long long iteration = -1;
    double bleu = -1.0;

    void take(const ParameterStore& store, long long it, double b) {
        values.clear();
        values.reserve(store.size());
        for (int p = 0; p < store.size(); ++p) values.push_back(store.value(p));
        iteration = it;
        bleu = b;
    }

    void restore(ParameterStore& store) const {
        for (int p = 0; p < store.size(); ++p) store.value(p) = values[p];
    }
};

class TrainLoop {
public:
    TrainLoop(TranslationModel* fwd, TranslationModel* bwd, const TrainData& data,
              const TrainingConfig& cfg, const TrainOptions& opts)
        : fwd_(fwd),
          bwd_(bwd),
          data_(data),
          cfg_(cfg),
          opts_(opts),
          parallel_stream_(data.parallel.size(), cfg.seed, kParallelStreamTag),
          tgt_stream_(data.target_mono.size(), cfg.seed, kTargetMonoStreamTag),
          src_stream_(data.source_mono.size(), cfg.seed, kSourceMonoStreamTag) {
        cfg_.validate();
        if (data_.parallel.empty()) fail_data("training requires a non-empty parallel corpus");
        use_tgt_mono_ = fwd_ && bwd_ && cfg_.lambda1 > 0.0 && !data_.target_mono.empty();
        use_src_mono_ = fwd_ && bwd_ && cfg_.lambda2 > 0.0 && !data_.source_mono.empty();
    }

    RunLog run() {
        start_ = std::chrono::steady_clock::now();
        const long long begin = opts_.start_iteration;
        const long long end = cfg_.max_iterations;
        for (long long it = begin; it < end; ++it) {
            if (it % cfg_.eval_interval == 0) evaluate(it);
            step(it);
        }
        evaluate(end);
        finish();
        return std::move(log_);
    }

private:
    std::vector<SentencePair> parallel_batch(long long it) {
        std::vector<SentencePair> batch(cfg_.batch_parallel);
        long long base = it * cfg_.batch_parallel;
        for (int b = 0; b < cfg_.batch_parallel; ++b)
            batch[b] = data_.parallel.pairs[parallel_stream_.at(base + b)];
        return batch;
    }

    std::vector<Sentence> mono_batch(IndexStream& stream, const MonolingualCorpus& corpus,
                                     int batch_size, long long it) {
        std::vector<Sentence> batch(batch_size);
        long long base = it * batch_size;
        for (int b = 0; b < batch_size; ++b) batch[b] = corpus.sentences[stream.at(base + b)];
        return batch;
    }

    void step(long long it) {
        auto pbatch = parallel_batch(it);
        JointBatchResult r;
        if (fwd_ && bwd_) {
            std::vector<Sentence> tbatch, sbatch;
            if (use_tgt_mono_)
                tbatch = mono_batch(tgt_stream_, data_.target_mono, cfg_.batch_mono_target, it);
            if (use_src_mono_)
                sbatch = mono_batch(src_stream_, data_.source_mono, cfg_.batch_mono_source, it);
            ObjectiveWeights w{cfg_.lambda1, cfg_.lambda2};
            r = joint_objective(*fwd_, *bwd_, pbatch, tbatch, sbatch, w, cfg_.k,
                                cfg_.effective_beam_width(), fwd_->store().grads(),
                                bwd_->store().grads(), &workspace_);
        } else if (fwd_) {
            r.sup_loss_fwd = supervised_batch(*fwd_, pbatch, fwd_->store().grads(),
                                              &workspace_.fwd_items);
        } else {
            std::vector<SentencePair> reversed(pbatch.size());
            for (size_t i = 0; i < pbatch.size(); ++i)
                reversed[i] = {pbatch[i].tgt, pbatch[i].src};
            r.sup_loss_bwd = supervised_batch(*bwd_, reversed, bwd_->store().grads(),
                                              &workspace_.bwd_items);
        }

        if (fwd_ && !std::isfinite(r.sup_loss_fwd))
            fail_numeric("diverged at iteration " + std::to_string(it) +
                         ": non-finite forward supervised loss");
        if (bwd_ && !std::isfinite(r.sup_loss_bwd))
            fail_numeric("diverged at iteration " + std::to_string(it) +
                         ": non-finite backward supervised loss");
        if ((r.has_recon_tgt && !std::isfinite(r.recon_tgt)) ||
            (r.has_recon_src && !std::isfinite(r.recon_src)))
            fail_numeric("diverged at iteration " + std::to_string(it) +
                         ": non-finite reconstruction marginal");

        if (fwd_) {
            StepResult s = clip_and_step(fwd_->store(), cfg_.learning_rate, cfg_.clip,
                                         cfg_.clip_norm);
            window_clips_fwd_ += s.clipped ? 1 : 0;
            window_sup_fwd_ += r.sup_loss_fwd;
        }
        if (bwd_) {
            StepResult s = clip_and_step(bwd_->store(), cfg_.learning_rate, cfg_.clip,
                                         cfg_.clip_norm);
            window_clips_bwd_ += s.clipped ? 1 : 0;
            window_sup_bwd_ += r.sup_loss_bwd;
        }
        if (r.has_recon_tgt) {
            window_recon_tgt_ += r.recon_tgt;
            ++window_recon_tgt_n_;
        }
        if (r.has_recon_src) {
            window_recon_src_ += r.recon_src;
            ++window_recon_src_n_;
        }
        ++window_n_;
    }

    void evaluate(long long it) {
        EvalRecord rec;
        rec.iteration = it;
        if (window_n_ > 0) {
            if (fwd_) {
                rec.sup_loss_fwd = window_sup_fwd_ / window_n_;
                rec.has_sup_fwd = true;
            }
            if (bwd_) {
                rec.sup_loss_bwd = window_sup_bwd_ / window_n_;
                rec.has_sup_bwd = true;
            }
        } else {
            // First record: instantaneous forward-only measurement.
            auto pbatch = parallel_batch(it);
            GradStore scratch;
            if (fwd_) {
                double nll = 0.0;
                for (const auto& p : pbatch) nll -= fwd_->log_prob(p.src, p.tgt);
                rec.sup_loss_fwd = nll / pbatch.size();
                rec.has_sup_fwd = true;
            }
            if (bwd_) {
                double nll = 0.0;
                for (const auto& p : pbatch) nll -= bwd_->log_prob(p.tgt, p.src);
                rec.sup_loss_bwd = nll / pbatch.size();
                rec.has_sup_bwd = true;
            }
        }
        if (window_recon_tgt_n_ > 0) {
            rec.recon_loss_tgt = -window_recon_tgt_ / window_recon_tgt_n_;
            rec.has_recon_tgt = true;
        }
        if (window_recon_src_n_ > 0) {
            rec.recon_loss_src = -window_recon_src_ / window_recon_src_n_;
            rec.has_recon_src = true;
        }
        rec.clip_events_fwd = window_clips_fwd_;
        rec.clip_events_bwd = window_clips_bwd_;
        window_sup_fwd_ = window_sup_bwd_ = window_recon_tgt_ = window_recon_src_ = 0.0;
        window_n_ = window_recon_tgt_n_ = window_recon_src_n_ = 0;
        window_clips_fwd_ = window_clips_bwd_ = 0;

        if (!data_.validation.empty()) {
            std::vector<Sentence> vsrc, vtgt;
            for (const auto& p : data_.validation.pairs) {
                vsrc.push_back(p.src);
                vtgt.push_back(p.tgt);
            }
            if (fwd_) rec.bleu_fwd = bleu_on_ids(greedy_translate_all(*fwd_, vsrc), vtgt);
            if (bwd_) rec.bleu_bwd = bleu_on_ids(greedy_translate_all(*bwd_, vtgt), vsrc);

            if (fwd_ && bwd_ && cfg_.recon_eval_sample > 0) {
                size_t n = std::min(static_cast<size_t>(cfg_.recon_eval_sample), vtgt.size());
                std::vector<Sentence> held(vtgt.begin(), vtgt.begin() + n);
                ReconstructionReport rr = reconstruction_report(
                    *bwd_, *fwd_, held, cfg_.k, cfg_.effective_beam_width());
                rec.recon_eval_tgt = rr.mean_log_marginal;
                rec.has_recon_eval = true;
            }
        }

        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        log_.records.push_back(rec);

        if (fwd_ && rec.bleu_fwd > best_fwd_.bleu) best_fwd_.take(fwd_->store(), it, rec.bleu_fwd);
        if (bwd_ && rec.bleu_bwd > best_bwd_.bleu) best_bwd_.take(bwd_->store(), it, rec.bleu_bwd);

        if (!opts_.checkpoint_dir.empty()) save_checkpoints(it, "latest");
        if (opts_.on_eval)
            opts_.on_eval(rec, fwd_ ? *fwd_ : *bwd_, bwd_ ? *bwd_ : *fwd_);
    }

    void save_checkpoints(long long it, const std::string& tag) {
        namespace fs = std::filesystem;
        fs::create_directories(opts_.checkpoint_dir);
        auto save_one = [&](const TranslationModel& m, const std::string& name) {
            CheckpointHeader h;
            h.model_config = m.config().to_json();
            h.rng_state = std::to_string(cfg_.seed);
            h.iteration = it;
            save_checkpoint(opts_.checkpoint_dir + "/" + name + "_" + tag + ".json", h,
                            m.store());
        };
        if (fwd_) save_one(*fwd_, "fwd");
        if (bwd_) save_one(*bwd_, "bwd");
    }

    void finish() {
        if (cfg_.select_best && !data_.validation.empty()) {
            if (fwd_ && best_fwd_.iteration >= 0) best_fwd_.restore(fwd_->store());
            if (bwd_ && best_bwd_.iteration >= 0) best_bwd_.restore(bwd_->store());
        }
        if (!opts_.checkpoint_dir.empty()) {
            save_checkpoints(cfg_.max_iterations, "final");
            if (cfg_.select_best && !data_.validation.empty()) {
                // Final checkpoints already reflect the restored best weights;
                // record the selection point too.
                if (fwd_ && best_fwd_.iteration >= 0) {
                    CheckpointHeader h;
                    h.model_config = fwd_->config().to_json();
                    h.rng_state = std::to_string(cfg_.seed);
                    h.iteration = best_fwd_.iteration;
                    save_checkpoint(opts_.checkpoint_dir + "/fwd_best.json", h, fwd_->store());
                }
                if (bwd_ && best_bwd_.iteration >= 0) {
                    CheckpointHeader h;
                    h.model_config = bwd_->config().to_json();
                    h.rng_state = std::to_string(cfg_.seed);
                    h.iteration = best_bwd_.iteration;
                    save_checkpoint(opts_.checkpoint_dir + "/bwd_best.json", h, bwd_->store());
                }
            }
        }
    }

    TranslationModel* fwd_;
    TranslationModel* bwd_;
    const TrainData& data_;
    TrainingConfig cfg_;
    TrainOptions opts_;
    IndexStream parallel_stream_, tgt_stream_, src_stream_;
    BatchWorkspace workspace_;
    RunLog log_;
    bool use_tgt_mono_ = false;
    bool use_src_mono_ = false;

    double window_sup_fwd_ = 0.0, window_sup_bwd_ = 0.0;
    double window_recon_tgt_ = 0.0, window_recon_src_ = 0.0;
    long long window_n_ = 0, window_recon_tgt_n_ = 0, window_recon_src_n_ = 0;
    long long window_clips_fwd_ = 0, window_clips_bwd_ = 0;
    Snapshot best_fwd_, best_bwd_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunLog pretrain_supervised(TranslationModel& fwd, TranslationModel& bwd, const ParallelCorpus& d,
                           const TrainingConfig& cfg, const ParallelCorpus* validation,
                           const TrainOptions& opts) {
    TrainingConfig sup = cfg;
    sup.lambda1 = 0.0;
    sup.lambda2 = 0.0;
    TrainData data;
    data.parallel = d;
    if (validation) data.validation = *validation;
    return TrainLoop(&fwd, &bwd, data, sup, opts).run();
}

RunLog train_joint(TranslationModel& fwd, TranslationModel& bwd, const TrainData& data,
                   const TrainingConfig& cfg, const TrainOptions& opts) {
    return TrainLoop(&fwd, &bwd, data, cfg, opts).run();
}

BackTranslationOutput back_translation_baseline(const ModelConfig& fwd_cfg,
                                                const ModelConfig& bwd_cfg,
                                                const ParallelCorpus& d,
                                                const MonolingualCorpus& t,
                                                const TrainingConfig& cfg,
                                                const ParallelCorpus* validation) {
    cfg.validate();
    if (d.empty()) fail_data("back_translation: empty parallel corpus");

    TrainData reverse_data;
    reverse_data.parallel = d;
    if (validation) reverse_data.validation = *validation;

    // Step 1: train the target-to-source model on the parallel corpus.
    TranslationModel bwd(bwd_cfg, model_seed(cfg.seed, "bwd"));
    {
        TrainingConfig sup = cfg;
        sup.lambda1 = 0.0;
        sup.lambda2 = 0.0;
        TrainLoop(nullptr, &bwd, reverse_data, sup, {}).run();
    }

    // Step 2: translate the target monolingual corpus into pseudo-sources.
    auto pseudo_sources = greedy_translate_all(bwd, t.sentences);

    // Step 3: append pseudo-pairs to the parallel corpus; empty translations
    // are dropped and counted.
    BackTranslationOutput out{TranslationModel(fwd_cfg, model_seed(cfg.seed, "fwd")),
                              std::move(bwd),
                              d,
                              0,
                              {}};
    for (size_t i = 0; i < pseudo_sources.size(); ++i) {
        if (pseudo_sources[i].empty()) {
            ++out.dropped_empty;
            continue;
        }
        out.augmented.pairs.push_back({std::move(pseudo_sources[i]), t.sentences[i]});
    }

    // Step 4: retrain the forward model on the union with the same recipe.
    TrainData fwd_data;
    fwd_data.parallel = out.augmented;
    if (validation) fwd_data.validation = *validation;
    TrainingConfig sup = cfg;
    sup.lambda1 = 0.0;
    sup.lambda2 = 0.0;
    if (cfg.fine_tune) {
        TrainData plain;
        plain.parallel = d;
        if (validation) plain.validation = *validation;
        TrainLoop(&out.fwd, nullptr, plain, sup, {}).run();
    }
    out.log = TrainLoop(&out.fwd, nullptr, fwd_data, sup, {}).run();
    return out;
}

}  // namespace semimt
