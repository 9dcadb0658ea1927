#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "semimt/corpus.hpp"
#include "semimt/model.hpp"

namespace semimt {

// Corpus-level BLEU with up-to-4-gram modified precision, case-insensitive.
struct EvalReport {
    double bleu = 0.0;  // [0, 100]
    std::array<double, 4> precisions{};
    double brevity_penalty = 1.0;
    long long candidate_length = 0;
    long long reference_length = 0;  // sum of closest reference lengths
    bool smoothed = false;

    nlohmann::json to_json() const;
};

// candidates[i] scored against references[i] (one or more references each).
// Tokens are case-folded before counting; effective reference length per
// sentence is the closest length, ties toward the shorter. Unsmoothed by
// default: any zero n-gram precision forces a zero score. With smoothing,
// counts get add-one smoothing and the report is flagged.
EvalReport corpus_bleu(const std::vector<TokenLine>& candidates,
                       const std::vector<std::vector<TokenLine>>& references,
                       bool smoothed = false);

struct ReconstructionExample {
    Sentence observed;
    std::vector<int> viterbi_latent;
    double viterbi_weight = 0.0;
    double log_marginal = 0.0;
};

struct ReconstructionReport {
    double mean_log_marginal = 0.0;
    std::vector<ReconstructionExample> examples;
};

// Averages the restricted reconstruction marginal over a monolingual sample
// and keeps the max-weight latent per sentence for inspection.
ReconstructionReport reconstruction_report(const TranslationModel& enc,
                                           const TranslationModel& dec,
                                           const std::vector<Sentence>& sample, int k,
                                           int beam_width);

}  // namespace semimt
