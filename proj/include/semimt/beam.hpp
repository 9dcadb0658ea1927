#pragma once

#include <span>
#include <vector>

#include "semimt/model.hpp"

namespace semimt {

// One completed search hypothesis. Tokens never contain BOS/EOS; the empty
// sequence (immediate EOS) is a legal hypothesis.
struct Hypothesis {
    std::vector<int> tokens;
    double log_score = 0.0;
};

// Top-k candidate list, descending log_score with lexicographic tie-break.
// Weights are filled by the reconstruction marginal.
struct CandidateSet {
    std::vector<Hypothesis> hypotheses;
    std::vector<double> weights;
};

// Orders by score descending, then lexicographically smaller token sequence.
bool hypothesis_before(const Hypothesis& a, const Hypothesis& b);

int default_max_len(size_t input_len);

// Beam search over the output alphabet (all ids except BOS/EOS; UNK is a
// legal output token). Hypotheses still alive at max_len are force-completed
// with EOS. Every returned log_score equals log_prob(model, input, tokens).
CandidateSet beam_search(const TranslationModel& model, std::span<const int> input,
                         int beam_width, int k, int max_len);

// beam_search with beam_width = 1, k = 1, keeping only the token sequence.
std::vector<int> greedy_translate(const TranslationModel& model, std::span<const int> input,
                                  int max_len);

// Greedy-translates every sentence (max_len = default per sentence); fans
// out over the worker pool with item-indexed outputs.
std::vector<std::vector<int>> greedy_translate_all(const TranslationModel& model,
                                                   std::span<const Sentence> inputs);

}  // namespace semimt
