#include "semimt/beam.hpp"

#include <algorithm>

#include "semimt/errors.hpp"
#include "semimt/parallel.hpp"

namespace semimt {

bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    return a.tokens < b.tokens;
}

int default_max_len(size_t input_len) { return 2 * static_cast<int>(input_len) + 3; }

namespace {

struct Beam {
    NodeRef state;
    std::vector<int> tokens;
    double score = 0.0;
    int prev_token = Vocabulary::kBos;
};

}  // namespace

CandidateSet beam_search(const TranslationModel& model, std::span<const int> input,
                         int beam_width, int k, int max_len) {
    if (k <= 0) fail_data("beam_search: k must be positive");
    if (beam_width < k) fail_data("beam_search: beam_width must be >= k");
    if (max_len <= 0) fail_data("beam_search: max_len must be positive");
    if (input.empty()) fail_data("beam_search: empty input");

    const int vocab = model.config().vocab_out;
    Graph g;
    GradStore unused;
    int slot = g.bind(model.store(), unused);
    TranslationModel::Encoded enc = model.encode(g, slot, input);

    std::vector<Beam> live;
    live.push_back({enc.dec_init, {}, 0.0, Vocabulary::kBos});
    std::vector<Hypothesis> completed;

    for (int step = 0; step < max_len && !live.empty(); ++step) {
        std::vector<Beam> expansions;
        expansions.reserve(live.size() * static_cast<size_t>(vocab));
        for (Beam& hyp : live) {
            auto out = model.decode_step(g, slot, enc, hyp.state, hyp.prev_token);
            const Tensor& logp = g.value(out.log_probs);
            completed.push_back({hyp.tokens, hyp.score + logp[Vocabulary::kEos]});
            for (int v = 0; v < vocab; ++v) {
                if (v == Vocabulary::kBos || v == Vocabulary::kEos) continue;
                Beam child;
                child.state = out.state;
                child.tokens = hyp.tokens;
                child.tokens.push_back(v);
                child.score = hyp.score + logp[v];
                child.prev_token = v;
                expansions.push_back(std::move(child));
            }
        }
        auto cmp = [](const Beam& a, const Beam& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.tokens < b.tokens;
        };
        if (static_cast<int>(expansions.size()) > beam_width) {
            std::partial_sort(expansions.begin(), expansions.begin() + beam_width,
                              expansions.end(), cmp);
            expansions.resize(beam_width);
        } else {
            std::sort(expansions.begin(), expansions.end(), cmp);
        }
        live = std::move(expansions);
    }

    // Anything still alive hit the length cap; force-complete with EOS.
    for (Beam& hyp : live) {
        auto out = model.decode_step(g, slot, enc, hyp.state, hyp.prev_token);
        completed.push_back(
            {std::move(hyp.tokens), hyp.score + g.value(out.log_probs)[Vocabulary::kEos]});
    }

    std::sort(completed.begin(), completed.end(), hypothesis_before);
    // Distinct prefixes make duplicates impossible; dedupe anyway.
    completed.erase(std::unique(completed.begin(), completed.end(),
                                [](const Hypothesis& a, const Hypothesis& b) {
                                    return a.tokens == b.tokens;
                                }),
                    completed.end());
    if (static_cast<int>(completed.size()) > k) completed.resize(k);

    CandidateSet out;
    out.hypotheses = std::move(completed);
    return out;
}

std::vector<int> greedy_translate(const TranslationModel& model, std::span<const int> input,
                                  int max_len) {
    if (input.empty()) fail_data("greedy_translate: empty input");
    CandidateSet c = beam_search(model, input, 1, 1, max_len);
    return std::move(c.hypotheses.front().tokens);
}

std::vector<std::vector<int>> greedy_translate_all(const TranslationModel& model,
                                                   std::span<const Sentence> inputs) {
    std::vector<std::vector<int>> out(inputs.size());
    par::for_each_item(static_cast<int>(inputs.size()), [&](int i) {
        out[i] = greedy_translate(model, inputs[i], default_max_len(inputs[i].size()));
    });
    return out;
}

}  // namespace semimt
