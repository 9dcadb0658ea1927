#include "semimt/bleu.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "semimt/errors.hpp"
#include "semimt/parallel.hpp"
#include "semimt/semisup.hpp"

namespace semimt {

namespace {

std::string fold_case(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

using NgramCounts = std::map<std::vector<std::string>, long long>;

NgramCounts count_ngrams(const TokenLine& tokens, int n) {
    NgramCounts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
    return {{"bleu", bleu},
            {"precisions", precisions},
            {"brevity_penalty", brevity_penalty},
            {"candidate_length", candidate_length},
            {"reference_length", reference_length},
            {"smoothed", smoothed}};
}

EvalReport corpus_bleu(const std::vector<TokenLine>& candidates,
                       const std::vector<std::vector<TokenLine>>& references, bool smoothed) {
    if (candidates.size() != references.size())
        fail_data("corpus_bleu: candidate/reference counts differ");

    std::array<long long, 4> matched{};
    std::array<long long, 4> total{};
    long long cand_len = 0;
    long long ref_len = 0;

    for (size_t i = 0; i < candidates.size(); ++i) {
        if (references[i].empty()) fail_data("corpus_bleu: sentence without references");
        TokenLine cand;
        cand.reserve(candidates[i].size());
        for (const auto& t : candidates[i]) cand.push_back(fold_case(t));
        std::vector<TokenLine> refs;
        refs.reserve(references[i].size());
        for (const auto& r : references[i]) {
            TokenLine folded;
            folded.reserve(r.size());
            for (const auto& t : r) folded.push_back(fold_case(t));
            refs.push_back(std::move(folded));
        }

        cand_len += static_cast<long long>(cand.size());
        // Closest reference length; ties toward the shorter reference.
        long long best = static_cast<long long>(refs[0].size());
        for (const auto& r : refs) {
            long long len = static_cast<long long>(r.size());
            long long d_new = std::llabs(len - static_cast<long long>(cand.size()));
            long long d_old = std::llabs(best - static_cast<long long>(cand.size()));
            if (d_new < d_old || (d_new == d_old && len < best)) best = len;
        }
        ref_len += best;

        for (int n = 1; n <= 4; ++n) {
            NgramCounts cand_counts = count_ngrams(cand, n);
            NgramCounts max_ref;
            for (const auto& r : refs)
                for (const auto& [gram, c] : count_ngrams(r, n)) {
                    auto& m = max_ref[gram];
                    m = std::max(m, c);
                }
            for (const auto& [gram, c] : cand_counts) {
                total[n - 1] += c;
                auto it = max_ref.find(gram);
                if (it != max_ref.end()) matched[n - 1] += std::min(c, it->second);
            }
        }
    }

    EvalReport rep;
    rep.smoothed = smoothed;
    rep.candidate_length = cand_len;
    rep.reference_length = ref_len;
    rep.brevity_penalty =
        cand_len >= ref_len || cand_len == 0
            ? 1.0
            : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
    if (cand_len == 0) rep.brevity_penalty = 0.0;

    double log_prec_sum = 0.0;
    bool any_zero = false;
    for (int n = 0; n < 4; ++n) {
        double num = static_cast<double>(matched[n]);
        double den = static_cast<double>(total[n]);
        if (smoothed) {
            num += 1.0;
            den += 1.0;
        }
        rep.precisions[n] = den > 0.0 ? num / den : 0.0;
        if (rep.precisions[n] <= 0.0)
            any_zero = true;
        else
            log_prec_sum += std::log(rep.precisions[n]);
    }
    rep.bleu = any_zero ? 0.0 : 100.0 * rep.brevity_penalty * std::exp(0.25 * log_prec_sum);
    return rep;
}

ReconstructionReport reconstruction_report(const TranslationModel& enc,
                                           const TranslationModel& dec,
                                           const std::vector<Sentence>& sample, int k,
                                           int beam_width) {
    if (sample.empty()) fail_data("reconstruction_report: empty sample");
    ReconstructionReport rep;
    rep.examples.resize(sample.size());
    par::for_each_item(static_cast<int>(sample.size()), [&](int i) {
        const Sentence& y = sample[i];
        Reconstruction r =
            reconstruction_marginal(enc, dec, y, k, beam_width, default_max_len(y.size()));
        size_t best = 0;
        for (size_t c = 1; c < r.candidates.hypotheses.size(); ++c) {
            double wc = r.candidates.weights[c];
            double wb = r.candidates.weights[best];
            if (wc > wb || (wc == wb && r.candidates.hypotheses[c].tokens <
                                            r.candidates.hypotheses[best].tokens))
                best = c;
        }
        rep.examples[i] = {y, r.candidates.hypotheses[best].tokens, r.candidates.weights[best],
                           r.log_marginal};
    });
    for (const auto& ex : rep.examples) rep.mean_log_marginal += ex.log_marginal;
    rep.mean_log_marginal /= static_cast<double>(sample.size());
    return rep;
}

}  // namespace semimt
