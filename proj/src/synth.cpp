#include "semimt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "semimt/errors.hpp"
#include "semimt/rng.hpp"

namespace semimt {

namespace {

constexpr uint64_t kCipherTag = 101;
constexpr uint64_t kDataTag = 202;

std::string src_token(int slot) { return "s" + std::to_string(slot + Vocabulary::kReserved); }
std::string tgt_token(int slot) { return "t" + std::to_string(slot + Vocabulary::kReserved); }

int parse_slot(const std::string& tok, char side) {
    if (tok.size() < 2 || tok[0] != side) fail_data("oracle: token '" + tok + "' not in task");
    int id = 0;
    for (size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') fail_data("oracle: token '" + tok + "' not in task");
        id = id * 10 + (tok[i] - '0');
    }
    return id - Vocabulary::kReserved;
}

// Bijection over all slots including the OOV pool, so injected tokens still
// have a well-defined translation.
std::vector<int> cipher_permutation(const TaskSpec& spec) {
    int n = spec.vocab_size + spec.effective_oov_pool();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = Rng(spec.cipher_seed).fork(kCipherTag);
    rng.shuffle(perm);
    return perm;
}

std::vector<int> invert(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

struct ZipfSampler {
    std::vector<double> cdf;

    ZipfSampler(int n, double exponent) {
        cdf.resize(n);
        double acc = 0.0;
        for (int r = 0; r < n; ++r) {
            acc += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
            cdf[r] = acc;
        }
        for (double& c : cdf) c /= acc;
    }

    int draw(Rng& rng) const {
        double u = rng.uniform();
        return static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
};

}  // namespace

int TaskSpec::effective_oov_pool() const {
    if (oov_pool >= 0) return oov_pool;
    return std::max(4, vocab_size / 5);
}

void TaskSpec::validate() const {
    if (vocab_size < 1) fail_data("task: vocab_size must be positive");
    if (len_min < 1 || len_max < len_min) fail_data("task: bad sentence length range");
    if (reorder != "none" && reorder != "reverse")
        fail_data("task: reorder must be 'none' or 'reverse'");
    if (oov_rate < 0.0 || oov_rate > 1.0) fail_data("task: oov_rate must be in [0,1]");
    if (oov_rate > 0.0 && effective_oov_pool() < 1)
        fail_data("task: vocabulary too small for requested OOV injection");
    if (zipf_exponent <= 0.0) fail_data("task: zipf_exponent must be positive");
    for (int c : {parallel_count, target_mono_count, source_mono_count, validation_count,
                  test_count})
        if (c < 0) fail_data("task: corpus sizes must be non-negative");
}

nlohmann::json TaskSpec::to_json() const {
    return {{"vocab_size", vocab_size},
            {"len_min", len_min},
            {"len_max", len_max},
            {"cipher_seed", cipher_seed},
            {"reorder", reorder},
            {"parallel_count", parallel_count},
            {"target_mono_count", target_mono_count},
            {"source_mono_count", source_mono_count},
            {"validation_count", validation_count},
            {"test_count", test_count},
            {"oov_rate", oov_rate},
            {"oov_pool", effective_oov_pool()},
            {"zipf_exponent", zipf_exponent},
            {"seed", seed}};
}

TaskSpec TaskSpec::from_json(const nlohmann::json& j) {
    TaskSpec s;
    try {
        s.vocab_size = j.at("vocab_size").get<int>();
        s.len_min = j.at("len_min").get<int>();
        s.len_max = j.at("len_max").get<int>();
        s.cipher_seed = j.at("cipher_seed").get<uint64_t>();
        s.reorder = j.at("reorder").get<std::string>();
        s.parallel_count = j.at("parallel_count").get<int>();
        s.target_mono_count = j.at("target_mono_count").get<int>();
        s.source_mono_count = j.at("source_mono_count").get<int>();
        s.validation_count = j.at("validation_count").get<int>();
        s.test_count = j.at("test_count").get<int>();
        s.oov_rate = j.at("oov_rate").get<double>();
        s.oov_pool = j.at("oov_pool").get<int>();
        s.zipf_exponent = j.at("zipf_exponent").get<double>();
        s.seed = j.at("seed").get<uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        fail_data(std::string("malformed task spec: ") + e.what());
    }
    s.validate();
    return s;
}

TokenLine oracle_translate(const TaskSpec& spec, const TokenLine& src) {
    auto perm = cipher_permutation(spec);
    TokenLine out;
    out.reserve(src.size());
    for (const auto& tok : src) {
        int slot = parse_slot(tok, 's');
        if (slot < 0 || slot >= static_cast<int>(perm.size()))
            fail_data("oracle: token '" + tok + "' outside the task vocabulary");
        out.push_back(tgt_token(perm[slot]));
    }
    if (spec.reorder == "reverse") std::reverse(out.begin(), out.end());
    return out;
}

TokenLine oracle_inverse(const TaskSpec& spec, const TokenLine& tgt) {
    auto inv = invert(cipher_permutation(spec));
    TokenLine in = tgt;
    if (spec.reorder == "reverse") std::reverse(in.begin(), in.end());
    TokenLine out;
    out.reserve(in.size());
    for (const auto& tok : in) {
        int slot = parse_slot(tok, 't');
        if (slot < 0 || slot >= static_cast<int>(inv.size()))
            fail_data("oracle: token '" + tok + "' outside the task vocabulary");
        out.push_back(src_token(inv[slot]));
    }
    return out;
}

GeneratedData generate(const TaskSpec& spec) {
    spec.validate();
    auto perm = cipher_permutation(spec);
    ZipfSampler zipf(spec.vocab_size, spec.zipf_exponent);
    Rng rng = Rng(spec.seed).fork(kDataTag);
    const int pool = spec.effective_oov_pool();

    std::set<std::vector<int>> seen;
    auto fresh_slots = [&]() {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            int len = spec.len_min + static_cast<int>(rng.below(spec.len_max - spec.len_min + 1));
            std::vector<int> slots(len);
            for (int& s : slots) s = zipf.draw(rng);
            if (seen.insert(slots).second) return slots;
        }
        fail_data("task: cannot generate disjoint splits; enlarge the vocabulary or lengths");
    };

    auto to_src = [&](const std::vector<int>& slots) {
        TokenLine t;
        t.reserve(slots.size());
        for (int s : slots) t.push_back(src_token(s));
        return t;
    };
    auto to_tgt = [&](const std::vector<int>& slots) {
        TokenLine t;
        t.reserve(slots.size());
        for (int s : slots) t.push_back(tgt_token(perm[s]));
        if (spec.reorder == "reverse") std::reverse(t.begin(), t.end());
        return t;
    };
    // Swaps tokens to the OOV pool at the injection rate; pool slots are
    // never emitted by the Zipf sampler, so they are absent from the
    // parallel-side vocabulary by construction.
    auto inject = [&](std::vector<int> slots) {
        for (int& s : slots)
            if (rng.uniform() < spec.oov_rate)
                s = spec.vocab_size + static_cast<int>(rng.below(pool));
        return slots;
    };

    GeneratedData d;
    // Coverage pass: spread every cipherable token over the leading parallel
    // pairs so the parallel-side vocabulary spans the task vocabulary and a
    // 0%-OOV mono corpus is OOV-free against it. Lengths still follow the
    // task's length distribution.
    std::vector<int> coverage(spec.vocab_size);
    std::iota(coverage.begin(), coverage.end(), 0);
    rng.shuffle(coverage);
    size_t next_cover = 0;
    while (next_cover < coverage.size() &&
           static_cast<int>(d.parallel_src.size()) < spec.parallel_count) {
        int len = spec.len_min + static_cast<int>(rng.below(spec.len_max - spec.len_min + 1));
        std::vector<int> slots;
        slots.reserve(len);
        for (int j = 0; j < len && next_cover < coverage.size(); ++j)
            slots.push_back(coverage[next_cover++]);
        while (static_cast<int>(slots.size()) < spec.len_min) slots.push_back(zipf.draw(rng));
        seen.insert(slots);
        d.parallel_src.push_back(to_src(slots));
        d.parallel_tgt.push_back(to_tgt(slots));
    }
    while (static_cast<int>(d.parallel_src.size()) < spec.parallel_count) {
        auto slots = fresh_slots();
        d.parallel_src.push_back(to_src(slots));
        d.parallel_tgt.push_back(to_tgt(slots));
    }
    for (int i = 0; i < spec.target_mono_count; ++i)
        d.target_mono.push_back(to_tgt(inject(fresh_slots())));
    for (int i = 0; i < spec.source_mono_count; ++i)
        d.source_mono.push_back(to_src(inject(fresh_slots())));
    for (int i = 0; i < spec.validation_count; ++i) {
        auto slots = fresh_slots();
        d.valid_src.push_back(to_src(slots));
        d.valid_tgt.push_back(to_tgt(slots));
    }
    for (int i = 0; i < spec.test_count; ++i) {
        auto slots = fresh_slots();
        d.test_src.push_back(to_src(slots));
        d.test_tgt.push_back(to_tgt(slots));
    }
    return d;
}

}  // namespace semimt
