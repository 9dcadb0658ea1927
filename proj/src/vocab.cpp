#include "semimt/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "semimt/errors.hpp"

namespace semimt {

Vocabulary::Vocabulary() {
    tokens_ = {unk_token(), bos_token(), eos_token()};
    for (int i = 0; i < kReserved; ++i) ids_[tokens_[i]] = i;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& sentences,
                             int max_size) {
    if (max_size < kReserved + 1) fail_data("build_vocab: max_size must be at least 4");
    if (sentences.empty()) fail_data("build_vocab: empty corpus");

    std::map<std::string, long long> counts;  // ordered map keeps ties deterministic
    for (const auto& s : sentences)
        for (const auto& tok : s) ++counts[tok];
    if (counts.empty()) fail_data("build_vocab: empty corpus");

    std::vector<std::pair<std::string, long long>> by_freq(counts.begin(), counts.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary v;
    const size_t budget = static_cast<size_t>(max_size - kReserved);
    for (size_t i = 0; i < by_freq.size() && i < budget; ++i) v.add(by_freq[i].first);
    return v;
}

int Vocabulary::add(const std::string& token) {
    if (ids_.count(token)) fail_data("vocabulary: duplicate token '" + token + "'");
    int id = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    ids_[token] = id;
    return id;
}

int Vocabulary::id(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
    return ids_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::token(int id) const {
    if (id < 0 || id >= size()) fail_data("vocabulary: id out of range");
    return tokens_[id];
}

// One token per line: a three-line reserved header, then non-reserved tokens
// in id order (line i of the tail holds id i+3).
void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_data("cannot open vocabulary for writing: " + path);
    for (const auto& t : tokens_) out << t << '\n';
    if (!out) fail_data("write failed for vocabulary: " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open vocabulary: " + path);
    Vocabulary v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno <= kReserved) {
            const char* expect = lineno == 1 ? unk_token() : lineno == 2 ? bos_token() : eos_token();
            if (line != expect)
                fail_data(path + ":" + std::to_string(lineno) + ": expected reserved token '" +
                          expect + "', got '" + line + "'");
            continue;
        }
        if (line.empty())
            fail_data(path + ":" + std::to_string(lineno) + ": empty vocabulary line");
        v.add(line);
    }
    if (lineno < kReserved) fail_data(path + ": missing reserved vocabulary header");
    return v;
}

}  // namespace semimt
