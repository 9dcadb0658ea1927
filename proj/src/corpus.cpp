#include "semimt/corpus.hpp"

#include <fstream>
#include <sstream>

#include "semimt/errors.hpp"

namespace semimt {

std::vector<TokenLine> read_token_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open corpus file: " + path);
    std::vector<TokenLine> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        TokenLine toks;
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) toks.push_back(tok);
        if (toks.empty())
            fail_data(path + ":" + std::to_string(lineno) + ": empty sentence");
        lines.push_back(std::move(toks));
    }
    return lines;
}

void write_token_lines(const std::string& path, const std::vector<TokenLine>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_data("cannot open corpus file for writing: " + path);
    for (const auto& toks : lines) {
        for (size_t i = 0; i < toks.size(); ++i) {
            if (i) out << ' ';
            out << toks[i];
        }
        out << '\n';
    }
    if (!out) fail_data("write failed for corpus file: " + path);
}

Sentence encode(const TokenLine& tokens, const Vocabulary& vocab) {
    if (tokens.empty()) fail_data("encode: empty token list");
    Sentence s;
    s.reserve(tokens.size());
    for (const auto& t : tokens) s.push_back(vocab.id(t));
    return s;
}

TokenLine decode(const Sentence& sentence, const Vocabulary& vocab) {
    TokenLine out;
    out.reserve(sentence.size());
    for (int id : sentence) out.push_back(vocab.token(id));
    return out;
}

MonolingualCorpus encode_corpus(const std::vector<TokenLine>& lines, const Vocabulary& vocab) {
    MonolingualCorpus c;
    c.sentences.reserve(lines.size());
    for (const auto& l : lines) c.sentences.push_back(encode(l, vocab));
    return c;
}

ParallelCorpus load_parallel(const std::string& src_path, const std::string& tgt_path,
                             const Vocabulary& src_vocab, const Vocabulary& tgt_vocab) {
    auto src_lines = read_token_lines(src_path);
    auto tgt_lines = read_token_lines(tgt_path);
    if (src_lines.size() != tgt_lines.size())
        fail_data("parallel corpus sides differ in length: " + src_path + " has " +
                  std::to_string(src_lines.size()) + " lines, " + tgt_path + " has " +
                  std::to_string(tgt_lines.size()));
    ParallelCorpus c;
    c.pairs.reserve(src_lines.size());
    for (size_t i = 0; i < src_lines.size(); ++i)
        c.pairs.push_back({encode(src_lines[i], src_vocab), encode(tgt_lines[i], tgt_vocab)});
    return c;
}

double oov_ratio(const TokenLine& tokens, const Vocabulary& vocab) {
    if (tokens.empty()) fail_data("oov_ratio: empty sentence");
    size_t oov = 0;
    for (const auto& t : tokens)
        if (!vocab.contains(t)) ++oov;
    return static_cast<double>(oov) / static_cast<double>(tokens.size());
}

std::vector<TokenLine> filter_by_oov(const std::vector<TokenLine>& lines, const Vocabulary& vocab,
                                     double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        fail_data("filter_by_oov: threshold must be in [0,1]");
    std::vector<TokenLine> kept;
    for (const auto& l : lines)
        if (oov_ratio(l, vocab) <= threshold) kept.push_back(l);
    return kept;
}

}  // namespace semimt
