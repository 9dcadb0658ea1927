#pragma once

#include <string>
#include <vector>

#include "semimt/vocab.hpp"

namespace semimt {

// Token ids of one sentence, without BOS/EOS markers.
using Sentence = std::vector<int>;
using TokenLine = std::vector<std::string>;

struct SentencePair {
    Sentence src;
    Sentence tgt;
};

struct ParallelCorpus {
    std::vector<SentencePair> pairs;
    size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

struct MonolingualCorpus {
    std::vector<Sentence> sentences;
    size_t size() const { return sentences.size(); }
    bool empty() const { return sentences.empty(); }
};

// One sentence per line, tokens space-separated, UTF-8. Empty lines are a
// data error (corpora contain no empty sentences).
std::vector<TokenLine> read_token_lines(const std::string& path);
void write_token_lines(const std::string& path, const std::vector<TokenLine>& lines);

Sentence encode(const TokenLine& tokens, const Vocabulary& vocab);
TokenLine decode(const Sentence& sentence, const Vocabulary& vocab);

MonolingualCorpus encode_corpus(const std::vector<TokenLine>& lines, const Vocabulary& vocab);
ParallelCorpus load_parallel(const std::string& src_path, const std::string& tgt_path,
                             const Vocabulary& src_vocab, const Vocabulary& tgt_vocab);

// Fraction of tokens absent from the vocabulary.
double oov_ratio(const TokenLine& tokens, const Vocabulary& vocab);

// Keeps exactly the sentences whose OOV ratio is <= threshold, in order.
std::vector<TokenLine> filter_by_oov(const std::vector<TokenLine>& lines, const Vocabulary& vocab,
                                     double threshold);

}  // namespace semimt
