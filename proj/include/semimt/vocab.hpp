#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semimt {

// Bidirectional token<->id map with fixed reserved entries.
class Vocabulary {
public:
    static constexpr int kUnk = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kReserved = 3;

    static const char* unk_token() { return "<unk>"; }
    static const char* bos_token() { return "<s>"; }
    static const char* eos_token() { return "</s>"; }

    Vocabulary();

    // Keeps the most frequent tokens, up to max_size total entries including
    // the three reserved ids. Frequency ties break lexicographically
    // ascending, so the result is deterministic for identical input.
    static Vocabulary build(const std::vector<std::vector<std::string>>& sentences, int max_size);

    // Appends a non-reserved token; returns its id.
    int add(const std::string& token);

    // UNK id for unknown tokens.
    int id(std::string_view token) const;
    bool contains(std::string_view token) const;
    const std::string& token(int id) const;
    int size() const { return static_cast<int>(tokens_.size()); }

    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> ids_;
};

}  // namespace semimt
