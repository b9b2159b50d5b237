#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/preprocess.hpp"

namespace fnd {

struct SparseEntry {
    std::uint32_t index;
    double weight;

    bool operator==(const SparseEntry&) const = default;
};

// Strictly increasing indices, finite weights, no explicit zeros.
struct SparseVector {
    std::vector<SparseEntry> entries;

    double l2_norm() const;

    bool operator==(const SparseVector&) const = default;
};

struct TokenInfo {
    std::uint32_t index;
    std::uint32_t document_frequency;

    bool operator==(const TokenInfo&) const = default;
};

// std::map gives lexicographic iteration, which fixes index assignment.
struct Vocabulary {
    std::map<std::string, TokenInfo> tokens;
    std::size_t num_documents = 0;

    std::size_t size() const { return tokens.size(); }
    std::optional<std::uint32_t> index_of(const std::string& token) const;

    bool operator==(const Vocabulary&) const = default;
};

// Tokens kept iff their document frequency >= min_df; indices assigned in
// lexicographic token order. Empty corpus is an error.
Vocabulary fit_vocabulary(const Corpus& corpus, PipelineKind kind, std::uint32_t min_df = 1);

// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
double smoothed_idf(std::size_t document_frequency, std::size_t num_documents);

// Raw term counts scaled by smoothed idf, then L2-normalized. Tokens
// outside the vocabulary are dropped; an all-OOV document maps to the
// empty vector.
SparseVector tfidf_transform(const Vocabulary& vocab, const TokenStream& tokens);

struct SequenceEncoding {
    static constexpr std::uint32_t kPadIndex = 0;
    static constexpr std::uint32_t kOovIndex = 1;

    std::vector<std::uint32_t> indices;  // length exactly max_len
    std::uint32_t max_len = 0;

    // Leading run of non-padding positions.
    std::size_t effective_length() const;
};

// Vocabulary index + 2 per token (0 = padding, 1 = out-of-vocabulary),
// truncated to max_len and right-padded.
SequenceEncoding encode_sequence(const Vocabulary& vocab, const TokenStream& tokens,
                                 std::uint32_t max_len);

}  // namespace fnd
