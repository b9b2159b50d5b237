#include "fnd/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fnd/errors.hpp"

namespace fnd {

double SparseVector::l2_norm() const {
    double sum = 0.0;
    for (const SparseEntry& e : entries) sum += e.weight * e.weight;
    return std::sqrt(sum);
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& token) const {
    auto it = tokens.find(token);
    if (it == tokens.end()) return std::nullopt;
    return it->second.index;
}

Vocabulary fit_vocabulary(const Corpus& corpus, PipelineKind kind, std::uint32_t min_df) {
    if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
    if (corpus.documents.empty()) throw DataError("cannot fit a vocabulary on an empty corpus");

    std::map<std::string, std::uint32_t> df;
    for (const LabeledDocument& doc : corpus.documents) {
        std::map<std::string, bool> seen;
        for (const std::string& token : preprocess(doc.text, kind)) {
            if (!seen.emplace(token, true).second) continue;
            ++df[token];
        }
    }

    Vocabulary vocab;
    vocab.num_documents = corpus.documents.size();
    std::uint32_t next_index = 0;
    for (const auto& [token, count] : df) {
        if (count < min_df) continue;
        vocab.tokens.emplace(token, TokenInfo{next_index++, count});
    }
    return vocab;
}

double smoothed_idf(std::size_t document_frequency, std::size_t num_documents) {
    return std::log((1.0 + static_cast<double>(num_documents)) /
                    (1.0 + static_cast<double>(document_frequency))) +
           1.0;
}

SparseVector tfidf_transform(const Vocabulary& vocab, const TokenStream& tokens) {
    struct TermStats {
        double count = 0.0;
        std::uint32_t df = 0;
    };
    std::map<std::uint32_t, TermStats> by_index;
    for (const std::string& token : tokens) {
        auto it = vocab.tokens.find(token);
        if (it == vocab.tokens.end()) continue;
        TermStats& stats = by_index[it->second.index];
        stats.count += 1.0;
        stats.df = it->second.document_frequency;
    }

    SparseVector vec;
    vec.entries.reserve(by_index.size());
    for (const auto& [index, stats] : by_index) {
        vec.entries.push_back({index, stats.count * smoothed_idf(stats.df, vocab.num_documents)});
    }

    const double norm = vec.l2_norm();
    if (norm > 0.0) {
        for (SparseEntry& e : vec.entries) e.weight /= norm;
    }
    return vec;
}

std::size_t SequenceEncoding::effective_length() const {
    std::size_t n = 0;
    while (n < indices.size() && indices[n] != kPadIndex) ++n;
    return n;
}

SequenceEncoding encode_sequence(const Vocabulary& vocab, const TokenStream& tokens,
                                 std::uint32_t max_len) {
    if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");

    SequenceEncoding seq;
    seq.max_len = max_len;
    seq.indices.assign(max_len, SequenceEncoding::kPadIndex);
    const std::size_t n = std::min<std::size_t>(tokens.size(), max_len);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = vocab.index_of(tokens[i]);
        seq.indices[i] = idx ? *idx + 2 : SequenceEncoding::kOovIndex;
    }
    return seq;
}

}  // namespace fnd
