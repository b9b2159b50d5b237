#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fnd {

enum class Label { Real = 0, Fake = 1 };

// "fake"/"real", case-insensitive; anything else is a DataError.
Label parse_label(const std::string& text);
std::string label_name(Label label);

struct LabeledDocument {
    std::string id;
    std::string text;                // raw, no preprocessing at ingest
    std::optional<Label> label;      // absent for prediction-only input

    bool operator==(const LabeledDocument&) const = default;
};

struct Corpus {
    std::vector<LabeledDocument> documents;  // source order, preserved exactly
    std::string name;                        // split tag

    std::size_t size() const { return documents.size(); }
    bool labeled() const;

    bool operator==(const Corpus&) const = default;
};

// Reads UTF-8 TSV: id \t tweet [\t label], '\n' line ends. A first line
// exactly equal to the header ("id\ttweet\tlabel" labeled, "id\ttweet"
// unlabeled) is skipped. Malformed lines, duplicate ids, and unknown
// labels raise DataError naming the line.
Corpus load_tsv(const std::string& path, bool has_labels, const std::string& name = "");

// Inverse of load_tsv, header included.
void save_tsv(const Corpus& corpus, const std::string& path);

// Per-label document counts; both labels always present in the result.
std::map<Label, std::size_t> class_counts(const Corpus& corpus);

// Splits with a seeded per-class shuffle followed by contiguous slicing,
// so each part's class proportions are within one document of the request.
// Parts keep the source document order. Same seed, same split.
std::vector<Corpus> stratified_split(const Corpus& corpus,
                                     const std::vector<double>& fractions,
                                     std::uint64_t seed);

}  // namespace fnd
