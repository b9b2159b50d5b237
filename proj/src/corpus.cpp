#include "fnd/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "fnd/errors.hpp"
#include "fnd/rng.hpp"

namespace fnd {

namespace {

std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool blank_after_trim(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::string at_line(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

Label parse_label(const std::string& text) {
    const std::string lower = ascii_lower(text);
    if (lower == "fake") return Label::Fake;
    if (lower == "real") return Label::Real;
    throw DataError("unknown label \"" + text + "\" (expected \"fake\" or \"real\")");
}

std::string label_name(Label label) {
    return label == Label::Fake ? "fake" : "real";
}

bool Corpus::labeled() const {
    return std::all_of(documents.begin(), documents.end(),
                       [](const LabeledDocument& d) { return d.label.has_value(); });
}

Corpus load_tsv(const std::string& path, bool has_labels, const std::string& name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);

    Corpus corpus;
    corpus.name = name;
    const std::string header = has_labels ? "id\ttweet\tlabel" : "id\ttweet";
    const std::size_t expected_fields = has_labels ? 3 : 2;

    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line == header) continue;

        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != expected_fields) {
            throw DataError(at_line(path, line_no) + "expected " +
                            std::to_string(expected_fields) + " tab-separated fields, got " +
                            std::to_string(fields.size()));
        }

        LabeledDocument doc;
        doc.id = fields[0];
        doc.text = fields[1];
        if (blank_after_trim(doc.text)) {
            throw DataError(at_line(path, line_no) + "empty tweet text");
        }
        if (has_labels) {
            try {
                doc.label = parse_label(fields[2]);
            } catch (const DataError& e) {
                throw DataError(at_line(path, line_no) + e.what());
            }
        }
        if (!seen_ids.insert(doc.id).second) {
            throw DataError(at_line(path, line_no) + "duplicate id \"" + doc.id + "\"");
        }
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

void save_tsv(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);

    const bool labeled = corpus.labeled();
    out << (labeled ? "id\ttweet\tlabel" : "id\ttweet") << '\n';
    for (const LabeledDocument& doc : corpus.documents) {
        out << doc.id << '\t' << doc.text;
        if (labeled) out << '\t' << label_name(*doc.label);
        out << '\n';
    }
    if (!out) throw DataError("write failed for " + path);
}

std::map<Label, std::size_t> class_counts(const Corpus& corpus) {
    std::map<Label, std::size_t> counts{{Label::Real, 0}, {Label::Fake, 0}};
    for (const LabeledDocument& doc : corpus.documents) {
        if (!doc.label) {
            throw DataError("corpus \"" + corpus.name + "\" contains unlabeled documents");
        }
        ++counts[*doc.label];
    }
    return counts;
}

std::vector<Corpus> stratified_split(const Corpus& corpus,
                                     const std::vector<double>& fractions,
                                     std::uint64_t seed) {
    if (fractions.empty()) throw std::invalid_argument("fractions must be non-empty");
    for (double f : fractions) {
        if (!(f > 0.0)) throw std::invalid_argument("fractions must be positive");
    }
    const double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("fractions must sum to 1");
    }
    if (!corpus.labeled()) {
        throw DataError("stratified_split requires a labeled corpus");
    }

    const std::size_t num_parts = fractions.size();
    std::vector<std::vector<std::size_t>> part_indices(num_parts);

    Rng rng(seed);
    for (Label cls : {Label::Real, Label::Fake}) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
            if (*corpus.documents[i].label == cls) indices.push_back(i);
        }
        rng.shuffle(indices);

        // Cumulative rounding keeps every part within one document of its
        // requested share and partitions the class exactly.
        const auto n = static_cast<double>(indices.size());
        double cum = 0.0;
        std::size_t prev_cut = 0;
        for (std::size_t p = 0; p < num_parts; ++p) {
            cum += fractions[p];
            const auto cut = p + 1 == num_parts
                                 ? indices.size()
                                 : static_cast<std::size_t>(std::llround(cum * n));
            for (std::size_t k = prev_cut; k < cut; ++k) {
                part_indices[p].push_back(indices[k]);
            }
            prev_cut = cut;
        }
    }

    std::vector<Corpus> parts(num_parts);
    for (std::size_t p = 0; p < num_parts; ++p) {
        std::sort(part_indices[p].begin(), part_indices[p].end());
        parts[p].name = corpus.name;
        parts[p].documents.reserve(part_indices[p].size());
        for (std::size_t i : part_indices[p]) {
            parts[p].documents.push_back(corpus.documents[i]);
        }
    }
    return parts;
}

}  // namespace fnd
