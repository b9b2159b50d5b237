#include "fnd/archive.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fnd/errors.hpp"
#include "fnd/mathutil.hpp"

namespace fnd {

namespace {

constexpr std::string_view kMagic = "fnd-archive";
constexpr int kFormatVersion = 1;

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

// Shortest round-trip decimal form; from_chars restores the exact bits.
void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_values(std::string& out, const double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(' ');
        append_double(out, data[i]);
    }
    out.push_back('\n');
}

void write_vector(std::string& out, std::string_view name, const std::vector<double>& v) {
    out.append(name);
    out.push_back(' ');
    out.append(std::to_string(v.size()));
    append_values(out, v.data(), v.size());
}

void write_matrix(std::string& out, std::string_view name, const Matrix& m) {
    out.append(name);
    out.push_back(' ');
    out.append(std::to_string(m.rows));
    out.push_back(' ');
    out.append(std::to_string(m.cols));
    append_values(out, m.data.data(), m.data.size());
}

// Whitespace-token scanner over the archive body that tracks line numbers
// for error messages.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool eof() {
        skip_space();
        return pos_ >= text_.size();
    }

    std::string_view word() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of archive");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void expect(std::string_view keyword) {
        const std::string_view got = word();
        if (got != keyword) {
            fail("expected \"" + std::string(keyword) + "\", found \"" + std::string(got) + "\"");
        }
    }

    std::uint64_t integer() {
        const std::string_view w = word();
        std::uint64_t value = 0;
        const auto res = std::from_chars(w.data(), w.data() + w.size(), value);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
            fail("bad integer \"" + std::string(w) + "\"");
        }
        return value;
    }

    double number() {
        const std::string_view w = word();
        double value = 0.0;
        const auto res = std::from_chars(w.data(), w.data() + w.size(), value);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
            fail("bad number \"" + std::string(w) + "\"");
        }
        return value;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ArchiveError("archive line " + std::to_string(line_) + ": " + what);
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::vector<double> read_vector(Reader& in, std::string_view name) {
    in.expect(name);
    const std::uint64_t n = in.integer();
    std::vector<double> v(n);
    for (std::uint64_t i = 0; i < n; ++i) v[i] = in.number();
    return v;
}

Matrix read_matrix(Reader& in, std::string_view name) {
    in.expect(name);
    const std::uint64_t rows = in.integer();
    const std::uint64_t cols = in.integer();
    Matrix m(rows, cols);
    for (double& v : m.data) v = in.number();
    return m;
}

void write_vocab(std::string& out, const Vocabulary& vocab) {
    out.append("vocab ");
    out.append(std::to_string(vocab.num_documents));
    out.push_back(' ');
    out.append(std::to_string(vocab.size()));
    out.push_back('\n');
    for (const auto& [token, info] : vocab.tokens) {
        out.append(token);
        out.push_back(' ');
        out.append(std::to_string(info.index));
        out.push_back(' ');
        out.append(std::to_string(info.document_frequency));
        out.push_back('\n');
    }
}

Vocabulary read_vocab(Reader& in) {
    in.expect("vocab");
    Vocabulary vocab;
    vocab.num_documents = in.integer();
    const std::uint64_t size = in.integer();
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::string token(in.word());
        const auto index = static_cast<std::uint32_t>(in.integer());
        const auto df = static_cast<std::uint32_t>(in.integer());
        vocab.tokens.emplace(token, TokenInfo{index, df});
    }
    return vocab;
}

void write_nb(std::string& out, const NaiveBayesModel& nb) {
    out.append("nb alpha ");
    append_double(out, nb.alpha);
    out.push_back('\n');
    write_vector(out, "log_prior", {nb.log_prior[0], nb.log_prior[1]});
    write_vector(out, "log_likelihood_real",
                 nb.log_likelihood[static_cast<std::size_t>(Label::Real)]);
    write_vector(out, "log_likelihood_fake",
                 nb.log_likelihood[static_cast<std::size_t>(Label::Fake)]);
}

NaiveBayesModel read_nb(Reader& in) {
    in.expect("nb");
    in.expect("alpha");
    NaiveBayesModel nb;
    nb.alpha = in.number();
    const std::vector<double> priors = read_vector(in, "log_prior");
    if (priors.size() != 2) in.fail("log_prior must have two entries");
    nb.log_prior[0] = priors[0];
    nb.log_prior[1] = priors[1];
    nb.log_likelihood[static_cast<std::size_t>(Label::Real)] =
        read_vector(in, "log_likelihood_real");
    nb.log_likelihood[static_cast<std::size_t>(Label::Fake)] =
        read_vector(in, "log_likelihood_fake");
    if (nb.log_likelihood[0].size() != nb.log_likelihood[1].size()) {
        in.fail("per-class likelihood sizes differ");
    }
    return nb;
}

void write_linear(std::string& out, const LinearModel& model) {
    out.append("linear ");
    out.append(model.kind == LinearKind::LogisticRegression ? "lr" : "svm");
    out.push_back('\n');
    write_vector(out, "weights", model.weights);
    out.append("bias");
    out.push_back(' ');
    append_double(out, model.bias);
    out.push_back('\n');
}

LinearModel read_linear(Reader& in) {
    in.expect("linear");
    const std::string_view kind = in.word();
    LinearModel model;
    if (kind == "lr") {
        model.kind = LinearKind::LogisticRegression;
    } else if (kind == "svm") {
        model.kind = LinearKind::SupportVectorMachine;
    } else {
        in.fail("unknown linear kind \"" + std::string(kind) + "\"");
    }
    model.weights = read_vector(in, "weights");
    in.expect("bias");
    model.bias = in.number();
    return model;
}

void write_cell(std::string& out, const LstmParams& cell) {
    static const char* w_names[4] = {"w_input", "w_forget", "w_output", "w_candidate"};
    static const char* u_names[4] = {"u_input", "u_forget", "u_output", "u_candidate"};
    static const char* b_names[4] = {"b_input", "b_forget", "b_output", "b_candidate"};
    for (std::size_t g = 0; g < 4; ++g) write_matrix(out, w_names[g], cell.input_weights[g]);
    for (std::size_t g = 0; g < 4; ++g) write_matrix(out, u_names[g], cell.recurrent_weights[g]);
    for (std::size_t g = 0; g < 4; ++g) write_vector(out, b_names[g], cell.biases[g]);
}

LstmParams read_cell(Reader& in) {
    static const char* w_names[4] = {"w_input", "w_forget", "w_output", "w_candidate"};
    static const char* u_names[4] = {"u_input", "u_forget", "u_output", "u_candidate"};
    static const char* b_names[4] = {"b_input", "b_forget", "b_output", "b_candidate"};
    LstmParams cell;
    for (std::size_t g = 0; g < 4; ++g) cell.input_weights[g] = read_matrix(in, w_names[g]);
    for (std::size_t g = 0; g < 4; ++g) cell.recurrent_weights[g] = read_matrix(in, u_names[g]);
    for (std::size_t g = 0; g < 4; ++g) cell.biases[g] = read_vector(in, b_names[g]);
    return cell;
}

void write_lstm(std::string& out, const LstmClassifier& model) {
    out.append("lstm bidirectional ");
    out.append(model.bidirectional() ? "1" : "0");
    out.append(" embed ");
    out.append(std::to_string(model.embed_dim));
    out.append(" hidden ");
    out.append(std::to_string(model.hidden_dim));
    out.append(" maxlen ");
    out.append(std::to_string(model.max_len));
    out.push_back('\n');
    write_matrix(out, "embedding", model.embedding.matrix);
    out.append("cell forward\n");
    write_cell(out, model.forward_cell);
    if (model.backward_cell) {
        out.append("cell backward\n");
        write_cell(out, *model.backward_cell);
    }
    write_vector(out, "head", model.head_weights);
    out.append("head_bias ");
    append_double(out, model.head_bias);
    out.push_back('\n');
}

LstmClassifier read_lstm(Reader& in) {
    in.expect("lstm");
    in.expect("bidirectional");
    const std::uint64_t bidirectional = in.integer();
    LstmClassifier model;
    in.expect("embed");
    model.embed_dim = static_cast<std::uint32_t>(in.integer());
    in.expect("hidden");
    model.hidden_dim = static_cast<std::uint32_t>(in.integer());
    in.expect("maxlen");
    model.max_len = static_cast<std::uint32_t>(in.integer());
    model.embedding.matrix = read_matrix(in, "embedding");
    in.expect("cell");
    in.expect("forward");
    model.forward_cell = read_cell(in);
    if (bidirectional != 0) {
        in.expect("cell");
        in.expect("backward");
        model.backward_cell = read_cell(in);
    }
    model.head_weights = read_vector(in, "head");
    in.expect("head_bias");
    model.head_bias = in.number();
    return model;
}

void write_bundle(std::string& out, const ModelBundle& bundle) {
    out.append("model ");
    out.append(model_kind_name(bundle.kind));
    out.push_back('\n');
    out.append("pipeline ");
    out.append(pipeline_name(bundle.pipeline));
    out.push_back('\n');
    out.append("maxlen ");
    out.append(std::to_string(bundle.max_len));
    out.push_back('\n');

    switch (bundle.kind) {
        case ModelKind::Nb:
            write_vocab(out, bundle.vocab);
            write_nb(out, *bundle.nb);
            break;
        case ModelKind::Lr:
        case ModelKind::Svm:
            write_vocab(out, bundle.vocab);
            write_linear(out, *bundle.linear);
            break;
        case ModelKind::NbLr:
            write_vocab(out, bundle.vocab);
            out.append("nblr beta ");
            append_double(out, bundle.nblr->beta);
            out.append(" gate ");
            if (bundle.nblr->lr_gate) {
                append_double(out, *bundle.nblr->lr_gate);
            } else {
                out.append("none");
            }
            out.push_back('\n');
            write_nb(out, bundle.nblr->nb);
            write_linear(out, bundle.nblr->lr);
            break;
        case ModelKind::Lstm:
        case ModelKind::BiLstm:
            write_vocab(out, bundle.vocab);
            write_lstm(out, *bundle.lstm);
            break;
        case ModelKind::Ensemble:
            out.append("ensemble ");
            out.append(strategy_name(bundle.strategy));
            out.push_back(' ');
            out.append(std::to_string(bundle.members.size()));
            out.push_back('\n');
            for (const ModelBundle& member : bundle.members) write_bundle(out, member);
            break;
    }
    out.append("end\n");
}

ModelBundle read_bundle(Reader& in) {
    in.expect("model");
    ModelBundle bundle;
    bundle.kind = parse_model_kind(std::string(in.word()));
    in.expect("pipeline");
    bundle.pipeline = parse_pipeline(std::string(in.word()));
    in.expect("maxlen");
    bundle.max_len = static_cast<std::uint32_t>(in.integer());

    switch (bundle.kind) {
        case ModelKind::Nb:
            bundle.vocab = read_vocab(in);
            bundle.nb = read_nb(in);
            break;
        case ModelKind::Lr:
        case ModelKind::Svm:
            bundle.vocab = read_vocab(in);
            bundle.linear = read_linear(in);
            break;
        case ModelKind::NbLr: {
            bundle.vocab = read_vocab(in);
            in.expect("nblr");
            in.expect("beta");
            NbLrModel nblr;
            nblr.beta = in.number();
            in.expect("gate");
            const std::string_view gate = in.word();
            if (gate != "none") {
                double value = 0.0;
                const auto res = std::from_chars(gate.data(), gate.data() + gate.size(), value);
                if (res.ec != std::errc()) in.fail("bad gate value");
                nblr.lr_gate = value;
            }
            nblr.nb = read_nb(in);
            nblr.lr = read_linear(in);
            bundle.nblr = std::move(nblr);
            break;
        }
        case ModelKind::Lstm:
        case ModelKind::BiLstm:
            bundle.vocab = read_vocab(in);
            bundle.lstm = read_lstm(in);
            break;
        case ModelKind::Ensemble: {
            in.expect("ensemble");
            bundle.strategy = parse_strategy(std::string(in.word()));
            const std::uint64_t count = in.integer();
            for (std::uint64_t i = 0; i < count; ++i) {
                bundle.members.push_back(read_bundle(in));
            }
            EnsembleConfig config;
            config.strategy = bundle.strategy;
            for (const ModelBundle& member : bundle.members) {
                config.members.push_back(member.kind);
            }
            config.validate();
            break;
        }
    }
    in.expect("end");
    return bundle;
}

}  // namespace

std::string serialize_model(const ModelBundle& bundle) {
    std::string out;
    out.append(kMagic);
    out.push_back(' ');
    out.append(std::to_string(kFormatVersion));
    out.push_back('\n');
    write_bundle(out, bundle);
    out.append("checksum fnv1a64 ");
    out.append(hex64(fnv1a64(std::string_view(out))));
    out.push_back('\n');
    return out;
}

ModelBundle deserialize_model(const std::string& text) {
    // Peel off the trailing checksum line first; everything before it is
    // covered by the digest.
    if (text.empty() || text.back() != '\n') {
        throw ArchiveTruncatedError("archive does not end with a checksum line");
    }
    const std::size_t last_start = text.rfind('\n', text.size() - 2);
    const std::size_t body_len = last_start == std::string::npos ? 0 : last_start + 1;
    const std::string_view last_line(text.data() + body_len, text.size() - body_len - 1);

    constexpr std::string_view kChecksumPrefix = "checksum fnv1a64 ";
    if (last_line.substr(0, kChecksumPrefix.size()) != kChecksumPrefix) {
        throw ArchiveTruncatedError("archive does not end with a checksum line");
    }
    const std::string_view stored = last_line.substr(kChecksumPrefix.size());
    const std::string_view body(text.data(), body_len + kChecksumPrefix.size());
    if (hex64(fnv1a64(body)) != stored) {
        throw ArchiveChecksumError("archive checksum mismatch");
    }

    Reader in(std::string_view(text.data(), body_len));
    const std::string_view magic = in.word();
    if (magic != kMagic) {
        throw ArchiveVersionError("not a model archive (bad magic \"" + std::string(magic) +
                                  "\")");
    }
    const std::uint64_t version = in.integer();
    if (version != kFormatVersion) {
        throw ArchiveVersionError("unsupported archive version " + std::to_string(version));
    }
    ModelBundle bundle = read_bundle(in);
    if (!in.eof()) in.fail("trailing content after model");
    return bundle;
}

void save_model(const ModelBundle& bundle, const std::string& path) {
    const std::string text = serialize_model(bundle);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("write failed for " + path);
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

Prediction predict_document(const ModelBundle& bundle, const std::string& raw_text) {
    if (bundle.kind == ModelKind::Ensemble) {
        std::vector<Prediction> votes;
        votes.reserve(bundle.members.size());
        for (const ModelBundle& member : bundle.members) {
            votes.push_back(predict_document(member, raw_text));
        }
        return bundle.strategy == EnsembleStrategy::SoftVote ? soft_vote(votes)
                                                             : majority_vote(votes);
    }

    const TokenStream tokens = preprocess(raw_text, bundle.pipeline);
    switch (bundle.kind) {
        case ModelKind::Nb:
            return Prediction::from_probability(
                fake_probability(nb_log_odds(*bundle.nb, tfidf_transform(bundle.vocab, tokens))));
        case ModelKind::Lr:
        case ModelKind::Svm:
            return Prediction::from_probability(
                predict_linear(*bundle.linear, tfidf_transform(bundle.vocab, tokens)));
        case ModelKind::NbLr:
            return Prediction::from_probability(
                predict_nblr(*bundle.nblr, tfidf_transform(bundle.vocab, tokens)));
        case ModelKind::Lstm:
        case ModelKind::BiLstm: {
            const SequenceEncoding seq =
                encode_sequence(bundle.vocab, tokens, bundle.lstm->max_len);
            if (seq.effective_length() == 0) return Prediction::from_probability(0.5);
            return Prediction::from_probability(classify_forward(*bundle.lstm, seq));
        }
        case ModelKind::Ensemble:
            break;
    }
    throw std::logic_error("unreachable");
}

}  // namespace fnd
