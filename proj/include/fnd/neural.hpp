#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/features.hpp"
#include "fnd/linear.hpp"

namespace fnd {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }
};

enum Gate : std::size_t { kGateInput = 0, kGateForget = 1, kGateOutput = 2, kGateCandidate = 3 };

// Per gate: input weights (embed x hidden), recurrent weights
// (hidden x hidden), bias (hidden).
struct LstmParams {
    std::array<Matrix, 4> input_weights;
    std::array<Matrix, 4> recurrent_weights;
    std::array<std::vector<double>, 4> biases;

    std::size_t hidden_dim() const { return biases[0].size(); }
    std::size_t embed_dim() const { return input_weights[0].rows; }
};

// Row 0 is the padding row: all zeros, never updated.
struct EmbeddingTable {
    Matrix matrix;  // (vocab_size + 2) x embed_dim
};

struct LstmClassifier {
    EmbeddingTable embedding;
    LstmParams forward_cell;
    std::optional<LstmParams> backward_cell;  // present iff bidirectional
    std::vector<double> head_weights;         // hidden_dim or 2*hidden_dim
    double head_bias = 0.0;
    std::uint32_t embed_dim = 0;
    std::uint32_t hidden_dim = 0;
    std::uint32_t max_len = 0;

    bool bidirectional() const { return backward_cell.has_value(); }
};

// Hidden state sequence for inputs with padding already stripped;
// h_0 = c_0 = 0. Gate order: i, f, o, g.
std::vector<std::vector<double>> lstm_forward(const LstmParams& cell,
                                              const std::vector<std::vector<double>>& embedded);

// P(Fake). Feature is the last unmasked hidden state; bidirectional models
// concatenate the backward cell's final state over the reversed unmasked
// sequence. An all-padding sequence is an error.
double classify_forward(const LstmClassifier& model, const SequenceEncoding& seq);

struct LstmGradients {
    std::array<Matrix, 4> input_weights;
    std::array<Matrix, 4> recurrent_weights;
    std::array<std::vector<double>, 4> biases;
};

struct ClassifierGradients {
    Matrix embedding;  // rows of absent tokens stay zero, as does row 0
    LstmGradients forward_cell;
    std::optional<LstmGradients> backward_cell;
    std::vector<double> head_weights;
    double head_bias = 0.0;
    double loss = 0.0;  // BCE at the current parameters
};

ClassifierGradients zero_gradients(const LstmClassifier& model);

// Exact BPTT gradients of the binary cross-entropy loss. Adds this
// sample's contribution into acc (including acc.loss).
void accumulate_bptt(const LstmClassifier& model, const SequenceEncoding& seq, Label label,
                     ClassifierGradients& acc);

ClassifierGradients bptt_gradients(const LstmClassifier& model, const SequenceEncoding& seq,
                                   Label label);

// Bias-corrected Adam over every parameter tensor of a classifier.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double learning_rate = 1e-3;
    std::int64_t step_count = 0;
    std::vector<std::vector<double>> first_moment;   // one entry per tensor
    std::vector<std::vector<double>> second_moment;  // in enumeration order
};

AdamState make_adam_state(const LstmClassifier& model, double learning_rate);
void adam_step(AdamState& state, LstmClassifier& params, const ClassifierGradients& grads);

struct NeuralArch {
    bool bidirectional = false;
    std::uint32_t embed_dim = 64;
    std::uint32_t hidden_dim = 64;
    std::uint32_t max_len = 64;
};

// Seeded uniform(-0.05, 0.05) init (padding row zeroed), mini-batch Adam
// over seeded-shuffled epochs. Documents with no tokens are excluded.
// Bit-reproducible under a fixed config. l2_lambda is unused here.
LstmClassifier train_neural(const Corpus& corpus, const Vocabulary& vocab, const NeuralArch& arch,
                            const TrainConfig& cfg);

}  // namespace fnd
