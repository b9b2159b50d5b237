#include "fnd/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fnd/errors.hpp"
#include "fnd/mathutil.hpp"
#include "fnd/rng.hpp"

namespace fnd {

namespace {

void axpy(std::size_t n, double alpha, const double* src, double* dst) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += alpha * src[i];
}

double dot_n(std::size_t n, const double* a, const double* b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Activations per step, one row per time step.
struct CellTrace {
    Matrix input_gate, forget_gate, output_gate, candidate;
    Matrix cell_state, cell_tanh, hidden;

    CellTrace(std::size_t steps, std::size_t hidden_dim)
        : input_gate(steps, hidden_dim),
          forget_gate(steps, hidden_dim),
          output_gate(steps, hidden_dim),
          candidate(steps, hidden_dim),
          cell_state(steps, hidden_dim),
          cell_tanh(steps, hidden_dim),
          hidden(steps, hidden_dim) {}
};

void validate_cell(const LstmParams& cell) {
    const std::size_t embed = cell.embed_dim();
    const std::size_t hidden = cell.hidden_dim();
    for (std::size_t g = 0; g < 4; ++g) {
        if (cell.input_weights[g].rows != embed || cell.input_weights[g].cols != hidden ||
            cell.recurrent_weights[g].rows != hidden ||
            cell.recurrent_weights[g].cols != hidden || cell.biases[g].size() != hidden) {
            throw std::invalid_argument("inconsistent LSTM parameter shapes");
        }
    }
}

CellTrace forward_trace(const LstmParams& cell, const std::vector<const double*>& inputs) {
    const std::size_t steps = inputs.size();
    const std::size_t embed = cell.embed_dim();
    const std::size_t hidden = cell.hidden_dim();
    CellTrace trace(steps, hidden);

    const std::vector<double> zeros(hidden, 0.0);
    std::array<std::vector<double>, 4> pre;
    for (auto& v : pre) v.resize(hidden);

    for (std::size_t t = 0; t < steps; ++t) {
        const double* h_prev = t == 0 ? zeros.data() : trace.hidden.row(t - 1);
        const double* c_prev = t == 0 ? zeros.data() : trace.cell_state.row(t - 1);
        const double* x = inputs[t];

        for (std::size_t g = 0; g < 4; ++g) {
            std::copy(cell.biases[g].begin(), cell.biases[g].end(), pre[g].begin());
            for (std::size_t e = 0; e < embed; ++e) {
                if (x[e] != 0.0) axpy(hidden, x[e], cell.input_weights[g].row(e), pre[g].data());
            }
            for (std::size_t p = 0; p < hidden; ++p) {
                if (h_prev[p] != 0.0) {
                    axpy(hidden, h_prev[p], cell.recurrent_weights[g].row(p), pre[g].data());
                }
            }
        }

        double* i_t = trace.input_gate.row(t);
        double* f_t = trace.forget_gate.row(t);
        double* o_t = trace.output_gate.row(t);
        double* g_t = trace.candidate.row(t);
        double* c_t = trace.cell_state.row(t);
        double* tc_t = trace.cell_tanh.row(t);
        double* h_t = trace.hidden.row(t);
        for (std::size_t k = 0; k < hidden; ++k) {
            i_t[k] = sigmoid(pre[kGateInput][k]);
            f_t[k] = sigmoid(pre[kGateForget][k]);
            o_t[k] = sigmoid(pre[kGateOutput][k]);
            g_t[k] = std::tanh(pre[kGateCandidate][k]);
            c_t[k] = f_t[k] * c_prev[k] + i_t[k] * g_t[k];
            tc_t[k] = std::tanh(c_t[k]);
            h_t[k] = o_t[k] * tc_t[k];
        }
    }
    return trace;
}

LstmGradients zero_cell_gradients(const LstmParams& cell) {
    LstmGradients grads;
    for (std::size_t g = 0; g < 4; ++g) {
        grads.input_weights[g] = Matrix(cell.input_weights[g].rows, cell.input_weights[g].cols);
        grads.recurrent_weights[g] =
            Matrix(cell.recurrent_weights[g].rows, cell.recurrent_weights[g].cols);
        grads.biases[g].assign(cell.biases[g].size(), 0.0);
    }
    return grads;
}

// Backpropagates d_final (gradient w.r.t. the last hidden state) through
// the cell. input_grads receives d loss / d x_t, one row per step in the
// cell's own processing order.
void backprop_cell(const LstmParams& cell, const CellTrace& trace,
                   const std::vector<const double*>& inputs, const std::vector<double>& d_final,
                   LstmGradients& grads, Matrix& input_grads) {
    const std::size_t steps = inputs.size();
    const std::size_t embed = cell.embed_dim();
    const std::size_t hidden = cell.hidden_dim();
    const std::vector<double> zeros(hidden, 0.0);

    std::vector<double> dh(d_final);
    std::vector<double> dc_next(hidden, 0.0);
    std::vector<double> dh_next(hidden, 0.0);
    std::array<std::vector<double>, 4> da;
    for (auto& v : da) v.resize(hidden);

    for (std::size_t t = steps; t-- > 0;) {
        const double* i_t = trace.input_gate.row(t);
        const double* f_t = trace.forget_gate.row(t);
        const double* o_t = trace.output_gate.row(t);
        const double* g_t = trace.candidate.row(t);
        const double* tc_t = trace.cell_tanh.row(t);
        const double* c_prev = t == 0 ? zeros.data() : trace.cell_state.row(t - 1);
        const double* h_prev = t == 0 ? zeros.data() : trace.hidden.row(t - 1);

        for (std::size_t k = 0; k < hidden; ++k) {
            const double dc = dh[k] * o_t[k] * (1.0 - tc_t[k] * tc_t[k]) + dc_next[k];
            const double d_o = dh[k] * tc_t[k];
            const double d_f = dc * c_prev[k];
            const double d_i = dc * g_t[k];
            const double d_g = dc * i_t[k];
            da[kGateInput][k] = d_i * i_t[k] * (1.0 - i_t[k]);
            da[kGateForget][k] = d_f * f_t[k] * (1.0 - f_t[k]);
            da[kGateOutput][k] = d_o * o_t[k] * (1.0 - o_t[k]);
            da[kGateCandidate][k] = d_g * (1.0 - g_t[k] * g_t[k]);
            dc_next[k] = dc * f_t[k];
        }

        double* dx = input_grads.row(t);
        std::fill(dx, dx + embed, 0.0);
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        const double* x = inputs[t];
        for (std::size_t g = 0; g < 4; ++g) {
            const double* da_g = da[g].data();
            for (std::size_t e = 0; e < embed; ++e) {
                if (x[e] != 0.0) axpy(hidden, x[e], da_g, grads.input_weights[g].row(e));
                dx[e] += dot_n(hidden, cell.input_weights[g].row(e), da_g);
            }
            for (std::size_t p = 0; p < hidden; ++p) {
                if (h_prev[p] != 0.0) {
                    axpy(hidden, h_prev[p], da_g, grads.recurrent_weights[g].row(p));
                }
                dh_next[p] += dot_n(hidden, cell.recurrent_weights[g].row(p), da_g);
            }
            axpy(hidden, 1.0, da_g, grads.biases[g].data());
        }
        dh = dh_next;
    }
}

void validate_classifier(const LstmClassifier& model) {
    if (model.embed_dim < 1 || model.hidden_dim < 1) {
        throw std::invalid_argument("classifier dimensions must be >= 1");
    }
    validate_cell(model.forward_cell);
    if (model.forward_cell.embed_dim() != model.embed_dim ||
        model.forward_cell.hidden_dim() != model.hidden_dim) {
        throw std::invalid_argument("forward cell shape does not match classifier dims");
    }
    if (model.backward_cell) {
        validate_cell(*model.backward_cell);
        if (model.backward_cell->embed_dim() != model.embed_dim ||
            model.backward_cell->hidden_dim() != model.hidden_dim) {
            throw std::invalid_argument("backward cell shape does not match classifier dims");
        }
    }
    if (model.embedding.matrix.cols != model.embed_dim) {
        throw std::invalid_argument("embedding width does not match embed_dim");
    }
    const std::size_t feature_dim =
        model.bidirectional() ? 2 * model.hidden_dim : model.hidden_dim;
    if (model.head_weights.size() != feature_dim) {
        throw std::invalid_argument("head width does not match feature size");
    }
}

// Embedding rows of the unmasked prefix, in source order.
std::vector<const double*> gather_inputs(const LstmClassifier& model,
                                         const SequenceEncoding& seq) {
    const std::size_t length = seq.effective_length();
    if (length == 0) throw std::invalid_argument("sequence contains only padding");
    std::vector<const double*> inputs;
    inputs.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        const std::uint32_t idx = seq.indices[t];
        if (idx >= model.embedding.matrix.rows) {
            throw std::invalid_argument("sequence index " + std::to_string(idx) +
                                        " out of range for embedding of " +
                                        std::to_string(model.embedding.matrix.rows) + " rows");
        }
        inputs.push_back(model.embedding.matrix.row(idx));
    }
    return inputs;
}

// Raw head score; traces are returned for reuse by the backward pass.
double forward_score(const LstmClassifier& model, const std::vector<const double*>& inputs,
                     std::optional<CellTrace>& fwd_trace, std::optional<CellTrace>& bwd_trace,
                     std::vector<const double*>& reversed) {
    const std::size_t length = inputs.size();
    const std::size_t hidden = model.hidden_dim;

    fwd_trace.emplace(forward_trace(model.forward_cell, inputs));
    double z = model.head_bias;
    const double* h_last = fwd_trace->hidden.row(length - 1);
    z += dot_n(hidden, model.head_weights.data(), h_last);

    if (model.bidirectional()) {
        reversed.assign(inputs.rbegin(), inputs.rend());
        bwd_trace.emplace(forward_trace(*model.backward_cell, reversed));
        const double* h_back = bwd_trace->hidden.row(length - 1);
        z += dot_n(hidden, model.head_weights.data() + hidden, h_back);
    }
    return z;
}

}  // namespace

std::vector<std::vector<double>> lstm_forward(const LstmParams& cell,
                                              const std::vector<std::vector<double>>& embedded) {
    validate_cell(cell);
    if (embedded.empty()) throw std::invalid_argument("empty input sequence");
    std::vector<const double*> inputs;
    inputs.reserve(embedded.size());
    for (const auto& x : embedded) {
        if (x.size() != cell.embed_dim()) {
            throw std::invalid_argument("input width does not match embed_dim");
        }
        inputs.push_back(x.data());
    }
    const CellTrace trace = forward_trace(cell, inputs);
    std::vector<std::vector<double>> hidden_states(embedded.size());
    for (std::size_t t = 0; t < embedded.size(); ++t) {
        hidden_states[t].assign(trace.hidden.row(t), trace.hidden.row(t) + cell.hidden_dim());
    }
    return hidden_states;
}

double classify_forward(const LstmClassifier& model, const SequenceEncoding& seq) {
    validate_classifier(model);
    const std::vector<const double*> inputs = gather_inputs(model, seq);
    std::optional<CellTrace> fwd_trace, bwd_trace;
    std::vector<const double*> reversed;
    const double z = forward_score(model, inputs, fwd_trace, bwd_trace, reversed);
    return fake_probability(z);
}

ClassifierGradients zero_gradients(const LstmClassifier& model) {
    ClassifierGradients grads;
    grads.embedding = Matrix(model.embedding.matrix.rows, model.embedding.matrix.cols);
    grads.forward_cell = zero_cell_gradients(model.forward_cell);
    if (model.backward_cell) grads.backward_cell = zero_cell_gradients(*model.backward_cell);
    grads.head_weights.assign(model.head_weights.size(), 0.0);
    grads.head_bias = 0.0;
    grads.loss = 0.0;
    return grads;
}

void accumulate_bptt(const LstmClassifier& model, const SequenceEncoding& seq, Label label,
                     ClassifierGradients& acc) {
    validate_classifier(model);
    const std::vector<const double*> inputs = gather_inputs(model, seq);
    const std::size_t length = inputs.size();
    const std::size_t hidden = model.hidden_dim;

    std::optional<CellTrace> fwd_trace, bwd_trace;
    std::vector<const double*> reversed;
    const double z = forward_score(model, inputs, fwd_trace, bwd_trace, reversed);

    const double target = label == Label::Fake ? 1.0 : 0.0;
    acc.loss += bce_from_score(z, target);
    const double dz = sigmoid(z) - target;

    acc.head_bias += dz;
    axpy(hidden, dz, fwd_trace->hidden.row(length - 1), acc.head_weights.data());

    Matrix input_grads(length, model.embed_dim);
    std::vector<double> d_final(hidden);
    for (std::size_t k = 0; k < hidden; ++k) d_final[k] = dz * model.head_weights[k];
    backprop_cell(model.forward_cell, *fwd_trace, inputs, d_final, acc.forward_cell, input_grads);
    for (std::size_t t = 0; t < length; ++t) {
        axpy(model.embed_dim, 1.0, input_grads.row(t), acc.embedding.row(seq.indices[t]));
    }

    if (model.bidirectional()) {
        axpy(hidden, dz, bwd_trace->hidden.row(length - 1), acc.head_weights.data() + hidden);
        for (std::size_t k = 0; k < hidden; ++k) d_final[k] = dz * model.head_weights[hidden + k];
        backprop_cell(*model.backward_cell, *bwd_trace, reversed, d_final, *acc.backward_cell,
                      input_grads);
        // reversed position r is source position length-1-r
        for (std::size_t r = 0; r < length; ++r) {
            axpy(model.embed_dim, 1.0, input_grads.row(r),
                 acc.embedding.row(seq.indices[length - 1 - r]));
        }
    }
}

ClassifierGradients bptt_gradients(const LstmClassifier& model, const SequenceEncoding& seq,
                                   Label label) {
    ClassifierGradients grads = zero_gradients(model);
    accumulate_bptt(model, seq, label, grads);
    return grads;
}

namespace {

struct TensorRef {
    double* data;
    std::size_t size;
};

struct ConstTensorRef {
    const double* data;
    std::size_t size;
};

// LstmParams and LstmGradients share their field layout, so one helper
// enumerates either; constness of the ref type follows the argument.
template <typename RefT, typename CellT>
void cell_tensor_refs(CellT& cell, std::vector<RefT>& out) {
    for (std::size_t g = 0; g < 4; ++g) {
        out.push_back({cell.input_weights[g].data.data(), cell.input_weights[g].data.size()});
    }
    for (std::size_t g = 0; g < 4; ++g) {
        out.push_back(
            {cell.recurrent_weights[g].data.data(), cell.recurrent_weights[g].data.size()});
    }
    for (std::size_t g = 0; g < 4; ++g) {
        out.push_back({cell.biases[g].data(), cell.biases[g].size()});
    }
}

std::vector<TensorRef> tensor_refs(LstmClassifier& model) {
    std::vector<TensorRef> refs;
    refs.push_back({model.embedding.matrix.data.data(), model.embedding.matrix.data.size()});
    cell_tensor_refs(model.forward_cell, refs);
    if (model.backward_cell) cell_tensor_refs(*model.backward_cell, refs);
    refs.push_back({model.head_weights.data(), model.head_weights.size()});
    refs.push_back({&model.head_bias, 1});
    return refs;
}

std::vector<TensorRef> tensor_refs(ClassifierGradients& grads) {
    std::vector<TensorRef> refs;
    refs.push_back({grads.embedding.data.data(), grads.embedding.data.size()});
    cell_tensor_refs(grads.forward_cell, refs);
    if (grads.backward_cell) cell_tensor_refs(*grads.backward_cell, refs);
    refs.push_back({grads.head_weights.data(), grads.head_weights.size()});
    refs.push_back({&grads.head_bias, 1});
    return refs;
}

std::vector<ConstTensorRef> tensor_refs(const ClassifierGradients& grads) {
    std::vector<ConstTensorRef> refs;
    refs.push_back({grads.embedding.data.data(), grads.embedding.data.size()});
    cell_tensor_refs(grads.forward_cell, refs);
    if (grads.backward_cell) cell_tensor_refs(*grads.backward_cell, refs);
    refs.push_back({grads.head_weights.data(), grads.head_weights.size()});
    refs.push_back({&grads.head_bias, 1});
    return refs;
}

std::vector<ConstTensorRef> tensor_sizes(const LstmClassifier& model) {
    std::vector<ConstTensorRef> refs;
    refs.push_back({model.embedding.matrix.data.data(), model.embedding.matrix.data.size()});
    cell_tensor_refs(model.forward_cell, refs);
    if (model.backward_cell) cell_tensor_refs(*model.backward_cell, refs);
    refs.push_back({model.head_weights.data(), model.head_weights.size()});
    refs.push_back({&model.head_bias, 1});
    return refs;
}

}  // namespace

AdamState make_adam_state(const LstmClassifier& model, double learning_rate) {
    AdamState state;
    state.learning_rate = learning_rate;
    const auto refs = tensor_sizes(model);
    state.first_moment.reserve(refs.size());
    state.second_moment.reserve(refs.size());
    for (const ConstTensorRef& ref : refs) {
        state.first_moment.emplace_back(ref.size, 0.0);
        state.second_moment.emplace_back(ref.size, 0.0);
    }
    return state;
}

void adam_step(AdamState& state, LstmClassifier& params, const ClassifierGradients& grads) {
    const auto p_refs = tensor_refs(params);
    const auto g_refs = tensor_refs(grads);
    if (p_refs.size() != g_refs.size() || p_refs.size() != state.first_moment.size()) {
        throw std::invalid_argument("optimizer state does not match parameter layout");
    }

    ++state.step_count;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

    for (std::size_t k = 0; k < p_refs.size(); ++k) {
        if (p_refs[k].size != g_refs[k].size || p_refs[k].size != state.first_moment[k].size()) {
            throw std::invalid_argument("gradient tensor shape mismatch");
        }
        double* p = p_refs[k].data;
        const double* g = g_refs[k].data;
        double* m = state.first_moment[k].data();
        double* v = state.second_moment[k].data();
        for (std::size_t i = 0; i < p_refs[k].size; ++i) {
            if (!std::isfinite(g[i])) throw TrainError("non-finite gradient");
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            p[i] -= state.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + state.epsilon);
        }
    }
}

namespace {

LstmParams make_cell(std::uint32_t embed_dim, std::uint32_t hidden_dim) {
    LstmParams cell;
    for (std::size_t g = 0; g < 4; ++g) {
        cell.input_weights[g] = Matrix(embed_dim, hidden_dim);
        cell.recurrent_weights[g] = Matrix(hidden_dim, hidden_dim);
        cell.biases[g].assign(hidden_dim, 0.0);
    }
    return cell;
}

}  // namespace

LstmClassifier train_neural(const Corpus& corpus, const Vocabulary& vocab, const NeuralArch& arch,
                            const TrainConfig& cfg) {
    cfg.validate();
    if (arch.embed_dim < 1 || arch.hidden_dim < 1 || arch.max_len < 1) {
        throw std::invalid_argument("architecture dimensions must be >= 1");
    }
    if (corpus.documents.empty()) throw DataError("cannot train on an empty corpus");
    if (!corpus.labeled()) throw DataError("training corpus must be labeled");

    std::vector<SequenceEncoding> sequences;
    std::vector<Label> labels;
    for (const LabeledDocument& doc : corpus.documents) {
        SequenceEncoding seq =
            encode_sequence(vocab, preprocess(doc.text, PipelineKind::Neural), arch.max_len);
        if (seq.effective_length() == 0) continue;
        sequences.push_back(std::move(seq));
        labels.push_back(*doc.label);
    }
    if (sequences.empty()) throw DataError("no trainable documents (all empty after tokenizing)");

    LstmClassifier model;
    model.embed_dim = arch.embed_dim;
    model.hidden_dim = arch.hidden_dim;
    model.max_len = arch.max_len;
    model.embedding.matrix = Matrix(vocab.size() + 2, arch.embed_dim);
    model.forward_cell = make_cell(arch.embed_dim, arch.hidden_dim);
    if (arch.bidirectional) model.backward_cell = make_cell(arch.embed_dim, arch.hidden_dim);
    model.head_weights.assign(arch.bidirectional ? 2 * arch.hidden_dim : arch.hidden_dim, 0.0);

    Rng rng(cfg.seed);
    for (const TensorRef& ref : tensor_refs(model)) {
        for (std::size_t i = 0; i < ref.size; ++i) ref.data[i] = rng.uniform(-0.05, 0.05);
    }
    std::fill_n(model.embedding.matrix.row(SequenceEncoding::kPadIndex), arch.embed_dim, 0.0);

    AdamState adam = make_adam_state(model, cfg.learning_rate);

    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), 0);
    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            ClassifierGradients grads = zero_gradients(model);
            for (std::size_t k = start; k < end; ++k) {
                accumulate_bptt(model, sequences[order[k]], labels[order[k]], grads);
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            if (!std::isfinite(grads.loss * scale)) {
                throw TrainError("non-finite loss at epoch " + std::to_string(epoch));
            }
            for (const TensorRef& ref : tensor_refs(grads)) {
                for (std::size_t i = 0; i < ref.size; ++i) ref.data[i] *= scale;
            }
            adam_step(adam, model, grads);
        }
    }
    return model;
}

}  // namespace fnd
