#include "fnd/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fnd/errors.hpp"
#include "fnd/mathutil.hpp"
#include "fnd/rng.hpp"

namespace fnd {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (l2_lambda < 0.0) throw std::invalid_argument("l2_lambda must be >= 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

double LinearModel::score(const SparseVector& x) const {
    double s = bias;
    for (const SparseEntry& e : x.entries) {
        if (e.index >= weights.size()) {
            throw std::invalid_argument("feature index " + std::to_string(e.index) +
                                        " out of range for model of size " +
                                        std::to_string(weights.size()));
        }
        s += weights[e.index] * e.weight;
    }
    return s;
}

NaiveBayesModel train_nb(const std::vector<SparseVector>& vectors,
                         const std::vector<Label>& labels, std::size_t num_features,
                         double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (vectors.size() != labels.size()) {
        throw std::invalid_argument("vectors/labels size mismatch");
    }
    if (vectors.empty()) throw DataError("cannot train on an empty dataset");

    std::array<std::size_t, 2> doc_counts{0, 0};
    std::array<std::vector<double>, 2> mass;
    mass[0].assign(num_features, 0.0);
    mass[1].assign(num_features, 0.0);
    std::array<double, 2> total_mass{0.0, 0.0};

    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++doc_counts[c];
        for (const SparseEntry& e : vectors[i].entries) {
            if (e.index >= num_features) {
                throw std::invalid_argument("feature index out of range");
            }
            mass[c][e.index] += e.weight;
            total_mass[c] += e.weight;
        }
    }
    for (Label cls : {Label::Real, Label::Fake}) {
        if (doc_counts[static_cast<std::size_t>(cls)] == 0) {
            throw DataError("class \"" + label_name(cls) + "\" has zero training documents");
        }
    }

    NaiveBayesModel model;
    model.alpha = alpha;
    const auto total_docs = static_cast<double>(vectors.size());
    for (std::size_t c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(doc_counts[c]) / total_docs);
        model.log_likelihood[c].resize(num_features);
        const double denom = total_mass[c] + alpha * static_cast<double>(num_features);
        for (std::size_t t = 0; t < num_features; ++t) {
            model.log_likelihood[c][t] = std::log((mass[c][t] + alpha) / denom);
        }
    }
    return model;
}

double nb_log_odds(const NaiveBayesModel& model, const SparseVector& x) {
    constexpr auto kFake = static_cast<std::size_t>(Label::Fake);
    constexpr auto kReal = static_cast<std::size_t>(Label::Real);
    double odds = model.log_prior[kFake] - model.log_prior[kReal];
    for (const SparseEntry& e : x.entries) {
        if (e.index >= model.vocab_size()) {
            throw std::invalid_argument("feature index out of range");
        }
        odds += e.weight * (model.log_likelihood[kFake][e.index] -
                            model.log_likelihood[kReal][e.index]);
    }
    return odds;
}

namespace {

double bce_target(Label label) { return label == Label::Fake ? 1.0 : 0.0; }
double hinge_sign(Label label) { return label == Label::Fake ? 1.0 : -1.0; }

void add_l2(LossGrad& lg, const std::vector<double>& weights, double l2_lambda) {
    double sq = 0.0;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        lg.grad_weights[t] += l2_lambda * weights[t];
        sq += weights[t] * weights[t];
    }
    lg.loss += 0.5 * l2_lambda * sq;
}

double sparse_score(const std::vector<double>& weights, double bias, const SparseVector& x) {
    double s = bias;
    for (const SparseEntry& e : x.entries) s += weights[e.index] * e.weight;
    return s;
}

}  // namespace

LossGrad lr_loss_grad(const std::vector<double>& weights, double bias,
                      const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                      const std::vector<std::size_t>& batch, double l2_lambda) {
    LossGrad lg;
    lg.grad_weights.assign(weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i : batch) {
        const double s = sparse_score(weights, bias, vectors[i]);
        const double y = bce_target(labels[i]);
        lg.loss += bce_from_score(s, y) * inv_n;
        const double d = (sigmoid(s) - y) * inv_n;
        for (const SparseEntry& e : vectors[i].entries) {
            lg.grad_weights[e.index] += d * e.weight;
        }
        lg.grad_bias += d;
    }
    add_l2(lg, weights, l2_lambda);
    return lg;
}

LossGrad svm_loss_grad(const std::vector<double>& weights, double bias,
                       const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                       const std::vector<std::size_t>& batch, double l2_lambda) {
    LossGrad lg;
    lg.grad_weights.assign(weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i : batch) {
        const double s = sparse_score(weights, bias, vectors[i]);
        const double y = hinge_sign(labels[i]);
        const double margin = y * s;
        if (margin < 1.0) {
            lg.loss += (1.0 - margin) * inv_n;
            const double d = -y * inv_n;  // on the margin itself the hinge is flat
            for (const SparseEntry& e : vectors[i].entries) {
                lg.grad_weights[e.index] += d * e.weight;
            }
            lg.grad_bias += d;
        }
    }
    add_l2(lg, weights, l2_lambda);
    return lg;
}

namespace {

using LossGradFn = LossGrad (*)(const std::vector<double>&, double,
                                const std::vector<SparseVector>&, const std::vector<Label>&,
                                const std::vector<std::size_t>&, double);

LinearModel train_linear_sgd(LinearKind kind, LossGradFn loss_grad,
                             const std::vector<SparseVector>& vectors,
                             const std::vector<Label>& labels, std::size_t num_features,
                             const TrainConfig& cfg) {
    cfg.validate();
    if (vectors.size() != labels.size()) {
        throw std::invalid_argument("vectors/labels size mismatch");
    }
    if (vectors.empty()) throw DataError("cannot train on an empty dataset");

    LinearModel model;
    model.kind = kind;
    model.weights.assign(num_features, 0.0);
    model.bias = 0.0;

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);

    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                 order.begin() + static_cast<std::ptrdiff_t>(end));
            const LossGrad lg =
                loss_grad(model.weights, model.bias, vectors, labels, batch, cfg.l2_lambda);
            if (!std::isfinite(lg.loss)) {
                throw TrainError("non-finite loss at epoch " + std::to_string(epoch));
            }
            for (std::size_t t = 0; t < num_features; ++t) {
                model.weights[t] -= cfg.learning_rate * lg.grad_weights[t];
            }
            model.bias -= cfg.learning_rate * lg.grad_bias;
        }
    }
    return model;
}

}  // namespace

LinearModel train_lr(const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                     std::size_t num_features, const TrainConfig& cfg) {
    return train_linear_sgd(LinearKind::LogisticRegression, &lr_loss_grad, vectors, labels,
                            num_features, cfg);
}

LinearModel train_svm(const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                      std::size_t num_features, const TrainConfig& cfg) {
    return train_linear_sgd(LinearKind::SupportVectorMachine, &svm_loss_grad, vectors, labels,
                            num_features, cfg);
}

double predict_linear(const LinearModel& model, const SparseVector& x) {
    return fake_probability(model.score(x));
}

double predict_nblr(const NbLrModel& model, const SparseVector& x) {
    if (model.nb.vocab_size() != model.lr.weights.size()) {
        throw std::invalid_argument("NB and LR submodels disagree on vocabulary size");
    }
    if (model.beta < 0.0 || model.beta > 1.0) {
        throw std::invalid_argument("beta must lie in [0, 1]");
    }
    const double s_lr = model.lr.score(x);
    const double s_nb = nb_log_odds(model.nb, x);
    double s;
    if (model.lr_gate && std::abs(s_lr) >= *model.lr_gate) {
        s = s_lr;
    } else if (model.lr_gate) {
        s = s_nb;
    } else {
        s = model.beta * s_lr + (1.0 - model.beta) * s_nb;
    }
    return fake_probability(s);
}

}  // namespace fnd
