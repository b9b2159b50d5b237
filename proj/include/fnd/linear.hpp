#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/features.hpp"

namespace fnd {

struct TrainConfig {
    double learning_rate = 0.1;
    double l2_lambda = 1e-4;
    int epochs = 20;
    int batch_size = 32;
    std::uint64_t seed = 13;

    void validate() const;  // throws std::invalid_argument
};

// Multinomial model with Laplace smoothing. Feature mass may be
// fractional (tf-idf weights work as soft counts).
struct NaiveBayesModel {
    std::array<double, 2> log_prior{};                    // indexed by Label
    std::array<std::vector<double>, 2> log_likelihood{};  // dense over the vocabulary
    double alpha = 1.0;

    std::size_t vocab_size() const { return log_likelihood[0].size(); }
};

enum class LinearKind { LogisticRegression, SupportVectorMachine };

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    LinearKind kind = LinearKind::LogisticRegression;

    double score(const SparseVector& x) const;  // w.x + b
};

// Interpolates LR and NB in log-odds space. When lr_gate is set the model
// switches instead: LR alone once |lr score| >= gate, NB otherwise.
struct NbLrModel {
    NaiveBayesModel nb;
    LinearModel lr;
    double beta = 0.5;
    std::optional<double> lr_gate;
};

NaiveBayesModel train_nb(const std::vector<SparseVector>& vectors,
                         const std::vector<Label>& labels, std::size_t num_features,
                         double alpha);

// log P(Fake|x) - log P(Real|x); probability of Fake = sigmoid of this.
double nb_log_odds(const NaiveBayesModel& model, const SparseVector& x);

// Batch objective value and gradient, shared by SGD training and the
// finite-difference checks.
struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

// Mean binary cross-entropy + (l2/2)|w|^2 over the given sample indices.
LossGrad lr_loss_grad(const std::vector<double>& weights, double bias,
                      const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                      const std::vector<std::size_t>& batch, double l2_lambda);

// Mean hinge loss max(0, 1 - y.s) + (l2/2)|w|^2, y = +1 Fake / -1 Real.
LossGrad svm_loss_grad(const std::vector<double>& weights, double bias,
                       const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                       const std::vector<std::size_t>& batch, double l2_lambda);

// Mini-batch SGD from zero weights with seeded shuffling; bit-reproducible
// under a fixed config.
LinearModel train_lr(const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                     std::size_t num_features, const TrainConfig& cfg);
LinearModel train_svm(const std::vector<SparseVector>& vectors, const std::vector<Label>& labels,
                      std::size_t num_features, const TrainConfig& cfg);

// P(Fake) = sigmoid(score) for both kinds; the SVM margin is squashed the
// same way as calibration.
double predict_linear(const LinearModel& model, const SparseVector& x);

double predict_nblr(const NbLrModel& model, const SparseVector& x);

}  // namespace fnd
