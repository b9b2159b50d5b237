#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnd/corpus.hpp"
#include "fnd/features.hpp"
#include "fnd/linear.hpp"
#include "fnd/neural.hpp"

namespace fnd {

// The six trainable members plus the ensemble wrapper itself.
enum class ModelKind { Nb, Lr, Svm, NbLr, Lstm, BiLstm, Ensemble };

std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct Prediction {
    double p_fake = 0.0;
    Label label = Label::Real;

    // Fake iff p > 0.5; ties go to Real.
    static Prediction from_probability(double p_fake);

    bool operator==(const Prediction&) const = default;
};

enum class EnsembleStrategy { SoftVote, MajorityVote };

std::string strategy_name(EnsembleStrategy strategy);
EnsembleStrategy parse_strategy(const std::string& name);

struct EnsembleConfig {
    std::vector<ModelKind> members;
    EnsembleStrategy strategy = EnsembleStrategy::SoftVote;

    // Non-empty, no duplicates, no nested ensembles; majority voting
    // additionally requires an odd member count.
    void validate() const;
};

// Arithmetic mean of member probabilities.
Prediction soft_vote(const std::vector<Prediction>& predictions);

// Label held by more than half the members; the reported probability is
// the mean over the members voting with the majority.
Prediction majority_vote(const std::vector<Prediction>& predictions);

// Fitted models an ensemble can draw from.
struct MemberModels {
    std::optional<NaiveBayesModel> nb;
    std::optional<LinearModel> lr;
    std::optional<LinearModel> svm;
    std::optional<NbLrModel> nblr;
    std::optional<LstmClassifier> lstm;
    std::optional<LstmClassifier> bilstm;
};

// Both views of one document: classical models read the tf-idf vector,
// neural models the sequence encoding.
struct DocumentFeatures {
    SparseVector tfidf;
    SequenceEncoding sequence;
};

// A document with no tokens carries no evidence for a recurrent model, so
// neural members score it 0.5 instead of failing.
Prediction member_predict(ModelKind member, const MemberModels& models,
                          const DocumentFeatures& features);

Prediction ensemble_classify(const EnsembleConfig& config, const MemberModels& models,
                             const DocumentFeatures& features);

}  // namespace fnd
