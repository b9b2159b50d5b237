#include "fnd/ensemble.hpp"

#include <algorithm>
#include <stdexcept>

#include "fnd/errors.hpp"
#include "fnd/mathutil.hpp"

namespace fnd {

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Nb: return "nb";
        case ModelKind::Lr: return "lr";
        case ModelKind::Svm: return "svm";
        case ModelKind::NbLr: return "nblr";
        case ModelKind::Lstm: return "lstm";
        case ModelKind::BiLstm: return "bilstm";
        case ModelKind::Ensemble: return "ensemble";
    }
    throw std::invalid_argument("bad ModelKind");
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "nb") return ModelKind::Nb;
    if (name == "lr") return ModelKind::Lr;
    if (name == "svm") return ModelKind::Svm;
    if (name == "nblr") return ModelKind::NbLr;
    if (name == "lstm") return ModelKind::Lstm;
    if (name == "bilstm") return ModelKind::BiLstm;
    if (name == "ensemble") return ModelKind::Ensemble;
    throw DataError("unknown model kind \"" + name + "\"");
}

Prediction Prediction::from_probability(double p_fake) {
    return Prediction{p_fake, p_fake > 0.5 ? Label::Fake : Label::Real};
}

std::string strategy_name(EnsembleStrategy strategy) {
    return strategy == EnsembleStrategy::SoftVote ? "soft" : "majority";
}

EnsembleStrategy parse_strategy(const std::string& name) {
    if (name == "soft") return EnsembleStrategy::SoftVote;
    if (name == "majority") return EnsembleStrategy::MajorityVote;
    throw DataError("unknown ensemble strategy \"" + name + "\" (expected soft or majority)");
}

void EnsembleConfig::validate() const {
    if (members.empty()) throw DataError("ensemble needs at least one member");
    for (ModelKind member : members) {
        if (member == ModelKind::Ensemble) {
            throw DataError("ensembles cannot nest");
        }
        if (std::count(members.begin(), members.end(), member) > 1) {
            throw DataError("duplicate ensemble member \"" + model_kind_name(member) + "\"");
        }
    }
    if (strategy == EnsembleStrategy::MajorityVote && members.size() % 2 == 0) {
        throw DataError("majority voting requires an odd number of members");
    }
}

Prediction soft_vote(const std::vector<Prediction>& predictions) {
    if (predictions.empty()) throw std::invalid_argument("soft_vote needs at least one member");
    double sum = 0.0;
    for (const Prediction& p : predictions) sum += p.p_fake;
    return Prediction::from_probability(sum / static_cast<double>(predictions.size()));
}

Prediction majority_vote(const std::vector<Prediction>& predictions) {
    if (predictions.size() % 2 == 0) {
        throw std::invalid_argument("majority_vote needs an odd number of members");
    }
    std::size_t fake_votes = 0;
    for (const Prediction& p : predictions) {
        if (p.label == Label::Fake) ++fake_votes;
    }
    const Label winner =
        fake_votes * 2 > predictions.size() ? Label::Fake : Label::Real;

    double sum = 0.0;
    std::size_t count = 0;
    for (const Prediction& p : predictions) {
        if (p.label == winner) {
            sum += p.p_fake;
            ++count;
        }
    }
    return Prediction{sum / static_cast<double>(count), winner};
}

Prediction member_predict(ModelKind member, const MemberModels& models,
                          const DocumentFeatures& features) {
    auto missing = [&]() -> DataError {
        return DataError("no fitted model for ensemble member \"" + model_kind_name(member) +
                         "\"");
    };
    auto neural = [&](const std::optional<LstmClassifier>& model) {
        if (!model) throw missing();
        if (features.sequence.effective_length() == 0) {
            return Prediction::from_probability(0.5);
        }
        return Prediction::from_probability(classify_forward(*model, features.sequence));
    };

    switch (member) {
        case ModelKind::Nb:
            if (!models.nb) throw missing();
            return Prediction::from_probability(fake_probability(nb_log_odds(*models.nb, features.tfidf)));
        case ModelKind::Lr:
            if (!models.lr) throw missing();
            return Prediction::from_probability(predict_linear(*models.lr, features.tfidf));
        case ModelKind::Svm:
            if (!models.svm) throw missing();
            return Prediction::from_probability(predict_linear(*models.svm, features.tfidf));
        case ModelKind::NbLr:
            if (!models.nblr) throw missing();
            return Prediction::from_probability(predict_nblr(*models.nblr, features.tfidf));
        case ModelKind::Lstm:
            return neural(models.lstm);
        case ModelKind::BiLstm:
            return neural(models.bilstm);
        case ModelKind::Ensemble:
            break;
    }
    throw std::invalid_argument("not a trainable member kind");
}

Prediction ensemble_classify(const EnsembleConfig& config, const MemberModels& models,
                             const DocumentFeatures& features) {
    config.validate();
    std::vector<Prediction> predictions;
    predictions.reserve(config.members.size());
    for (ModelKind member : config.members) {
        predictions.push_back(member_predict(member, models, features));
    }
    return config.strategy == EnsembleStrategy::SoftVote ? soft_vote(predictions)
                                                         : majority_vote(predictions);
}

}  // namespace fnd
