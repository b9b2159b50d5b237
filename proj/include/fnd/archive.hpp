#pragma once

#include <string>
#include <vector>

#include "fnd/ensemble.hpp"
#include "fnd/features.hpp"
#include "fnd/linear.hpp"
#include "fnd/neural.hpp"
#include "fnd/preprocess.hpp"

namespace fnd {

// One trained classifier together with everything needed to score raw
// text: pipeline kind, vocabulary, and parameters. Ensembles carry their
// members as nested bundles.
struct ModelBundle {
    ModelKind kind = ModelKind::Nb;
    PipelineKind pipeline = PipelineKind::Classical;
    Vocabulary vocab;         // unused for ensembles
    std::uint32_t max_len = 64;

    std::optional<NaiveBayesModel> nb;
    std::optional<LinearModel> linear;  // lr or svm
    std::optional<NbLrModel> nblr;
    std::optional<LstmClassifier> lstm;

    EnsembleStrategy strategy = EnsembleStrategy::SoftVote;
    std::vector<ModelBundle> members;  // ensembles only
};

Prediction predict_document(const ModelBundle& bundle, const std::string& raw_text);

// Versioned text archive: header, vocabulary, parameter tensors printed
// as round-trip decimal text, and a trailing fnv1a64 checksum line.
// load(save(m)) reproduces every prediction bit-exactly.
void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

// Exposed for tests.
std::string serialize_model(const ModelBundle& bundle);
ModelBundle deserialize_model(const std::string& text);

}  // namespace fnd
