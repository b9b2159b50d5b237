#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fnd/ensemble.hpp"
#include "fnd/linear.hpp"
#include "fnd/neural.hpp"

namespace fnd {

// Parsed form of the plain-text experiment file. A model is trained iff
// its block is present; ensembles may only reference present models.
struct ExperimentConfig {
    std::string train_path;
    std::string validation_path;  // optional, empty = absent
    std::string test_path;        // optional, empty = absent

    std::uint32_t min_df = 1;
    std::uint32_t max_len = 64;
    std::uint64_t seed = 13;

    std::optional<double> nb_alpha;
    std::optional<TrainConfig> lr_cfg;
    std::optional<TrainConfig> svm_cfg;

    struct NbLrSpec {
        double beta = 0.5;
        std::optional<double> gate;
    };
    std::optional<NbLrSpec> nblr;

    struct NeuralSpec {
        NeuralArch arch;
        TrainConfig cfg;
    };
    std::optional<NeuralSpec> lstm;
    std::optional<NeuralSpec> bilstm;

    struct EnsembleSpec {
        std::string name;
        EnsembleConfig config;
    };
    std::vector<EnsembleSpec> ensembles;

    bool has_model(ModelKind kind) const;
    void validate() const;  // throws ConfigError
};

// Section/key-value syntax; see the README for the schema. Unknown
// sections or keys are errors.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin);

}  // namespace fnd
