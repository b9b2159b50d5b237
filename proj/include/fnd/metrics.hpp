#pragma once

#include <cstddef>
#include <vector>

#include "fnd/corpus.hpp"

namespace fnd {

// Fake is the positive class for the confusion counts. Undefined ratios
// (0/0) are reported as 0.
struct MetricsReport {
    double accuracy = 0.0;
    double precision_fake = 0.0, recall_fake = 0.0, f1_fake = 0.0;
    double precision_real = 0.0, recall_real = 0.0, f1_real = 0.0;
    double weighted_f1 = 0.0;  // support-weighted mean of per-class F1
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

MetricsReport compute_metrics(const std::vector<Label>& truth,
                              const std::vector<Label>& predicted);

}  // namespace fnd
