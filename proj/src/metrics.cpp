#include "fnd/metrics.hpp"

#include <stdexcept>

namespace fnd {

namespace {

double ratio(double num, double denom) { return denom == 0.0 ? 0.0 : num / denom; }

double f1(double precision, double recall) {
    return ratio(2.0 * precision * recall, precision + recall);
}

}  // namespace

MetricsReport compute_metrics(const std::vector<Label>& truth,
                              const std::vector<Label>& predicted) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("truth/prediction length mismatch");
    }
    if (truth.empty()) throw std::invalid_argument("cannot compute metrics on empty input");

    MetricsReport r;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool truth_fake = truth[i] == Label::Fake;
        const bool pred_fake = predicted[i] == Label::Fake;
        if (truth_fake && pred_fake) ++r.tp;
        if (!truth_fake && pred_fake) ++r.fp;
        if (!truth_fake && !pred_fake) ++r.tn;
        if (truth_fake && !pred_fake) ++r.fn;
    }

    const auto n = static_cast<double>(truth.size());
    const auto tp = static_cast<double>(r.tp);
    const auto fp = static_cast<double>(r.fp);
    const auto tn = static_cast<double>(r.tn);
    const auto fn = static_cast<double>(r.fn);

    r.accuracy = (tp + tn) / n;
    r.precision_fake = ratio(tp, tp + fp);
    r.recall_fake = ratio(tp, tp + fn);
    r.f1_fake = f1(r.precision_fake, r.recall_fake);
    r.precision_real = ratio(tn, tn + fn);
    r.recall_real = ratio(tn, tn + fp);
    r.f1_real = f1(r.precision_real, r.recall_real);

    const double support_fake = tp + fn;
    const double support_real = tn + fp;
    r.weighted_f1 = (support_fake * r.f1_fake + support_real * r.f1_real) / n;
    return r;
}

}  // namespace fnd
