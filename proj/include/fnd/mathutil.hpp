#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace fnd {

// Decision scores this close to certainty are clamped so complements and
// log-losses stay finite.
inline constexpr double kProbabilityFloor = 1e-12;

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Probability of Fake from a raw decision score, strictly inside (0, 1).
inline double fake_probability(double score) {
    return std::clamp(sigmoid(score), kProbabilityFloor, 1.0 - kProbabilityFloor);
}

// Binary cross-entropy of sigmoid(score) against target in {0, 1},
// evaluated in logit space so saturated scores cannot produce inf/nan.
inline double bce_from_score(double score, double target) {
    return std::max(score, 0.0) - score * target + std::log1p(std::exp(-std::abs(score)));
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace fnd
