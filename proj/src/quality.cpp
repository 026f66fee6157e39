#include "hostqual/quality.hpp"

#include <algorithm>
#include <cmath>

#include "hostqual/errors.hpp"

namespace hostqual {

double expected_quality(std::span<const double> p) {
    if (p.empty() || p.size() > kQualityClassCount) {
        throw DataError("class distribution must have between 1 and 10 entries, got " +
                        std::to_string(p.size()));
    }
    double sum = 0.0;
    double score = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
            throw DataError("class probabilities must be finite and >= 0");
        }
        sum += p[i];
        score += p[i] * static_cast<double>(i);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw DataError("class probabilities sum to " + std::to_string(sum) + ", not 1");
    }
    return score;
}

std::vector<QualityScore> rank_hosts(std::vector<QualityScore> scores) {
    std::sort(scores.begin(), scores.end(), [](const QualityScore& a, const QualityScore& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.host < b.host;
    });
    return scores;
}

}  // namespace hostqual
