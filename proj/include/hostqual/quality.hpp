#pragma once

#include <span>
#include <vector>

#include "hostqual/corpus.hpp"

namespace hostqual {

inline constexpr int kQualityClassCount = 10;

// Expectation of the class value under a distribution over classes 0..9:
// sum of p[i] * i. p may be shorter than 10 (missing classes carry zero
// mass); it must be nonnegative and sum to 1 within 1e-9.
double expected_quality(std::span<const double> p);

struct QualityScore {
    HostId host;
    double score = 0.0;
};

// Descending by score, ties broken by ascending host name.
std::vector<QualityScore> rank_hosts(std::vector<QualityScore> scores);

}  // namespace hostqual
