#pragma once

#include <map>
#include <vector>

#include "hostqual/featmat.hpp"
#include "hostqual/linkrank.hpp"

namespace hostqual {

// A node's own measure value.
double f1(const MeasureVector& m, int32_t node);

// Weighted mean of the measure over in-neighbors, weighting each neighbor by
// the connecting edge's weight. 0 when there are no in-links.
double f2_inlink(const MeasureVector& m, const HostGraph& g, WeightKind kind,
                 int32_t node);

// Mirror of f2_inlink over out-neighbors.
double f3_outlink(const MeasureVector& m, const HostGraph& g, WeightKind kind,
                  int32_t node);

// The ten measures feeding the host-level features, in canonical order:
// hostrank, domainpr, tpr1..tpr4, sup1..sup4. Rank transitions use the
// hyperlink-count weights.
std::vector<MeasureVector> compute_link_measures(
    const HostGraph& g, const RankParams& p,
    const std::map<std::string, double>& domain_table,
    size_t* domain_misses = nullptr);

// 50 named columns: per measure F1, F2/w1, F2/wn, F3/w1, F3/wn, each value
// transformed by ln(1+x). Expects exactly the ten canonical measures.
FeatureMatrix assemble_host_features(const HostGraph& g,
                                     const std::vector<MeasureVector>& measures);

}  // namespace hostqual
