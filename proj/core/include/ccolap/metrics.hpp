#pragma once

#include <vector>

namespace ccolap {

struct ClusteringScore {
  double accuracy = 0.0;
  double nmi = 0.0;
};

// accuracy: best fraction matched over relabelings of `labels` (exhaustive for
// k <= 8, assignment search above); nmi: I(labels;truth) normalized by
// sqrt(H(labels) H(truth)), natural log, 0/0 -> 0. At most 12 distinct labels
// per side.
ClusteringScore clustering_metrics(const std::vector<int>& labels,
                                   const std::vector<int>& truth);

}  // namespace ccolap
