#include "ccolap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ccolap/errors.hpp"

namespace ccolap {

namespace {

constexpr int kMaxLabels = 12;

std::vector<int> compact_labels(const std::vector<int>& v, int& k) {
  std::unordered_map<int, int> id;
  std::vector<int> out(v.size());
  for (size_t p = 0; p < v.size(); ++p) {
    const auto [it, fresh] = id.emplace(v[p], static_cast<int>(id.size()));
    out[p] = it->second;
    if (fresh && id.size() > kMaxLabels)
      throw ValidationError("clustering_metrics: more than 12 distinct labels");
  }
  k = static_cast<int>(id.size());
  return out;
}

// Largest total matched count over one-to-one relabelings. Rows are the
// smaller side; every row can be assigned, and with nonnegative weights a
// full assignment of rows is optimal.
double best_assignment(const std::vector<std::vector<double>>& w) {
  const int rows = static_cast<int>(w.size());
  const int cols = static_cast<int>(w[0].size());
  std::vector<double> dp(size_t{1} << cols, -1.0);
  dp[0] = 0.0;
  double best = 0.0;
  for (size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] < 0.0) continue;
    const int row = __builtin_popcountll(mask);
    if (row == rows) {
      best = std::max(best, dp[mask]);
      continue;
    }
    for (int c = 0; c < cols; ++c) {
      if (mask & (size_t{1} << c)) continue;
      double& slot = dp[mask | (size_t{1} << c)];
      slot = std::max(slot, dp[mask] + w[row][c]);
    }
  }
  return best;
}

}  // namespace

ClusteringScore clustering_metrics(const std::vector<int>& labels,
                                   const std::vector<int>& truth) {
  if (labels.size() != truth.size())
    throw ValidationError("clustering_metrics: label vectors differ in length");
  if (labels.empty())
    throw ValidationError("clustering_metrics: empty label vectors");
  const double n = static_cast<double>(labels.size());
  int ka = 0, kb = 0;
  const std::vector<int> a = compact_labels(labels, ka);
  const std::vector<int> b = compact_labels(truth, kb);

  std::vector<std::vector<double>> joint(ka, std::vector<double>(kb, 0.0));
  std::vector<double> ca(ka, 0.0), cb(kb, 0.0);
  for (size_t p = 0; p < a.size(); ++p) {
    joint[a[p]][b[p]] += 1.0;
    ca[a[p]] += 1.0;
    cb[b[p]] += 1.0;
  }

  ClusteringScore s;
  if (ka <= kb) {
    s.accuracy = best_assignment(joint) / n;
  } else {
    std::vector<std::vector<double>> t(kb, std::vector<double>(ka, 0.0));
    for (int i = 0; i < ka; ++i)
      for (int j = 0; j < kb; ++j) t[j][i] = joint[i][j];
    s.accuracy = best_assignment(t) / n;
  }

  double info = 0.0, ha = 0.0, hb = 0.0;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j)
      if (joint[i][j] > 0.0)
        info += joint[i][j] / n * std::log(n * joint[i][j] / (ca[i] * cb[j]));
  for (int i = 0; i < ka; ++i) ha -= ca[i] / n * std::log(ca[i] / n);
  for (int j = 0; j < kb; ++j) hb -= cb[j] / n * std::log(cb[j] / n);
  const double denom = std::sqrt(ha * hb);
  s.nmi = denom > 0.0 ? std::max(0.0, info) / denom : 0.0;
  return s;
}

}  // namespace ccolap
