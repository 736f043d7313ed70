#pragma once

// Nearest-neighbor recognition: leave-one-out and train/test-split variants
// of k-NN classification under LEM or EM, with per-class accuracies and a
// confusion matrix. Vote ties break by smaller summed distance, then by
// label order, so results are deterministic.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/spd.hpp"

namespace lielpp {

struct EvalReport {
  double accuracy = 0.0;
  std::vector<std::string> class_labels;  // sorted
  std::vector<double> per_class_accuracy;
  std::vector<std::vector<std::size_t>> confusion;  // row = true, col = predicted
  double wall_time_fit = 0.0;                       // seconds; filled by the pipeline
  double wall_time_eval = 0.0;
};

namespace detail {

inline EvalReport evaluate_knn(const std::vector<std::string>& labels,
                               const std::vector<std::size_t>& train,
                               const std::vector<std::size_t>& test,
                               const std::function<double(std::size_t, std::size_t)>& sqdist,
                               std::size_t knn_k, bool leave_one_out) {
  if (knn_k < 1) throw InvalidInput("knn evaluation: knn_k must be >= 1");
  const std::size_t min_candidates = leave_one_out ? train.size() - 1 : train.size();
  if (test.empty()) throw InvalidInput("knn evaluation: no items to evaluate");
  if (min_candidates < 1 || knn_k > min_candidates)
    throw InvalidInput("knn evaluation: not enough neighbors for knn_k = " +
                       std::to_string(knn_k));

  std::set<std::string> label_set(labels.begin(), labels.end());
  EvalReport rep;
  rep.class_labels.assign(label_set.begin(), label_set.end());
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < rep.class_labels.size(); ++i)
    label_index[rep.class_labels[i]] = i;
  rep.confusion.assign(rep.class_labels.size(),
                       std::vector<std::size_t>(rep.class_labels.size(), 0));

  std::vector<std::pair<double, std::size_t>> cand;
  std::size_t correct = 0;
  for (std::size_t q : test) {
    cand.clear();
    for (std::size_t j : train) {
      if (leave_one_out && j == q) continue;
      cand.emplace_back(sqdist(q, j), j);
    }
    std::sort(cand.begin(), cand.end());

    // label -> (votes, summed distance)
    std::map<std::string, std::pair<std::size_t, double>> votes;
    for (std::size_t r = 0; r < knn_k; ++r) {
      auto& v = votes[labels[cand[r].second]];
      v.first += 1;
      v.second += cand[r].first;
    }
    std::string predicted;
    std::size_t best_count = 0;
    double best_dist = 0.0;
    for (const auto& [label, v] : votes) {
      const bool better = v.first > best_count ||
                          (v.first == best_count && v.second < best_dist) ||
                          (v.first == best_count && v.second == best_dist &&
                           (predicted.empty() || label < predicted));
      if (predicted.empty() || better) {
        predicted = label;
        best_count = v.first;
        best_dist = v.second;
      }
    }
    rep.confusion[label_index[labels[q]]][label_index[predicted]] += 1;
    if (predicted == labels[q]) ++correct;
  }

  rep.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  rep.per_class_accuracy.assign(rep.class_labels.size(), 0.0);
  for (std::size_t c = 0; c < rep.class_labels.size(); ++c) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < rep.class_labels.size(); ++j) row += rep.confusion[c][j];
    if (row > 0)
      rep.per_class_accuracy[c] =
          static_cast<double>(rep.confusion[c][c]) / static_cast<double>(row);
  }
  return rep;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace detail

// Leave-one-out k-NN over SPD descriptors. The timed section covers the
// representation computation (matrix logs for LEM) and the classification.
inline EvalReport loo_knn_eval(const DescriptorSet& data, Metric metric, std::size_t knn_k = 1) {
  if (data.size() < 2) throw InvalidInput("loo_knn_eval: need at least 2 items");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Matrix> reps;
  reps.reserve(data.size());
  for (const SpdMatrix& s : data.descriptors())
    reps.push_back(metric == Metric::LEM ? log_spd(s).entries() : s.entries());
  auto sqdist = [&reps](std::size_t i, std::size_t j) {
    const double d = frobenius_distance(reps[i], reps[j]);
    return d * d;
  };
  const auto idx = detail::all_indices(data.size());
  EvalReport rep = detail::evaluate_knn(data.labels(), idx, idx, sqdist, knn_k, true);
  rep.wall_time_eval = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Same protocol on coordinate vectors (Euclidean metric).
inline EvalReport loo_knn_eval(const std::vector<std::vector<double>>& points,
                               const std::vector<std::string>& labels, std::size_t knn_k = 1) {
  if (points.size() < 2) throw InvalidInput("loo_knn_eval: need at least 2 items");
  if (points.size() != labels.size()) throw InvalidInput("loo_knn_eval: label count mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  auto sqdist = [&points](std::size_t i, std::size_t j) {
    return squared_distance(points[i], points[j]);
  };
  const auto idx = detail::all_indices(points.size());
  EvalReport rep = detail::evaluate_knn(labels, idx, idx, sqdist, knn_k, true);
  rep.wall_time_eval = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Train/test split: classify each test item among the training items.
inline EvalReport split_knn_eval(const DescriptorSet& data, Metric metric,
                                 const std::vector<std::size_t>& train,
                                 const std::vector<std::size_t>& test, std::size_t knn_k = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Matrix> reps;
  reps.reserve(data.size());
  for (const SpdMatrix& s : data.descriptors())
    reps.push_back(metric == Metric::LEM ? log_spd(s).entries() : s.entries());
  auto sqdist = [&reps](std::size_t i, std::size_t j) {
    const double d = frobenius_distance(reps[i], reps[j]);
    return d * d;
  };
  EvalReport rep = detail::evaluate_knn(data.labels(), train, test, sqdist, knn_k, false);
  rep.wall_time_eval = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline EvalReport split_knn_eval(const std::vector<std::vector<double>>& points,
                                 const std::vector<std::string>& labels,
                                 const std::vector<std::size_t>& train,
                                 const std::vector<std::size_t>& test, std::size_t knn_k = 1) {
  if (points.size() != labels.size()) throw InvalidInput("split_knn_eval: label count mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  auto sqdist = [&points](std::size_t i, std::size_t j) {
    return squared_distance(points[i], points[j]);
  };
  EvalReport rep = detail::evaluate_knn(labels, train, test, sqdist, knn_k, false);
  rep.wall_time_eval = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace lielpp
