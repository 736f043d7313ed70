#pragma once

// Covariance descriptors: turn a sequence of feature frames into SPD
// matrices, either one per sequence or one per sliding window. The
// descriptor size depends only on the feature dimension, never on the
// number of frames.

#include <string>
#include <vector>

#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/spd.hpp"

namespace lielpp {

struct FeatureSequence {
  std::vector<std::vector<double>> frames;  // each of length dim
  std::size_t dim = 0;
  std::string label;  // empty = unlabeled
  std::string id;
};

inline FeatureSequence make_feature_sequence(std::vector<std::vector<double>> frames,
                                             std::string label, std::string id) {
  if (frames.empty()) throw InvalidInput("FeatureSequence: at least one frame required");
  const std::size_t d = frames.front().size();
  if (d == 0) throw InvalidInput("FeatureSequence: zero-dimensional frames");
  for (const auto& f : frames) {
    if (f.size() != d) throw InvalidInput("FeatureSequence: frames of unequal dimension");
    for (double v : f)
      if (!std::isfinite(v)) throw InvalidInput("FeatureSequence: non-finite entry");
  }
  return FeatureSequence{std::move(frames), d, std::move(label), std::move(id)};
}

// Parallel lists of descriptors, class labels and source identifiers.
class DescriptorSet {
public:
  void add(SpdMatrix descriptor, std::string label, std::string id) {
    if (!descriptors_.empty() && descriptor.dim() != descriptors_.front().dim())
      throw InvalidInput("DescriptorSet: descriptor dimension mismatch");
    descriptors_.push_back(std::move(descriptor));
    labels_.push_back(std::move(label));
    source_ids_.push_back(std::move(id));
  }

  std::size_t size() const { return descriptors_.size(); }
  std::size_t dim() const { return descriptors_.empty() ? 0 : descriptors_.front().dim(); }
  const std::vector<SpdMatrix>& descriptors() const { return descriptors_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& source_ids() const { return source_ids_; }
  const SpdMatrix& operator[](std::size_t i) const { return descriptors_[i]; }

private:
  std::vector<SpdMatrix> descriptors_;
  std::vector<std::string> labels_;
  std::vector<std::string> source_ids_;
};

// C = (1/n) sum_i f_i f_i^T, optionally after subtracting the mean frame
// (which makes the zero-mean assumption behind the plain form actually
// true). Rank-deficient results are rejected in strict mode and lifted by
// spectral clamping otherwise.
inline SpdMatrix covariance_descriptor(const FeatureSequence& seq, bool center = true,
                                       bool clamp = true) {
  const std::size_t n = seq.frames.size();
  const std::size_t d = seq.dim;
  if (n == 0) throw InvalidInput("covariance_descriptor: empty sequence");

  std::vector<double> mean(d, 0.0);
  if (center) {
    for (const auto& f : seq.frames)
      for (std::size_t a = 0; a < d; ++a) mean[a] += f[a];
    for (double& v : mean) v /= static_cast<double>(n);
  }

  Matrix c(d, d);
  std::vector<double> dev(d);
  for (const auto& f : seq.frames) {
    for (std::size_t a = 0; a < d; ++a) dev[a] = f[a] - mean[a];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) c(a, b) += dev[a] * dev[b];
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      c(a, b) /= static_cast<double>(n);
      c(b, a) = c(a, b);
    }
  return make_spd(c, clamp ? SpdMode::Clamp : SpdMode::Strict);
}

// Sliding windows of T frames with the given overlap (stride T - overlap).
// A final short window (>= 2 frames) is kept so labeled data is not
// silently discarded; sequences shorter than T yield a single window.
inline DescriptorSet window_descriptors(const FeatureSequence& seq, std::size_t t_frames,
                                        std::size_t overlap, bool center = true) {
  if (t_frames < 2) throw InvalidInput("window_descriptors: window length must be >= 2");
  if (overlap >= t_frames) throw InvalidInput("window_descriptors: overlap must be < window length");
  const std::size_t n = seq.frames.size();
  if (n < 2) throw InvalidInput("window_descriptors: sequence must have >= 2 frames");

  const std::size_t stride = t_frames - overlap;
  std::vector<std::pair<std::size_t, std::size_t>> windows;  // [start, end)
  std::size_t start = 0;
  while (start + t_frames <= n) {
    windows.emplace_back(start, start + t_frames);
    start += stride;
  }
  const std::size_t covered = windows.empty() ? 0 : windows.back().second;
  const std::size_t tail_start = windows.empty() ? 0 : start;
  if (covered < n && n - tail_start >= 2) windows.emplace_back(tail_start, n);

  DescriptorSet out;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto [lo, hi] = windows[w];
    FeatureSequence sub;
    sub.frames.assign(seq.frames.begin() + static_cast<std::ptrdiff_t>(lo),
                      seq.frames.begin() + static_cast<std::ptrdiff_t>(hi));
    sub.dim = seq.dim;
    sub.label = seq.label;
    sub.id = seq.id + "#" + std::to_string(w);
    out.add(covariance_descriptor(sub, center, /*clamp=*/true), sub.label, sub.id);
  }
  return out;
}

}  // namespace lielpp
