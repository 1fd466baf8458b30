#pragma once

#include <cstdint>
#include <limits>

namespace bumpforest {

/// Mergeable streaming moments (Welford updates, Chan et al. merge).
class StreamStats {
 public:
  void add(double x);
  void add_truncated() { ++truncated_; }
  void merge(const StreamStats& other);

  std::uint64_t count() const { return count_; }
  std::uint64_t truncated() const { return truncated_; }
  double mean() const { return mean_; }
  /// Sum of squared deviations from the mean.
  double m2() const { return m2_; }
  double min() const { return min_; }
  double max() const { return max_; }

  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const;
  /// sqrt(variance / count).
  double standard_error() const;

 private:
  std::uint64_t count_ = 0;
  std::uint64_t truncated_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace bumpforest
