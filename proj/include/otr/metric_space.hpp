#pragma once

#include <stdexcept>
#include <vector>

#include "otr/rational.hpp"

namespace otr {

// Finite metric space with exact pairwise distances.
class MetricSpace {
 public:
  MetricSpace() : n_(1), dist_(1, Rat(0)) {}

  explicit MetricSpace(const std::vector<std::vector<Rat>>& matrix)
      : n_(static_cast<int>(matrix.size())), dist_(static_cast<std::size_t>(n_) * n_) {
    if (n_ < 1) throw std::invalid_argument("metric space needs at least one point");
    for (int i = 0; i < n_; ++i) {
      if (static_cast<int>(matrix[i].size()) != n_)
        throw std::invalid_argument("distance matrix must be square");
      for (int j = 0; j < n_; ++j) dist_[idx(i, j)] = matrix[i][j];
    }
    validate();
  }

  int size() const { return n_; }

  const Rat& dist(int i, int j) const {
    check_point(i);
    check_point(j);
    return dist_[idx(i, j)];
  }

  // Symmetry, zero diagonal, positivity off the diagonal, triangle inequality.
  void validate() const {
    for (int i = 0; i < n_; ++i) {
      if (dist_[idx(i, i)] != 0) throw std::invalid_argument("nonzero diagonal");
      for (int j = i + 1; j < n_; ++j) {
        if (dist_[idx(i, j)] != dist_[idx(j, i)]) throw std::invalid_argument("asymmetric matrix");
        if (dist_[idx(i, j)] <= 0) throw std::invalid_argument("distinct points at distance <= 0");
      }
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int l = 0; l < n_; ++l)
          if (dist_[idx(i, l)] > dist_[idx(i, j)] + dist_[idx(j, l)])
            throw std::invalid_argument("triangle inequality violated");
  }

  Rat min_positive_distance() const {
    Rat best = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (best == 0 || dist_[idx(i, j)] < best) best = dist_[idx(i, j)];
    return best;
  }

  MetricSpace scaled_by_inverse(const Rat& factor) const {
    if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
    MetricSpace out;
    out.n_ = n_;
    out.dist_ = dist_;
    for (auto& d : out.dist_) d /= factor;
    return out;
  }

  // Restriction to a point subset, re-indexed in the given order.
  MetricSpace restrict_to(const std::vector<int>& points) const {
    int m = static_cast<int>(points.size());
    std::vector<std::vector<Rat>> matrix(m, std::vector<Rat>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) matrix[i][j] = dist(points[i], points[j]);
    return MetricSpace(matrix);
  }

  std::vector<std::vector<Rat>> matrix() const {
    std::vector<std::vector<Rat>> out(n_, std::vector<Rat>(n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[i][j] = dist_[idx(i, j)];
    return out;
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  void check_point(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("point index out of range");
  }

  int n_;
  std::vector<Rat> dist_;
};

}  // namespace otr
