#pragma once

// Checks that keyed transforms keep what classical learners depend on:
// Euclidean distance (kNN, RBF kernels), inner products (linear and
// polynomial kernels, after z-score normalization when negative-positive
// transformation is involved) and per-feature sample order (trees).

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "pixcrypt/image.hpp"
#include "pixcrypt/learnable.hpp"
#include "pixcrypt/transform.hpp"

namespace pixcrypt {

using FeatureVector = std::vector<double>;

struct Dataset {
  std::vector<FeatureVector> samples;
  std::vector<int> labels;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t dim() const noexcept { return samples.empty() ? 0 : samples.front().size(); }
  /// Throws DimensionError when the vector length differs from the others.
  void add(FeatureVector x, int label);
};

// Pixel values in storage order (row-major, channels interleaved).
FeatureVector vectorize(const Image& img);
// 8-bit view of a transform output: values * 255 / scale.
FeatureVector vectorize(const ScaledImage& img);

double euclid_dist2(std::span<const double> x, std::span<const double> y);
double inner(std::span<const double> x, std::span<const double> y);

struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population (1/N)
};

FeatureStats feature_stats(const std::vector<FeatureVector>& samples);
/// Per-feature (p - mean) / stddev; features with stddev 0 map to 0.
/// Throws DomainError for fewer than two samples.
Dataset zscore(const Dataset& d);

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);
double poly_kernel(std::span<const double> x, std::span<const double> y, int degree);

class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

Matrix gram_rbf(const std::vector<FeatureVector>& xs, double gamma);
Matrix gram_poly(const std::vector<FeatureVector>& xs, int degree);

// |a - b| / max(|a|, |b|, 1), the scale-aware deviation used throughout.
double relative_deviation(double a, double b);
double max_relative_deviation(const Matrix& a, const Matrix& b);

/// Majority vote over the k nearest training samples by squared distance.
/// Neighbours are ranked by (distance, training index); a vote tie goes to
/// the label with the best-ranked neighbour, then to the lower label.
int knn_classify(const Dataset& train, std::span<const double> query, int k);
std::vector<int> knn_predict(const Dataset& train, const std::vector<FeatureVector>& queries,
                             int k);
double accuracy(std::span<const int> predicted, std::span<const int> truth);

enum class FeatureOrder { kPreserved, kReversed, kBroken };

struct PropertyReport {
  std::string transform;
  std::size_t samples = 0;
  std::size_t features = 0;
  std::size_t pairs = 0;
  double max_abs_distance_dev = 0.0;
  double max_abs_inner_dev = 0.0;
  double max_rel_distance_dev_zscored = 0.0;
  double max_rel_inner_dev_zscored = 0.0;
  double max_rel_rbf_dev_zscored = 0.0;
  double max_rel_poly_dev_zscored = 0.0;
  std::vector<FeatureOrder> order;
  std::size_t order_preserved_count = 0;
  std::size_t order_reversed_count = 0;
  std::size_t order_broken_count = 0;
  bool order_preserved = true;  // every feature preserved or exactly reversed
};

/// Cross-sample ranking of `transformed` against `plain`.
FeatureOrder compare_order(std::span<const double> plain, std::span<const double> transformed);

struct VerifyOptions {
  double rbf_gamma = 0.0;  // <= 0: 1 / features
  int poly_degree = 2;
};

/// Compares every sample pair before and after the transform. Plain vectors
/// come from the transform's domain image (packed for grayscale EtC).
PropertyReport verify_properties(const std::vector<Image>& images, const Transform& t,
                                 const VerifyOptions& opts = {});

nlohmann::json to_json(const PropertyReport& r);

}  // namespace pixcrypt
