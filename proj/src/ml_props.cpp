#include "pixcrypt/ml_props.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace pixcrypt {

void Dataset::add(FeatureVector x, int label) {
  if (!samples.empty() && x.size() != dim())
    throw DimensionError("feature vector length differs from the dataset");
  samples.push_back(std::move(x));
  labels.push_back(label);
}

FeatureVector vectorize(const Image& img) {
  return FeatureVector(img.data().begin(), img.data().end());
}

FeatureVector vectorize(const ScaledImage& img) {
  FeatureVector out(img.values.size());
  if (img.scale == 255) {
    std::copy(img.values.begin(), img.values.end(), out.begin());
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = img.values[i] * 255.0 / img.scale;
  }
  return out;
}

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("feature vectors differ in length");
}

}  // namespace

double euclid_dist2(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double inner(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

FeatureStats feature_stats(const std::vector<FeatureVector>& samples) {
  if (samples.empty()) throw DomainError("statistics of an empty dataset");
  const std::size_t d = samples.front().size();
  const double n = static_cast<double>(samples.size());
  FeatureStats st{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (const auto& x : samples) {
    if (x.size() != d) throw DimensionError("feature vectors differ in length");
    for (std::size_t k = 0; k < d; ++k) st.mean[k] += x[k];
  }
  for (auto& m : st.mean) m /= n;
  for (const auto& x : samples)
    for (std::size_t k = 0; k < d; ++k) {
      const double c = x[k] - st.mean[k];
      st.stddev[k] += c * c;
    }
  for (auto& s : st.stddev) s = std::sqrt(s / n);
  return st;
}

Dataset zscore(const Dataset& d) {
  if (d.size() < 2) throw DomainError("z-score normalization needs at least two samples");
  const auto st = feature_stats(d.samples);
  Dataset out;
  out.labels = d.labels;
  out.samples.reserve(d.size());
  for (const auto& x : d.samples) {
    FeatureVector z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
      z[k] = st.stddev[k] > 0.0 ? (x[k] - st.mean[k]) / st.stddev[k] : 0.0;
    out.samples.push_back(std::move(z));
  }
  return out;
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("RBF gamma must be positive");
  return std::exp(-gamma * euclid_dist2(x, y));
}

double poly_kernel(std::span<const double> x, std::span<const double> y, int degree) {
  if (degree < 1) throw DomainError("polynomial degree must be at least 1");
  return std::pow(1.0 + inner(x, y), degree);
}

namespace {

template <class Kernel>
Matrix gram(const std::vector<FeatureVector>& xs, Kernel&& k) {
  Matrix g(xs.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i; j < xs.size(); ++j) g(i, j) = g(j, i) = k(xs[i], xs[j]);
  return g;
}

}  // namespace

Matrix gram_rbf(const std::vector<FeatureVector>& xs, double gamma) {
  return gram(xs, [gamma](const auto& a, const auto& b) { return rbf_kernel(a, b, gamma); });
}

Matrix gram_poly(const std::vector<FeatureVector>& xs, int degree) {
  return gram(xs, [degree](const auto& a, const auto& b) { return poly_kernel(a, b, degree); });
}

double relative_deviation(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

double max_relative_deviation(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shapes differ");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      worst = std::max(worst, relative_deviation(a(r, c), b(r, c)));
  return worst;
}

int knn_classify(const Dataset& train, std::span<const double> query, int k) {
  if (train.size() == 0) throw DomainError("kNN with an empty training set");
  if (k < 1 || static_cast<std::size_t>(k) > train.size())
    throw DomainError("kNN k must satisfy 1 <= k <= N");
  std::vector<std::pair<double, std::size_t>> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) dist[i] = {euclid_dist2(train.samples[i], query), i};
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  struct Vote {
    int count = 0;
    int best_rank = 0;
  };
  std::map<int, Vote> votes;
  for (int r = 0; r < k; ++r) {
    const int label = train.labels[dist[r].second];
    auto [it, fresh] = votes.try_emplace(label, Vote{0, r});
    ++it->second.count;
  }
  auto better = [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.best_rank != b.second.best_rank) return a.second.best_rank < b.second.best_rank;
    return a.first < b.first;
  };
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it)
    if (better(*it, *best)) best = it;
  return best->first;
}

std::vector<int> knn_predict(const Dataset& train, const std::vector<FeatureVector>& queries,
                             int k) {
  std::vector<int> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(knn_classify(train, q, k));
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw DimensionError("prediction count mismatch");
  if (truth.empty()) throw DomainError("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

FeatureOrder compare_order(std::span<const double> plain, std::span<const double> transformed) {
  check_lengths(plain, transformed);
  std::vector<std::size_t> idx(plain.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return plain[a] < plain[b]; });
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const double pa = plain[idx[i - 1]], pb = plain[idx[i]];
    const double ta = transformed[idx[i - 1]], tb = transformed[idx[i]];
    if (pa == pb) {
      if (ta != tb) return FeatureOrder::kBroken;
      continue;
    }
    up = up && tb > ta;
    down = down && tb < ta;
  }
  if (up) return FeatureOrder::kPreserved;
  if (down) return FeatureOrder::kReversed;
  return FeatureOrder::kBroken;
}

PropertyReport verify_properties(const std::vector<Image>& images, const Transform& t,
                                 const VerifyOptions& opts) {
  if (images.size() < 2) throw DomainError("property verification needs at least two images");
  Dataset plain, enc;
  for (const auto& img : images) {
    if (!img.same_shape(images.front())) throw DimensionError("dataset images differ in shape");
    plain.add(vectorize(transform_domain(img, t)), 0);
    enc.add(vectorize(apply_transform(img, t)), 0);
  }
  if (plain.dim() != enc.dim()) throw DimensionError("transform changed the feature count");

  PropertyReport r;
  r.transform = variant_name(t);
  r.samples = images.size();
  r.features = plain.dim();

  const auto zp = zscore(plain);
  const auto ze = zscore(enc);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    for (std::size_t j = i; j < plain.size(); ++j) {
      r.max_abs_inner_dev = std::max(
          r.max_abs_inner_dev,
          std::abs(inner(plain.samples[i], plain.samples[j]) - inner(enc.samples[i], enc.samples[j])));
      r.max_rel_inner_dev_zscored =
          std::max(r.max_rel_inner_dev_zscored,
                   relative_deviation(inner(zp.samples[i], zp.samples[j]),
                                      inner(ze.samples[i], ze.samples[j])));
      if (i == j) continue;
      ++r.pairs;
      r.max_abs_distance_dev =
          std::max(r.max_abs_distance_dev, std::abs(euclid_dist2(plain.samples[i], plain.samples[j]) -
                                                    euclid_dist2(enc.samples[i], enc.samples[j])));
      r.max_rel_distance_dev_zscored =
          std::max(r.max_rel_distance_dev_zscored,
                   relative_deviation(euclid_dist2(zp.samples[i], zp.samples[j]),
                                      euclid_dist2(ze.samples[i], ze.samples[j])));
    }
  }

  const double gamma = opts.rbf_gamma > 0.0 ? opts.rbf_gamma : 1.0 / static_cast<double>(r.features);
  r.max_rel_rbf_dev_zscored =
      max_relative_deviation(gram_rbf(zp.samples, gamma), gram_rbf(ze.samples, gamma));
  r.max_rel_poly_dev_zscored = max_relative_deviation(gram_poly(zp.samples, opts.poly_degree),
                                                      gram_poly(ze.samples, opts.poly_degree));

  const auto domain = transform_domain(images.front(), t);
  const auto map = pixel_map(domain.channels(), domain.height(), domain.width(), t);
  std::vector<double> a(plain.size()), b(plain.size());
  r.order.reserve(r.features);
  for (std::size_t k = 0; k < r.features; ++k) {
    for (std::size_t i = 0; i < plain.size(); ++i) {
      a[i] = plain.samples[i][map[k].source];
      b[i] = enc.samples[i][k];
    }
    const auto o = compare_order(a, b);
    r.order.push_back(o);
    switch (o) {
      case FeatureOrder::kPreserved: ++r.order_preserved_count; break;
      case FeatureOrder::kReversed: ++r.order_reversed_count; break;
      case FeatureOrder::kBroken: ++r.order_broken_count; break;
    }
  }
  r.order_preserved = r.order_broken_count == 0;
  return r;
}

nlohmann::json to_json(const PropertyReport& r) {
  return {{"transform", r.transform},
          {"samples", r.samples},
          {"features", r.features},
          {"pairs", r.pairs},
          {"max_abs_distance_dev", r.max_abs_distance_dev},
          {"max_abs_inner_dev", r.max_abs_inner_dev},
          {"max_rel_distance_dev_zscored", r.max_rel_distance_dev_zscored},
          {"max_rel_inner_dev_zscored", r.max_rel_inner_dev_zscored},
          {"max_rel_rbf_dev_zscored", r.max_rel_rbf_dev_zscored},
          {"max_rel_poly_dev_zscored", r.max_rel_poly_dev_zscored},
          {"order_preserved", r.order_preserved},
          {"order_counts",
           {{"preserved", r.order_preserved_count},
            {"reversed", r.order_reversed_count},
            {"broken", r.order_broken_count}}}};
}

}  // namespace pixcrypt
