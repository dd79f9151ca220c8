#pragma once

// Watermark detection and key-sensitivity (access control) evaluation with a
// kNN classifier standing in for the protected model.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixcrypt/image.hpp"
#include "pixcrypt/transform.hpp"

namespace pixcrypt {

using PredictionVector = std::vector<int>;

struct LabeledImages {
  std::vector<Image> images;
  std::vector<int> labels;
  std::vector<std::string> names;

  std::size_t size() const noexcept { return images.size(); }
};

/// Fraction of positions where the two prediction vectors agree.
/// Throws DimensionError on a length mismatch, DomainError when empty.
double watermark_detect(std::span<const int> a, std::span<const int> b);

// 32-byte master drawn from the generator (four little-endian 64-bit words).
SecretKey random_key(std::mt19937_64& rng);

struct KeySensitivityReport {
  std::string transform;
  double accuracy_correct_key = 0.0;
  double accuracy_incorrect_key_mean = 0.0;
  double accuracy_incorrect_key_min = 0.0;
  double accuracy_incorrect_key_max = 0.0;
  double accuracy_plain = 0.0;
  int trials = 0;
  int k = 1;
};

/// kNN is fitted on training images transformed with the correct key, then
/// scored on test images transformed with that key, with `trials` random
/// incorrect keys (seeded by `seed`), and untransformed.
KeySensitivityReport evaluate_key_sensitivity(const LabeledImages& train,
                                              const LabeledImages& test, const Transform& t,
                                              int trials, std::uint64_t seed, int k = 1);

struct WatermarkReport {
  std::string transform;
  double accuracy_plain = 0.0;
  double accuracy_correct_key = 0.0;
  double tau_correct = 0.0;
  double tau_incorrect_mean = 0.0;
  double tau_incorrect_max = 0.0;
  int trials = 0;
  int k = 1;
};

/// Watermarked model: kNN fitted on the plain training images together with
/// their key-transformed copies. tau compares its predictions on plain test
/// images with those on test images transformed by the correct key, and by
/// `trials` random incorrect keys.
WatermarkReport evaluate_watermark(const LabeledImages& train, const LabeledImages& test,
                                   const Transform& t, int trials, std::uint64_t seed, int k = 1);

nlohmann::json to_json(const KeySensitivityReport& r);
nlohmann::json to_json(const WatermarkReport& r);

// Directory of PGM/PPM files plus labels.csv rows "filename,label" (integer
// labels; an optional "filename,label" header line is skipped).
LabeledImages load_labeled_dir(const std::string& dir);
void save_labeled_dir(const LabeledImages& data, const std::string& dir);

// Prediction CSV: header "filename,label", one row per test image.
PredictionVector read_predictions(const std::string& path);
void write_predictions(const std::vector<std::string>& names, std::span<const int> labels,
                       const std::string& path);

}  // namespace pixcrypt
