#include "pixcrypt/watermark.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>

#include "pixcrypt/ml_props.hpp"

namespace pixcrypt {

double watermark_detect(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("prediction vectors differ in length");
  if (a.empty()) throw DomainError("watermark detection over zero predictions");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

SecretKey random_key(std::mt19937_64& rng) {
  Bytes b(32);
  for (int w = 0; w < 4; ++w) {
    std::uint64_t v = rng();
    for (int k = 0; k < 8; ++k, v >>= 8) b[w * 8 + k] = static_cast<std::uint8_t>(v & 0xFF);
  }
  return SecretKey(std::move(b));
}

namespace {

void check_split(const LabeledImages& s, const char* what) {
  if (s.size() == 0) throw DomainError(std::string(what) + " split is empty");
  if (s.labels.size() != s.size()) throw DimensionError("label count differs from image count");
}

std::vector<FeatureVector> transformed_features(const LabeledImages& s, const Transform& t) {
  std::vector<FeatureVector> out;
  out.reserve(s.size());
  for (const auto& img : s.images) out.push_back(vectorize(apply_transform(img, t)));
  return out;
}

std::vector<FeatureVector> plain_features(const LabeledImages& s) {
  std::vector<FeatureVector> out;
  out.reserve(s.size());
  for (const auto& img : s.images) out.push_back(vectorize(img));
  return out;
}

std::vector<SecretKey> incorrect_keys(const Transform& t, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("at least one incorrect-key trial is required");
  std::mt19937_64 rng(seed);
  std::vector<SecretKey> keys;
  while (static_cast<int>(keys.size()) < trials) {
    auto k = random_key(rng);
    if (k != key_of(t)) keys.push_back(std::move(k));
  }
  return keys;
}

}  // namespace

KeySensitivityReport evaluate_key_sensitivity(const LabeledImages& train,
                                              const LabeledImages& test, const Transform& t,
                                              int trials, std::uint64_t seed, int k) {
  check_split(train, "training");
  check_split(test, "test");
  const auto keys = incorrect_keys(t, trials, seed);

  Dataset model;
  {
    auto feats = transformed_features(train, t);
    for (std::size_t i = 0; i < feats.size(); ++i) model.add(std::move(feats[i]), train.labels[i]);
  }

  KeySensitivityReport r;
  r.transform = variant_name(t);
  r.trials = trials;
  r.k = k;
  r.accuracy_correct_key = accuracy(knn_predict(model, transformed_features(test, t), k), test.labels);
  r.accuracy_plain = accuracy(knn_predict(model, plain_features(test), k), test.labels);
  r.accuracy_incorrect_key_min = 1.0;
  double sum = 0.0;
  for (const auto& wrong : keys) {
    const double acc =
        accuracy(knn_predict(model, transformed_features(test, with_key(t, wrong)), k), test.labels);
    sum += acc;
    r.accuracy_incorrect_key_min = std::min(r.accuracy_incorrect_key_min, acc);
    r.accuracy_incorrect_key_max = std::max(r.accuracy_incorrect_key_max, acc);
  }
  r.accuracy_incorrect_key_mean = sum / trials;
  return r;
}

WatermarkReport evaluate_watermark(const LabeledImages& train, const LabeledImages& test,
                                   const Transform& t, int trials, std::uint64_t seed, int k) {
  check_split(train, "training");
  check_split(test, "test");
  const auto keys = incorrect_keys(t, trials, seed);

  Dataset model;
  {
    auto plain = plain_features(train);
    auto keyed = transformed_features(train, t);
    for (std::size_t i = 0; i < train.size(); ++i) {
      model.add(std::move(plain[i]), train.labels[i]);
      model.add(std::move(keyed[i]), train.labels[i]);
    }
  }

  WatermarkReport r;
  r.transform = variant_name(t);
  r.trials = trials;
  r.k = k;
  const auto on_plain = knn_predict(model, plain_features(test), k);
  const auto on_keyed = knn_predict(model, transformed_features(test, t), k);
  r.accuracy_plain = accuracy(on_plain, test.labels);
  r.accuracy_correct_key = accuracy(on_keyed, test.labels);
  r.tau_correct = watermark_detect(on_plain, on_keyed);
  double sum = 0.0;
  for (const auto& wrong : keys) {
    const auto on_wrong = knn_predict(model, transformed_features(test, with_key(t, wrong)), k);
    const double tau = watermark_detect(on_plain, on_wrong);
    sum += tau;
    r.tau_incorrect_max = std::max(r.tau_incorrect_max, tau);
  }
  r.tau_incorrect_mean = sum / trials;
  return r;
}

nlohmann::json to_json(const KeySensitivityReport& r) {
  return {{"transform", r.transform},
          {"accuracy_correct_key", r.accuracy_correct_key},
          {"accuracy_incorrect_key_mean", r.accuracy_incorrect_key_mean},
          {"accuracy_incorrect_key_min", r.accuracy_incorrect_key_min},
          {"accuracy_incorrect_key_max", r.accuracy_incorrect_key_max},
          {"accuracy_plain", r.accuracy_plain},
          {"trials", r.trials},
          {"k", r.k}};
}

nlohmann::json to_json(const WatermarkReport& r) {
  return {{"transform", r.transform},
          {"accuracy_plain", r.accuracy_plain},
          {"accuracy_correct_key", r.accuracy_correct_key},
          {"tau_correct", r.tau_correct},
          {"tau_incorrect_mean", r.tau_incorrect_mean},
          {"tau_incorrect_max", r.tau_incorrect_max},
          {"trials", r.trials},
          {"k", r.k}};
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Rows of "name,label"; skips blank lines and a leading "filename,label" header.
std::vector<std::pair<std::string, int>> read_name_label_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::string, int>> rows;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path + ":" + std::to_string(line_no) + ": expected name,label");
    const auto name = trim(line.substr(0, comma));
    const auto label = trim(line.substr(comma + 1));
    if (first && name == "filename" && label == "label") {
      first = false;
      continue;
    }
    first = false;
    int v = 0;
    const auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
    if (ec != std::errc() || p != label.data() + label.size() || v < 0)
      throw IoError(path + ":" + std::to_string(line_no) + ": label must be a non-negative integer");
    rows.emplace_back(name, v);
  }
  return rows;
}

}  // namespace

LabeledImages load_labeled_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  LabeledImages out;
  for (const auto& [name, label] : read_name_label_csv((root / "labels.csv").string())) {
    out.images.push_back(read_image((root / name).string()));
    out.labels.push_back(label);
    out.names.push_back(name);
  }
  if (out.size() == 0) throw IoError("no labelled images in " + dir);
  return out;
}

void save_labeled_dir(const LabeledImages& data, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  std::ofstream csv(root / "labels.csv");
  if (!csv) throw IoError("cannot write labels in " + dir);
  csv << "filename,label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    write_image(data.images[i], (root / data.names[i]).string());
    csv << data.names[i] << ',' << data.labels[i] << '\n';
  }
}

PredictionVector read_predictions(const std::string& path) {
  PredictionVector out;
  for (const auto& row : read_name_label_csv(path)) out.push_back(row.second);
  return out;
}

void write_predictions(const std::vector<std::string>& names, std::span<const int> labels,
                       const std::string& path) {
  if (names.size() != labels.size()) throw DimensionError("name and label counts differ");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write predictions: " + path);
  out << "filename,label\n";
  for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << ',' << labels[i] << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pixcrypt
