#include "pixcrypt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pixcrypt/etc_cipher.hpp"
#include "pixcrypt/learnable.hpp"
#include "pixcrypt/ml_props.hpp"
#include "pixcrypt/transform.hpp"
#include "pixcrypt/watermark.hpp"

namespace pixcrypt::cli {

namespace {

const std::vector<std::string> kEtcVariants{"color", "grayscale-rgb", "grayscale-ycbcr"};
const std::vector<std::string> kLearnableVariants{"pixelwise", "shf", "neg", "ffx"};
const std::vector<std::string> kAllVariants{"color",     "grayscale-rgb", "grayscale-ycbcr",
                                            "pixelwise", "shf",           "neg",
                                            "ffx"};

struct TransformArgs {
  std::string variant;
  int bx = 0;
  int by = 0;
  int block = 4;
  std::string key_path;
  std::string ffx_password;
  std::string steps;
};

void add_transform_options(CLI::App* cmd, TransformArgs& a, const std::vector<std::string>& variants,
                           bool key_required = true) {
  cmd->add_option("--variant,--transform", a.variant, "Transform variant")
      ->required()
      ->check(CLI::IsMember(variants));
  cmd->add_option("--bx", a.bx, "EtC block width (defaults to --block)")->check(CLI::PositiveNumber);
  cmd->add_option("--by", a.by, "EtC block height (defaults to --block)")->check(CLI::PositiveNumber);
  cmd->add_option("--block,-M", a.block, "Block size M")->check(CLI::PositiveNumber);
  auto* key = cmd->add_option("--key", a.key_path, "Key file (JSON)");
  if (key_required) key->required();
  cmd->add_option("--ffx-password", a.ffx_password, "FFX password (overrides the key file)");
  cmd->add_option("--steps", a.steps,
                  "EtC steps to apply, comma separated: scramble,rotate,negpos,shuffle");
}

EtcSteps parse_steps(const std::string& text) {
  if (text.empty()) return {};
  EtcSteps s{false, false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "scramble") s.scramble = true;
    else if (item == "rotate") s.rotate_invert = true;
    else if (item == "negpos") s.negpos = true;
    else if (item == "shuffle") s.color_shuffle = true;
    else throw CLI::ValidationError("--steps", "unknown step '" + item + "'");
  }
  return s;
}

Transform build_transform(const TransformArgs& a) {
  const auto key = read_key_file(a.key_path);
  const std::string password = a.ffx_password.empty() ? key.ffx_password : a.ffx_password;
  auto t = make_transform(a.variant, a.bx, a.by, a.block, key.master, password);
  if (auto* c = std::get_if<EtcConfig>(&t)) c->steps = parse_steps(a.steps);
  return t;
}

void print_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyed perceptual image encryption and learnable transforms"};
  app.name("pixcrypt");
  app.require_subcommand(1);

  // keygen
  std::string keygen_out;
  std::optional<std::uint64_t> keygen_seed;
  std::string keygen_password;
  auto* keygen = app.add_subcommand("keygen", "Write a fresh key file");
  keygen->add_option("-o,--out", keygen_out, "Key file to write")->required();
  keygen->add_option("--seed", keygen_seed, "Deterministic key from a 64-bit seed");
  keygen->add_option("--ffx-password", keygen_password, "Store an explicit FFX password");

  // encrypt / decrypt
  TransformArgs enc_args, dec_args;
  std::string enc_in, enc_out, dec_in, dec_out;
  bool dec_packed = false;
  auto* encrypt = app.add_subcommand("encrypt", "EtC block-scrambling encryption");
  add_transform_options(encrypt, enc_args, kEtcVariants);
  encrypt->add_option("input", enc_in, "Input PGM/PPM")->required();
  encrypt->add_option("output", enc_out, "Encrypted PGM/PPM")->required();
  auto* decrypt = app.add_subcommand("decrypt", "EtC decryption");
  add_transform_options(decrypt, dec_args, kEtcVariants);
  decrypt->add_option("input", dec_in, "Encrypted PGM/PPM")->required();
  decrypt->add_option("output", dec_out, "Decrypted PGM/PPM")->required();
  decrypt->add_flag("--packed", dec_packed, "Grayscale variants: keep the packed grayscale image");

  // transform / invert
  TransformArgs tr_args, inv_args;
  std::string tr_in, tr_out, tr_meta, inv_in, inv_out;
  auto* transform = app.add_subcommand("transform", "Pixel-wise or block-wise SHF/NEG/FFX transform");
  add_transform_options(transform, tr_args, kLearnableVariants);
  transform->add_option("input", tr_in, "Input PGM/PPM")->required();
  transform->add_option("output", tr_out, "Transformed PGM/PPM")->required();
  transform->add_option("--meta", tr_meta, "FFX metadata file (default: <output>.json)");
  auto* invert = app.add_subcommand("invert", "Invert a pixel-wise, SHF or NEG transform");
  add_transform_options(invert, inv_args, kLearnableVariants);
  invert->add_option("input", inv_in, "Transformed PGM/PPM")->required();
  invert->add_option("output", inv_out, "Restored PGM/PPM")->required();

  // keyspace
  std::uint64_t ks_x = 0, ks_y = 0, ks_bx = 0, ks_by = 0;
  auto* keyspace = app.add_subcommand("keyspace", "Key space of the color-based EtC scheme");
  keyspace->add_option("--x", ks_x, "Image width")->required();
  keyspace->add_option("--y", ks_y, "Image height")->required();
  keyspace->add_option("--bx", ks_bx, "Block width")->required();
  keyspace->add_option("--by", ks_by, "Block height")->required();

  // verify
  TransformArgs ver_args;
  std::string ver_dataset;
  double ver_gamma = 0.0;
  int ver_degree = 2;
  auto* verify = app.add_subcommand("verify", "Check distance/inner-product/order preservation");
  add_transform_options(verify, ver_args, kAllVariants);
  verify->add_option("--dataset", ver_dataset, "Directory of images with labels.csv")->required();
  verify->add_option("--gamma", ver_gamma, "RBF gamma (default 1/features)");
  verify->add_option("--degree", ver_degree, "Polynomial kernel degree")->check(CLI::PositiveNumber);

  // knn
  TransformArgs knn_args;
  std::string knn_train, knn_test, knn_preds;
  int knn_k = 1;
  auto* knn = app.add_subcommand("knn", "kNN classification, optionally on transformed data");
  add_transform_options(knn, knn_args, kAllVariants, false);
  knn->get_option("--variant")->required(false);
  knn->add_option("--train", knn_train, "Training directory")->required();
  knn->add_option("--test", knn_test, "Test directory")->required();
  knn->add_option("-k", knn_k, "Neighbours")->check(CLI::PositiveNumber);
  knn->add_option("--preds", knn_preds, "Write predictions CSV");

  // keysense
  TransformArgs sense_args;
  std::string sense_data;
  int sense_trials = 100;
  std::uint64_t sense_seed = 0;
  int sense_k = 1;
  auto* keysense = app.add_subcommand("keysense", "Correct vs incorrect key accuracy");
  add_transform_options(keysense, sense_args, kAllVariants);
  keysense->add_option("--data", sense_data, "Directory with train/ and test/ subdirectories")
      ->required();
  keysense->add_option("--trials", sense_trials, "Random incorrect keys")->check(CLI::PositiveNumber);
  keysense->add_option("--seed", sense_seed, "Seed for the incorrect keys");
  keysense->add_option("-k", sense_k, "Neighbours")->check(CLI::PositiveNumber);

  // watermark
  TransformArgs wm_args;
  std::string wm_a, wm_b, wm_data;
  int wm_trials = 100;
  std::uint64_t wm_seed = 0;
  int wm_k = 1;
  auto* watermark = app.add_subcommand(
      "watermark", "Watermark detection tau from two prediction files, or the full protocol");
  add_transform_options(watermark, wm_args, kAllVariants, false);
  watermark->get_option("--variant")->required(false);
  auto* opt_a = watermark->add_option("--preds-a", wm_a, "Predictions on plain images");
  auto* opt_b = watermark->add_option("--preds-b", wm_b, "Predictions on transformed images");
  auto* opt_data =
      watermark->add_option("--data", wm_data, "Directory with train/ and test/ subdirectories");
  opt_a->needs(opt_b);
  opt_b->needs(opt_a);
  opt_a->excludes(opt_data);
  opt_data->needs("--variant");
  opt_data->needs("--key");
  watermark->add_option("--trials", wm_trials, "Random incorrect keys")->check(CLI::PositiveNumber);
  watermark->add_option("--seed", wm_seed, "Seed for the incorrect keys");
  watermark->add_option("-k", wm_k, "Neighbours")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (watermark->parsed() && wm_a.empty() && wm_data.empty())
      throw CLI::RequiredError("watermark needs --preds-a/--preds-b or --data");
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (keygen->parsed()) {
      KeyFile k;
      if (keygen_seed) {
        std::mt19937_64 rng(*keygen_seed);
        k.master = random_key(rng);
      } else {
        k.master = random_master_key();
      }
      k.ffx_password = keygen_password;
      write_key_file(k, keygen_out);
    } else if (encrypt->parsed()) {
      const auto t = build_transform(enc_args);
      write_image(etc_encrypt(read_image(enc_in), std::get<EtcConfig>(t)), enc_out);
    } else if (decrypt->parsed()) {
      const auto t = build_transform(dec_args);
      const auto& cfg = std::get<EtcConfig>(t);
      Image img = etc_decrypt(read_image(dec_in), cfg);
      if (!dec_packed && cfg.variant == EtcVariant::kGrayscaleRgb) img = unpack_grayscale_rgb(img);
      if (!dec_packed && cfg.variant == EtcVariant::kGrayscaleYcbcr) img = unpack_grayscale_ycbcr(img);
      write_image(img, dec_out);
    } else if (transform->parsed()) {
      const auto t = build_transform(tr_args);
      const auto result = apply_transform(read_image(tr_in), t);
      write_image(result.quantize(), tr_out);
      if (std::get<TransformSpec>(t).variant == LearnableVariant::kFfx) {
        const nlohmann::json meta{{"variant", "ffx"},
                                  {"block", std::get<TransformSpec>(t).block},
                                  {"max", result.scale},
                                  {"channels", result.channels},
                                  {"height", result.height},
                                  {"width", result.width}};
        write_text(tr_meta.empty() ? tr_out + ".json" : tr_meta, meta.dump(2) + "\n");
      }
    } else if (invert->parsed()) {
      const auto t = build_transform(inv_args);
      write_image(invert_transform(read_image(inv_in), t), inv_out);
    } else if (keyspace->parsed()) {
      const auto r = keyspace_color(ks_x, ks_y, ks_bx, ks_by);
      print_json(out, {{"n", r.n}, {"log2_keyspace", r.log2_keyspace}});
    } else if (verify->parsed()) {
      const auto t = build_transform(ver_args);
      const auto data = load_labeled_dir(ver_dataset);
      VerifyOptions opts;
      opts.rbf_gamma = ver_gamma;
      opts.poly_degree = ver_degree;
      print_json(out, to_json(verify_properties(data.images, t, opts)));
    } else if (knn->parsed()) {
      const auto train = load_labeled_dir(knn_train);
      const auto test = load_labeled_dir(knn_test);
      std::optional<Transform> t;
      if (!knn_args.variant.empty()) {
        if (knn_args.key_path.empty()) throw CLI::RequiredError("--key");
        t = build_transform(knn_args);
      }
      auto features = [&](const Image& img) {
        return t ? vectorize(apply_transform(img, *t)) : vectorize(img);
      };
      Dataset model;
      for (std::size_t i = 0; i < train.size(); ++i) model.add(features(train.images[i]), train.labels[i]);
      std::vector<FeatureVector> queries;
      for (const auto& img : test.images) queries.push_back(features(img));
      const auto preds = knn_predict(model, queries, knn_k);
      if (!knn_preds.empty()) write_predictions(test.names, preds, knn_preds);
      print_json(out, {{"transform", t ? variant_name(*t) : "none"},
                       {"k", knn_k},
                       {"n", preds.size()},
                       {"accuracy", accuracy(preds, test.labels)}});
    } else if (keysense->parsed()) {
      const auto t = build_transform(sense_args);
      const std::filesystem::path root(sense_data);
      const auto train = load_labeled_dir((root / "train").string());
      const auto test = load_labeled_dir((root / "test").string());
      print_json(out, to_json(evaluate_key_sensitivity(train, test, t, sense_trials, sense_seed, sense_k)));
    } else if (watermark->parsed()) {
      if (!wm_a.empty()) {
        const auto a = read_predictions(wm_a);
        const auto b = read_predictions(wm_b);
        print_json(out, {{"tau", watermark_detect(a, b)}, {"n", a.size()}});
      } else {
        const auto t = build_transform(wm_args);
        const std::filesystem::path root(wm_data);
        const auto train = load_labeled_dir((root / "train").string());
        const auto test = load_labeled_dir((root / "test").string());
        print_json(out, to_json(evaluate_watermark(train, test, t, wm_trials, wm_seed, wm_k)));
      }
    }
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kUsage;
  } catch (const IoError& e) {
    error_line(err, "io", e.what());
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    error_line(err, "io", e.what());
    return kIo;
  } catch (const DomainError& e) {
    error_line(err, "domain", e.what());
    return kDomain;
  } catch (const Error& e) {
    error_line(err, "domain", e.what());
    return kDomain;
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"pixcrypt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pixcrypt::cli
