#include "rawsynth/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rawsynth/dark_bank.hpp"
#include "rawsynth/hbnr.hpp"
#include "rawsynth/io.hpp"
#include "rawsynth/pairing.hpp"
#include "rawsynth/preview.hpp"
#include "rawsynth/profiling.hpp"
#include "rawsynth/ptc.hpp"
#include "rawsynth/shot_noise.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace rawsynth::cli {

const char* kVersion = "0.1.0";

namespace {

struct ProfileOptions {
  int base_iso = 100;
  double qe_lo = 0.30;
  double qe_hi = 0.70;
  double qe_hypothesis = 0.50;
  int bit_depth = 14;
  int black_level = 512;
  int white_level = 16383;
  std::string cfa = "RGGB";
  std::string name = "generic";

  SensorProfile build() const {
    SensorProfile p;
    p.name = name;
    p.base_iso = base_iso;
    p.qe_lo = qe_lo;
    p.qe_hi = qe_hi;
    p.qe_hypothesis = qe_hypothesis;
    p.bit_depth = bit_depth;
    p.black_level = std::uint16_t(black_level);
    p.white_level = std::uint16_t(white_level);
    p.cfa = cfa_from_name(cfa);
    p.validate();
    return p;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--base-iso", base_iso, "ISO at analog gain 1");
    cmd->add_option("--qe-lo", qe_lo, "lower QE bound");
    cmd->add_option("--qe-hi", qe_hi, "upper QE bound");
    cmd->add_option("--bit-depth", bit_depth, "sensor bit depth");
    cmd->add_option("--black-level", black_level, "black level in DN");
    cmd->add_option("--white-level", white_level, "white level in DN");
    cmd->add_option("--cfa", cfa, "CFA pattern (RGGB|BGGR|GRBG|GBRG)");
    cmd->add_option("--sensor-name", name, "sensor profile name");
  }

  ordered_json to_json() const {
    return {{"name", name},         {"base_iso", base_iso},
            {"qe_lo", qe_lo},       {"qe_hi", qe_hi},
            {"qe_hypothesis", qe_hypothesis}, {"bit_depth", bit_depth},
            {"black_level", black_level},     {"white_level", white_level},
            {"cfa", cfa}};
  }
};

std::vector<fs::path> sorted_files(const fs::path& dir,
                                   const std::vector<std::string>& exts) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      if (std::find(exts.begin(), exts.end(), ext) != exts.end())
        files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

LinearFrame load_linear(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  if (std::string(magic, 4) == "RAWF") return read_rawf(path);
  return to_linear(read_rawb(path));
}

ordered_json input_digests(const std::vector<fs::path>& files) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : files)
    arr.push_back({{"path", f.string()}, {"digest", file_digest(f)}});
  return arr;
}

// Manifests carry inputs, seeds, and options but no output paths or
// timestamps, so two runs of the same command are byte-comparable.
void write_manifest(const fs::path& path, ordered_json manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.dump(2) << "\n";
}

// Dark-frame loading, shading, and the shading-corrected center-cropped fit
// frames shared by profile/qq/hbnr.
struct DarkContext {
  DarkBank bank;
  DarkShading shading;
};

DarkContext make_dark_context(const fs::path& dark_dir, const SensorProfile& profile,
                              int iso, const std::string& shading_path) {
  DarkBank bank = load_bank(dark_dir, profile);
  DarkShading shading = shading_path.empty() ? calibrate_shading(bank, iso)
                                             : read_dshd(shading_path);
  return {std::move(bank), std::move(shading)};
}

std::vector<LinearFrame> corrected_frames(const DarkContext& ctx, int iso,
                                          std::size_t begin, std::size_t end,
                                          int crop_size) {
  const auto& frames = ctx.bank.group(iso);
  end = std::min(end, frames.size());
  std::vector<LinearFrame> out;
  for (std::size_t i = begin; i < end; ++i) {
    const RawFrame& f = frames[i];
    int ch = std::min(crop_size, f.height);
    int cw = std::min(crop_size, f.width);
    ch -= ch % 2;
    cw -= cw % 2;
    Crop crop{(f.height - ch) / 2 / 2 * 2, (f.width - cw) / 2 / 2 * 2, ch, cw};
    out.push_back(dark_patch(ctx.bank, iso, ctx.shading, int(i), crop, Flips{}));
  }
  return out;
}

std::vector<double> strided_subsample(std::vector<double> samples, std::size_t cap) {
  if (cap == 0 || samples.size() <= cap) return samples;
  std::vector<double> out;
  out.reserve(cap);
  double step = double(samples.size()) / double(cap);
  for (std::size_t i = 0; i < cap; ++i)
    out.push_back(samples[std::size_t(double(i) * step)]);
  return out;
}

// ---- subcommands ----------------------------------------------------------

struct CalibrateShadingCmd {
  std::string dark_dir, out;
  int iso = 0;
  int subset = 0;
  std::uint64_t seed = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    DarkBank bank = load_bank(dark_dir, p);
    DarkShading shading;
    if (subset > 0) {
      Rng rng(seed);
      shading = recalibrate_online(bank, iso, subset, rng);
    } else {
      shading = calibrate_shading(bank, iso);
    }
    write_dshd(shading, p, out);

    ordered_json manifest;
    manifest["command"] = "calibrate-shading";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso}, {"subset", subset}, {"seed", seed}};
    manifest["inputs"] = input_digests(sorted_files(dark_dir, {".rawb", ".raw"}));
    write_manifest(out + ".manifest.json", manifest);
    std::cout << "calibrated shading from " << shading.frame_count
              << " frames at ISO " << iso << " -> " << out << "\n";
    return 0;
  }
};

struct SynthesizeCmd {
  std::string clean_dir, dark_dir, out_dir, shading_path;
  std::string patch = "512x512";
  std::string policy = "exhaustive";
  int iso = 0;
  double qe = 0.50;
  bool qe_jitter = false;
  std::uint64_t seed = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    int ph = 0, pw = 0;
    if (std::sscanf(patch.c_str(), "%dx%d", &ph, &pw) != 2)
      throw ConfigError("--patch must look like 512x512");

    PairPolicy pair_policy;
    if (policy == "exhaustive") {
      pair_policy = PairPolicy::exhaustive();
    } else if (policy.rfind("random:", 0) == 0) {
      pair_policy = PairPolicy::random(std::stoull(policy.substr(7)));
    } else {
      throw ConfigError("--policy must be 'exhaustive' or 'random:N'");
    }

    auto clean_files = sorted_files(clean_dir, {".rawb", ".rawf"});
    if (clean_files.empty()) throw ConfigError("no clean frames under " + clean_dir);
    std::vector<std::string> clean_ids;
    std::vector<LinearFrame> clean_frames;
    for (const auto& f : clean_files) {
      clean_ids.push_back(f.stem().string());
      clean_frames.push_back(load_linear(f));
    }

    DarkContext ctx = make_dark_context(dark_dir, p, iso, shading_path);
    Rng rng(seed);
    QePolicy qe_policy{qe_jitter, qe};
    auto recipes = enumerate_pairs(clean_ids, ctx.bank, iso, pair_policy, ph, pw,
                                   rng, qe_policy);

    fs::create_directories(out_dir);
    char name[64];
    for (std::size_t i = 0; i < recipes.size(); ++i) {
      const auto& recipe = recipes[i];
      std::size_t clean_index =
          std::size_t(std::find(clean_ids.begin(), clean_ids.end(), recipe.clean_id) -
                      clean_ids.begin());
      auto [noisy, clean_patch] =
          synthesize_pair(clean_frames[clean_index], recipe, ctx.bank, ctx.shading);

      std::snprintf(name, sizeof(name), "pair_%06zu", i);
      write_rawb(noisy, fs::path(out_dir) / (std::string(name) + "_noisy.rawb"));
      write_rawf(clean_patch, fs::path(out_dir) / (std::string(name) + "_clean.rawb"));
      std::ofstream rec(fs::path(out_dir) / (std::string(name) + ".recipe.json"),
                        std::ios::trunc);
      rec << recipe_to_json(recipe);
    }

    ordered_json manifest;
    manifest["command"] = "synthesize";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso},       {"patch", patch},
                           {"policy", policy}, {"qe", qe},
                           {"qe_jitter", qe_jitter}, {"seed", seed},
                           {"shading", shading_path}};
    manifest["inputs"] = input_digests(clean_files);
    auto dark_files = sorted_files(dark_dir, {".rawb", ".raw"});
    for (auto& item : input_digests(dark_files)) manifest["inputs"].push_back(item);
    manifest["pairs"] = recipes.size();
    write_manifest(fs::path(out_dir) / "manifest.json", manifest);
    std::cout << "synthesized " << recipes.size() << " pairs -> " << out_dir << "\n";
    return 0;
  }
};

struct ProfileCmd {
  std::string dark_dir, out, model = "tukey", shading_path;
  int iso = 0;
  int components = 100;
  int fit_frames = 50;
  int crop_size = 512;
  std::size_t max_samples = 1000000;
  std::uint64_t seed = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    DarkContext ctx = make_dark_context(dark_dir, p, iso, shading_path);
    auto frames = corrected_frames(ctx, iso, 0, std::size_t(fit_frames), crop_size);
    DisentangledNoise noise = disentangle(frames);
    std::vector<double> samples = strided_subsample(std::move(noise.iid_samples),
                                                    max_samples);

    ordered_json fit_json;
    fit_json["model"] = model;
    fit_json["iso"] = iso;
    fit_json["fit_frames"] = int(frames.size());
    fit_json["n_samples"] = samples.size();
    if (model == "tukey") {
      TukeyLambdaFit fit = fit_tukey_lambda(samples);
      fit_json["lambda"] = fit.lambda;
      fit_json["mu"] = fit.mu;
      fit_json["sigma"] = fit.sigma;
      fit_json["ppcc"] = fit.ppcc;
      std::cout << "tukey-lambda fit: lambda=" << fit.lambda << " sigma=" << fit.sigma
                << " ppcc=" << fit.ppcc << "\n";
    } else if (model == "gmm") {
      Rng rng(seed);
      GmmFit fit = fit_gmm(samples, components, rng);
      fit_json["n_components"] = fit.n_components;
      fit_json["weights"] = fit.weights;
      fit_json["means"] = fit.means;
      fit_json["variances"] = fit.variances;
      fit_json["final_loglik"] = fit.final_loglik;
      fit_json["converged"] = fit.converged;
      std::cout << "gmm fit: " << fit.n_components << " components, loglik "
                << fit.final_loglik << (fit.converged ? " (converged)" : "") << "\n";
    } else {
      throw ConfigError("--model must be 'tukey' or 'gmm'");
    }

    std::ofstream f(out, std::ios::trunc);
    if (!f) throw IoError("cannot write " + out);
    f << fit_json.dump(2) << "\n";

    ordered_json manifest;
    manifest["command"] = "profile";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso},           {"model", model},
                           {"components", components}, {"fit_frames", fit_frames},
                           {"crop", crop_size},    {"max_samples", max_samples},
                           {"seed", seed}};
    manifest["inputs"] = input_digests(sorted_files(dark_dir, {".rawb", ".raw"}));
    write_manifest(out + ".manifest.json", manifest);
    return 0;
  }
};

struct QqCmd {
  std::string fit_path, dark_dir, out, against = "holdout", shading_path;
  int iso = 0;
  int quantiles = 512;
  int fit_frames = 50;
  int crop_size = 512;
  std::size_t max_samples = 1000000;
  std::uint64_t seed = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    std::ifstream fin(fit_path);
    if (!fin) throw IoError("cannot open " + fit_path);
    nlohmann::json fit_json = nlohmann::json::parse(fin);

    DarkContext ctx = make_dark_context(dark_dir, p, iso, shading_path);
    const std::size_t n_frames = ctx.bank.group(iso).size();
    std::size_t begin = 0, end = std::size_t(fit_frames);
    if (against == "holdout") {
      begin = std::min(std::size_t(fit_frames), n_frames);
      end = n_frames;
      if (begin >= end)
        throw ConfigError("no held-out frames beyond the first " +
                          std::to_string(fit_frames));
    } else if (against != "train") {
      throw ConfigError("--against must be 'train' or 'holdout'");
    }
    auto frames = corrected_frames(ctx, iso, begin, end, crop_size);
    DisentangledNoise noise = disentangle(frames);
    std::vector<double> samples = strided_subsample(std::move(noise.iid_samples),
                                                    max_samples);

    Rng rng(seed);
    std::vector<double> resampled;
    std::string model = fit_json.at("model").get<std::string>();
    if (model == "tukey") {
      TukeyLambdaFit fit;
      fit.lambda = fit_json.at("lambda").get<double>();
      fit.mu = fit_json.at("mu").get<double>();
      fit.sigma = fit_json.at("sigma").get<double>();
      resampled = resample(fit, samples.size(), rng);
    } else if (model == "gmm") {
      GmmFit fit;
      fit.n_components = fit_json.at("n_components").get<int>();
      fit.weights = fit_json.at("weights").get<std::vector<double>>();
      fit.means = fit_json.at("means").get<std::vector<double>>();
      fit.variances = fit_json.at("variances").get<std::vector<double>>();
      resampled = resample(fit, samples.size(), rng);
    } else {
      throw ConfigError("unknown model in fit file: " + model);
    }

    QqReport report = qq_compare(samples, resampled, quantiles);
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw IoError("cannot write " + out);
    f << qq_to_csv(report);
    std::cout << "qq vs " << against << ": max_abs_dev=" << report.max_abs_dev
              << " rmse=" << report.rmse << "\n";

    ordered_json manifest;
    manifest["command"] = "qq";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso},         {"against", against},
                           {"quantiles", quantiles}, {"fit_frames", fit_frames},
                           {"crop", crop_size},  {"max_samples", max_samples},
                           {"seed", seed}};
    manifest["inputs"] = input_digests(sorted_files(dark_dir, {".rawb", ".raw"}));
    manifest["fit"] = {{"path", fit_path}, {"digest", file_digest(fit_path)}};
    manifest["max_abs_dev"] = report.max_abs_dev;
    manifest["rmse"] = report.rmse;
    write_manifest(out + ".manifest.json", manifest);
    return 0;
  }
};

struct HbnrCmd {
  std::string dark_dir, out_dir, family = "auto", shading_path;
  int iso = 0;
  std::uint64_t seed = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    DarkContext ctx = make_dark_context(dark_dir, p, iso, shading_path);
    const auto& group = ctx.bank.group(iso);

    std::vector<LinearFrame> corrected;
    for (std::size_t i = 0; i < group.size(); ++i) {
      Crop full{0, 0, group[i].height, group[i].width};
      corrected.push_back(dark_patch(ctx.bank, iso, ctx.shading, int(i), full, Flips{}));
    }

    HbnrModel model;
    if (family == "auto") {
      model = fit_hbnr(corrected);
    } else {
      std::vector<double> samples;
      for (const auto& f : corrected)
        samples.insert(samples.end(), f.values.begin(), f.values.end());
      HbnrFamily fam;
      if (family == "gaussian") fam = HbnrFamily::Gaussian;
      else if (family == "uniform") fam = HbnrFamily::Uniform;
      else if (family == "tukey") fam = HbnrFamily::TukeyLambda;
      else throw ConfigError("--family must be auto|gaussian|uniform|tukey");
      model = fit_hbnr_family(samples, fam);
    }

    fs::create_directories(out_dir);
    Rng rng(seed);
    auto dark_files = sorted_files(dark_dir, {".rawb", ".raw"});
    std::size_t out_index = 0;
    for (std::size_t i = 0; i < group.size(); ++i) {
      LinearFrame expanded = expand_bit_depth(group[i], ctx.shading, model,
                                              rng.child(i));
      char name[64];
      std::snprintf(name, sizeof(name), "expanded_%06zu.rawf", out_index++);
      write_rawf(expanded, fs::path(out_dir) / name);
    }

    ordered_json manifest;
    manifest["command"] = "hbnr";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso}, {"family", family}, {"seed", seed}};
    manifest["model"] = {{"family", hbnr_family_name(model.family)},
                         {"location", model.location},
                         {"scale", model.scale},
                         {"shape", model.shape},
                         {"selection_score", model.selection_score}};
    manifest["inputs"] = input_digests(dark_files);
    write_manifest(fs::path(out_dir) / "manifest.json", manifest);
    std::cout << "hbnr: family=" << hbnr_family_name(model.family) << ", expanded "
              << group.size() << " frames -> " << out_dir << "\n";
    return 0;
  }
};

struct PtcCmd {
  std::string flat_dir, out, shading_path;
  int iso = 0;
  ProfileOptions profile;

  int execute() {
    SensorProfile p = profile.build();
    std::optional<DarkShading> shading;
    if (!shading_path.empty()) shading = read_dshd(shading_path);

    // pairs discovered by the <level>_{a,b}.rawb convention
    auto files = sorted_files(flat_dir, {".rawb", ".rawf"});
    std::vector<std::pair<LinearFrame, LinearFrame>> pairs;
    for (const auto& f : files) {
      std::string stem = f.stem().string();
      if (stem.size() < 2 || stem.substr(stem.size() - 2) != "_a") continue;
      fs::path partner = f.parent_path() /
                         (stem.substr(0, stem.size() - 2) + "_b" +
                          f.extension().string());
      if (!fs::exists(partner)) continue;
      LinearFrame a = load_linear(f);
      LinearFrame b = load_linear(partner);
      if (shading) {
        for (std::size_t i = 0; i < a.values.size(); ++i) {
          a.values[i] -= shading->mean_map[i];
          b.values[i] -= shading->mean_map[i];
        }
      }
      pairs.emplace_back(std::move(a), std::move(b));
    }
    if (pairs.empty()) throw ConfigError("no <level>_{a,b} pairs under " + flat_dir);

    PtcFit fit = ptc_from_flatfields(pairs);
    KComparison cmp = compare_k(p, iso, fit);

    ordered_json j;
    j["k_hat"] = fit.k_hat;
    j["read_var"] = fit.read_var;
    j["r2"] = fit.r2;
    j["points"] = ordered_json::array();
    for (const auto& [m, v] : fit.points)
      j["points"].push_back({{"mean", m}, {"variance", v}});
    j["implied_qe"] = cmp.implied_qe;
    j["in_band"] = cmp.in_band;
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw IoError("cannot write " + out);
    f << j.dump(2) << "\n";
    std::cout << "ptc: k_hat=" << fit.k_hat << " read_var=" << fit.read_var
              << " implied_qe=" << cmp.implied_qe
              << (cmp.in_band ? " (in band)" : " (out of band)") << "\n";

    ordered_json manifest;
    manifest["command"] = "ptc";
    manifest["version"] = kVersion;
    manifest["sensor"] = profile.to_json();
    manifest["options"] = {{"iso", iso}, {"shading", shading_path}};
    manifest["inputs"] = input_digests(files);
    write_manifest(out + ".manifest.json", manifest);
    return 0;
  }
};

struct PreviewCmd {
  std::string in, out;
  double digital_gain = 1.0;

  int execute() {
    render_preview(load_linear(in), digital_gain, out);
    ordered_json manifest;
    manifest["command"] = "preview";
    manifest["version"] = kVersion;
    manifest["options"] = {{"digital_gain", digital_gain}};
    manifest["inputs"] = input_digests({in});
    write_manifest(out + ".manifest.json", manifest);
    std::cout << "preview -> " << out << "\n";
    return 0;
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Low-light RAW noise synthesis toolkit"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key-value config file; flags override it");
  app.require_subcommand(1);

  CalibrateShadingCmd cal;
  auto* cal_cmd = app.add_subcommand("calibrate-shading",
                                     "average dark frames into a shading map");
  cal_cmd->add_option("--dark-dir", cal.dark_dir, "dark frame directory")->required();
  cal_cmd->add_option("--iso", cal.iso, "gain setting")->required();
  cal_cmd->add_option("--subset", cal.subset,
                      "use a random n-frame subset instead of all frames");
  cal_cmd->add_option("--seed", cal.seed, "subset sampling seed");
  cal_cmd->add_option("--out", cal.out, "output .dshd path")->required();
  cal.profile.attach(cal_cmd);

  SynthesizeCmd syn;
  auto* syn_cmd = app.add_subcommand("synthesize",
                                     "emit noisy/clean training pairs");
  syn_cmd->add_option("--clean-dir", syn.clean_dir, "clean frame directory")->required();
  syn_cmd->add_option("--dark-dir", syn.dark_dir, "dark frame directory")->required();
  syn_cmd->add_option("--iso", syn.iso, "gain setting")->required();
  syn_cmd->add_option("--patch", syn.patch, "patch size HxW");
  syn_cmd->add_option("--policy", syn.policy, "'exhaustive' or 'random:N'");
  syn_cmd->add_option("--qe", syn.qe, "fixed hypothesized QE");
  syn_cmd->add_flag("--qe-jitter", syn.qe_jitter, "draw a fresh QE per pair");
  syn_cmd->add_option("--seed", syn.seed, "master seed")->required();
  syn_cmd->add_option("--shading", syn.shading_path, "precomputed .dshd map");
  syn_cmd->add_option("--out-dir", syn.out_dir, "output directory")->required();
  syn.profile.attach(syn_cmd);

  ProfileCmd prof;
  auto* prof_cmd = app.add_subcommand("profile",
                                      "fit a signal-independent noise model");
  prof_cmd->add_option("--dark-dir", prof.dark_dir, "dark frame directory")->required();
  prof_cmd->add_option("--iso", prof.iso, "gain setting")->required();
  prof_cmd->add_option("--model", prof.model, "'tukey' or 'gmm'");
  prof_cmd->add_option("--components", prof.components, "GMM component count");
  prof_cmd->add_option("--fit-frames", prof.fit_frames, "frames in the fit set");
  prof_cmd->add_option("--crop", prof.crop_size, "center-crop size for fitting");
  prof_cmd->add_option("--max-samples", prof.max_samples,
                       "cap on pooled samples (0 = all)");
  prof_cmd->add_option("--seed", prof.seed, "fit seed")->required();
  prof_cmd->add_option("--shading", prof.shading_path, "precomputed .dshd map");
  prof_cmd->add_option("--out", prof.out, "output fit.json path")->required();
  prof.profile.attach(prof_cmd);

  QqCmd qq;
  auto* qq_cmd = app.add_subcommand("qq", "quantile-quantile model diagnostics");
  qq_cmd->add_option("--fit", qq.fit_path, "fit.json from 'profile'")->required();
  qq_cmd->add_option("--dark-dir", qq.dark_dir, "dark frame directory")->required();
  qq_cmd->add_option("--iso", qq.iso, "gain setting")->required();
  qq_cmd->add_option("--against", qq.against, "'train' or 'holdout'");
  qq_cmd->add_option("--quantiles", qq.quantiles, "number of quantiles");
  qq_cmd->add_option("--fit-frames", qq.fit_frames, "train/holdout split point");
  qq_cmd->add_option("--crop", qq.crop_size, "center-crop size");
  qq_cmd->add_option("--max-samples", qq.max_samples, "cap on pooled samples");
  qq_cmd->add_option("--seed", qq.seed, "resampling seed");
  qq_cmd->add_option("--shading", qq.shading_path, "precomputed .dshd map");
  qq_cmd->add_option("--out", qq.out, "output qq.csv path")->required();
  qq.profile.attach(qq_cmd);

  HbnrCmd hbnr;
  auto* hbnr_cmd = app.add_subcommand("hbnr",
                                      "expand dark frames to high bit depth");
  hbnr_cmd->add_option("--dark-dir", hbnr.dark_dir, "dark frame directory")->required();
  hbnr_cmd->add_option("--iso", hbnr.iso, "gain setting")->required();
  hbnr_cmd->add_option("--family", hbnr.family, "auto|gaussian|uniform|tukey");
  hbnr_cmd->add_option("--seed", hbnr.seed, "expansion seed")->required();
  hbnr_cmd->add_option("--shading", hbnr.shading_path, "precomputed .dshd map");
  hbnr_cmd->add_option("--out-dir", hbnr.out_dir, "output directory")->required();
  hbnr.profile.attach(hbnr_cmd);

  PtcCmd ptc;
  auto* ptc_cmd = app.add_subcommand("ptc", "flat-field photon transfer curve");
  ptc_cmd->add_option("--flat-dir", ptc.flat_dir, "flat-field directory")->required();
  ptc_cmd->add_option("--iso", ptc.iso, "gain setting")->required();
  ptc_cmd->add_option("--shading", ptc.shading_path, "precomputed .dshd map");
  ptc_cmd->add_option("--out", ptc.out, "output ptc.json path")->required();
  ptc.profile.attach(ptc_cmd);

  PreviewCmd preview;
  auto* preview_cmd = app.add_subcommand("preview", "render a quick sRGB PNG");
  preview_cmd->add_option("--in", preview.in, "input RAWB/RAWF frame")->required();
  preview_cmd->add_option("--digital-gain", preview.digital_gain,
                          "brightness multiplier")->required()
      ->check(CLI::PositiveNumber);
  preview_cmd->add_option("--out", preview.out, "output PNG path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (cal_cmd->parsed()) return cal.execute();
    if (syn_cmd->parsed()) return syn.execute();
    if (prof_cmd->parsed()) return prof.execute();
    if (qq_cmd->parsed()) return qq.execute();
    if (hbnr_cmd->parsed()) return hbnr.execute();
    if (ptc_cmd->parsed()) return ptc.execute();
    if (preview_cmd->parsed()) return preview.execute();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace rawsynth::cli
