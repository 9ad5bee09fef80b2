// cwknn: command-line front end for the CW-SSIM k-NN digit classifier.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwknn/error.hpp"
#include "cwknn/harness/experiment.hpp"
#include "cwknn/harness/run_config.hpp"
#include "cwknn/harness/separability.hpp"
#include "cwknn/idx.hpp"
#include "cwknn/io.hpp"
#include "cwknn/pgm.hpp"
#include "cwknn/pyramid_io.hpp"
#include "cwknn/simgen.hpp"
#include "cwknn/similarity.hpp"

#ifndef CWKNN_TEMPLATE_DIR
#define CWKNN_TEMPLATE_DIR "data/templates"
#endif

using namespace cwknn;
using harness::RunConfig;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kConfig = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::WrongMagic:
    case ErrorCode::Truncated:
    case ErrorCode::ZeroDim:
    case ErrorCode::BadLabel:
    case ErrorCode::MalformedHeader:
    case ErrorCode::Io:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::TemplateCountMismatch:
      return kData;
    case ErrorCode::ConfigTooDeep:
    case ErrorCode::ConfigMismatch:
    case ErrorCode::CacheConfigMismatch:
    case ErrorCode::WindowTooLarge:
      return kConfig;
    default:
      return kUsage;
  }
}

void add_pyramid_flags(CLI::App* app, CwSsimConfig& c) {
  app->add_option("--scales", c.pyramid.scales, "Pyramid scales")->capture_default_str();
  app->add_option("--orients", c.pyramid.orientations, "Orientations per scale")->capture_default_str();
  app->add_flag("--decimated", c.pyramid.decimated, "Subsample coarser subbands");
  app->add_option("--window", c.window, "CW-SSIM window side (odd)")->capture_default_str();
  app->add_option("--stride", c.stride, "Window stride")->capture_default_str();
  app->add_option("--kstab", c.k, "Stabilising constant K")->capture_default_str();
}

void add_dataset_flags(CLI::App* app, RunConfig& c, bool test_required) {
  app->add_option("--train-images", c.train_images, "Training images (IDX, optionally gzipped)")->required();
  app->add_option("--train-labels", c.train_labels, "Training labels (IDX)")->required();
  auto* ti = app->add_option("--test-images", c.test_images, "Test images (IDX)");
  auto* tl = app->add_option("--test-labels", c.test_labels, "Test labels (IDX)");
  if (test_required) {
    ti->required();
    tl->required();
  }
  app->add_option("--train-subset", c.train_subset, "Training images drawn by seed (0 = all)");
  app->add_option("--seed", c.seed, "Subset seed")->capture_default_str();
  app->add_option("--cache", c.cache_dir, "Pyramid cache directory");
  app->add_option("--workers", c.workers, "Scoring threads")->capture_default_str();
  add_pyramid_flags(app, c.cwssim);
}

/// Splices the arguments of `--config FILE` in right after the subcommand so
/// that anything given on the command line wins.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      continue;
    }
    const auto extra = harness::config_file_arguments(file);
    const std::size_t at = args.empty() || args[0].rfind("-", 0) == 0 ? 0 : 1;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    break;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  return args;
}

void print_summary(const harness::RunReport& report) {
  std::printf("%-11s %8s %7s %7s %8s\n", "scheme", "param", "errors", "total", "error%");
  for (const auto& s : report.summary) {
    std::printf("%-11s %8s %7zu %7zu %8.3f\n", s.scheme.c_str(), format_parameter(s.parameter).c_str(), s.errors,
                s.total, 100.0 * s.error_rate());
  }
  std::printf("pairs scored %zu, %.0f pairs/s, wall %.1f s (cache hits %zu, misses %zu)\n", report.pairs_scored,
              report.pairs_per_second(), report.wall_seconds, report.cache.hits, report.cache.misses);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CW-SSIM k-nearest-neighbour digit classifier"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_file;

  // eval
  RunConfig eval_cfg;
  auto* eval = app.add_subcommand("eval", "Classify a test set and tabulate error rates");
  add_dataset_flags(eval, eval_cfg, false);
  eval->add_option("--config", config_file, "Flat key = value file of flags");
  eval->add_option("--test-subset", eval_cfg.test_subset, "Test images drawn by seed (held out per trial)");
  eval->add_option("--trials", eval_cfg.trials, "Repeated random splits of the training pool")->capture_default_str();
  eval->add_option("--k-max", eval_cfg.k_max, "Largest k for the k-NN schemes")->capture_default_str();
  eval->add_option("--schemes", eval_cfg.schemes, "unweighted,weighted,exp:SIGMA[:SIGMA...],gauss:SIGMA[...]")
      ->capture_default_str();
  eval->add_option("--truncate-at", eval_cfg.truncate_at, "Rank cut-off for decayed schemes");
  eval->add_option("--out-csv", eval_cfg.out_csv, "Error table CSV")->required();
  eval->add_option("--out-svg", eval_cfg.out_svg, "Error curve SVG");
  eval->add_option("--pred-log", eval_cfg.pred_log, "Per-prediction CSV");
  eval->add_option("--out-report", eval_cfg.out_report, "JSON run report");

  // similarity
  std::string image_a, image_b, metric = "cwssim";
  CwSsimConfig sim_cfg;
  auto* sim = app.add_subcommand("similarity", "Score two PGM images");
  sim->add_option("--config", config_file, "Flat key = value file of flags");
  sim->add_option("a", image_a, "First PGM")->required();
  sim->add_option("b", image_b, "Second PGM")->required();
  sim->add_option("--metric", metric, "cwssim or ssim")->check(CLI::IsMember({"cwssim", "ssim"}))->capture_default_str();
  add_pyramid_flags(sim, sim_cfg);

  // simgen
  TransformParams gen;
  std::string templates = CWKNN_TEMPLATE_DIR, gen_images, gen_labels;
  std::size_t gen_count = 0;
  auto* simgen = app.add_subcommand("simgen", "Generate distorted template digits");
  simgen->add_option("--config", config_file, "Flat key = value file of flags");
  simgen->add_option("--templates", templates, "Directory holding 0.pgm ... 9.pgm")->capture_default_str();
  simgen->add_option("--count", gen_count, "Images to generate")->required();
  simgen->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  simgen->add_option("--out-images", gen_images, "Output IDX images")->required();
  simgen->add_option("--out-labels", gen_labels, "Output IDX labels")->required();
  simgen->add_option("--shift", gen.shift, "Max shift in pixels")->capture_default_str();
  simgen->add_option("--scale-min", gen.scale_min)->capture_default_str();
  simgen->add_option("--scale-max", gen.scale_max)->capture_default_str();
  simgen->add_option("--rotation", gen.rotation_deg, "Max rotation in degrees")->capture_default_str();
  simgen->add_option("--blur-min", gen.blur_min)->capture_default_str();
  simgen->add_option("--blur-max", gen.blur_max)->capture_default_str();

  // separability
  RunConfig sep_cfg;
  std::size_t samples_per_digit = 1;
  std::optional<std::string> sep_csv, raw_log;
  auto* sep = app.add_subcommand("separability", "Per-digit CW-SSIM score distributions");
  add_dataset_flags(sep, sep_cfg, true);
  sep->add_option("--config", config_file, "Flat key = value file of flags");
  sep->add_option("--samples-per-digit", samples_per_digit, "Test images per digit")->capture_default_str();
  sep->add_option("--out-csv", sep_csv, "Quartile CSV (stdout when omitted)");
  sep->add_option("--raw-log", raw_log, "Every raw score as CSV");

  // decompose
  std::string decompose_in, decompose_out;
  PyramidConfig dec_cfg;
  auto* dec = app.add_subcommand("decompose", "Write the pyramid of one PGM as CWPYR1");
  dec->add_option("--config", config_file, "Flat key = value file of flags");
  dec->add_option("image", decompose_in, "Input PGM")->required();
  dec->add_option("--out", decompose_out, "Output .cwpyr")->required();
  dec->add_option("--scales", dec_cfg.scales)->capture_default_str();
  dec->add_option("--orients", dec_cfg.orientations)->capture_default_str();
  dec->add_flag("--decimated", dec_cfg.decimated);

  try {
    auto args = expand_config(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    std::cerr << "cwknn: " << e.what() << '\n';
    return exit_code(e.code());
  }

  try {
    if (*eval) {
      print_summary(harness::run_eval(eval_cfg));
    } else if (*sim) {
      const GrayImage a = load_pgm(image_a), b = load_pgm(image_b);
      double score = 0.0;
      if (metric == "ssim") {
        score = mean_ssim(a, b, sim_cfg.window, sim_cfg.stride);
      } else {
        sim_cfg.validate();
        score = cwssim_images(a, b, sim_cfg);
      }
      std::printf("%.6f\n", score);
    } else if (*simgen) {
      const auto set = generate(load_templates(templates), gen_count, gen);
      save_labeled_set(set, gen_images, gen_labels);
    } else if (*sep) {
      const auto report = harness::run_separability(sep_cfg, samples_per_digit);
      if (sep_csv) {
        std::ofstream out(*sep_csv, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + *sep_csv);
        harness::write_separability_csv(out, report);
      } else {
        harness::write_separability_csv(std::cout, report);
      }
      if (raw_log) {
        std::ofstream out(*raw_log, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + *raw_log);
        harness::write_raw_scores_csv(out, report);
      }
      std::fprintf(sep_csv ? stdout : stderr, "separated %zu of %zu sampled test images\n", report.separated,
                   report.sampled);
    } else if (*dec) {
      write_file(decompose_out, serialize_pyramid(quantize_to_float(decompose(load_pgm(decompose_in), dec_cfg))));
    }
  } catch (const Error& e) {
    std::cerr << "cwknn: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "cwknn: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
