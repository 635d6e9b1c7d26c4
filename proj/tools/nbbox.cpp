// nbbox: bounding-box noise augmentation, evaluation and analysis for
// DOTA-style oriented annotations.

#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "nbbox/cli.hpp"
#include "nbbox/error.hpp"
#include "nbbox/noise_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Noise injection into oriented bounding boxes"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "Random seed (falls back to $NBBOX_SEED, then 0)");
  };

  nbbox::cli::AugmentOptions augment;
  std::string config_path;
  std::vector<double> clip;
  auto* augment_cmd = app.add_subcommand("augment", "Perturb every annotation file in a directory");
  augment_cmd->add_option("--ann-dir", augment.ann_dir, "Ground-truth directory")->required();
  augment_cmd->add_option("--out-dir", augment.out_dir, "Output directory")->required();
  augment_cmd->add_option("--config", config_path, "Noise config file (default: recommended setting)");
  augment_cmd->add_option("--epoch-tag", augment.epoch_tag, "Folded into every file's random stream");
  augment_cmd->add_option("--clip", clip, "Clamp perturbed box centers into [0,W]x[0,H]")
      ->expected(2)
      ->type_name("W H");
  augment.jobs = std::max(1U, std::thread::hardware_concurrency());
  augment_cmd->add_option("--jobs", augment.jobs, "Worker threads")->capture_default_str();
  add_seed(augment_cmd);

  nbbox::cli::EvalOptions eval;
  std::string mode = "11pt";
  auto* eval_cmd = app.add_subcommand("eval", "Per-class AP and mAP of detections against ground truth");
  eval_cmd->add_option("--ann-dir", eval.ann_dir, "Ground-truth directory")->required();
  eval_cmd->add_option("--det-dir", eval.det_dir, "Detection directory (one file per category)")->required();
  eval_cmd->add_option("--iou", eval.iou_threshold, "IoU threshold")->capture_default_str();
  eval_cmd->add_option("--mode", mode, "AP interpolation: 11pt or all")
      ->check(CLI::IsMember({"11pt", "all"}))
      ->capture_default_str();
  eval_cmd->add_flag("--json", eval.json, "Print the report as JSON");

  nbbox::cli::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare annotated quads with their minimum-area rectangles");
  analyze_cmd->add_option("--ann-dir", analyze.ann_dir, "Ground-truth directory")->required();
  analyze_cmd->add_option("--out", analyze.out, "Report path (JSON); stdout when omitted");

  nbbox::cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Self-IoU degradation over a grid of noise configs");
  sweep_cmd->add_option("--ann-dir", sweep.ann_dir, "Ground-truth directory")->required();
  sweep_cmd->add_option("--grid", sweep.grid, "Grid file with one [section] per config")->required();
  sweep_cmd->add_option("--trials", sweep.trials, "Seeded repetitions per config")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path; stdout when omitted");
  add_seed(sweep_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (augment_cmd->parsed()) {
      augment.seed = nbbox::cli::resolve_seed(seed_flag);
      if (!config_path.empty()) augment.config = nbbox::load_noise_config(config_path);
      if (!clip.empty()) augment.clip = nbbox::cli::ClipBounds{clip[0], clip[1]};
      return nbbox::cli::run_augment(augment, std::cout, std::cerr);
    }
    if (eval_cmd->parsed()) {
      eval.mode = nbbox::parse_ap_mode(mode);
      return nbbox::cli::run_eval(eval, std::cout, std::cerr);
    }
    if (analyze_cmd->parsed()) return nbbox::cli::run_analyze(analyze, std::cout, std::cerr);
    if (sweep_cmd->parsed()) {
      sweep.seed = nbbox::cli::resolve_seed(seed_flag);
      return nbbox::cli::run_sweep(sweep, std::cout, std::cerr);
    }
  } catch (const nbbox::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
