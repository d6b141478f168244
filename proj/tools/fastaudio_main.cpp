// fastaudio_main.cpp

// Copyright 2026  fastaudio authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastaudio/cli.hpp"

using fastaudio::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"fastaudio: learnable filterbank front-end for spoof speech detection"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  bool print_config = false;
  app.add_option("--config", config_path, "config file, one key=value per line, # comments");
  app.add_option("--set", overrides, "override one config entry, key=value (repeatable)");
  app.add_flag("--print-config", print_config, "print the effective config and exit");
  uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "random seed (shorthand for --set seed=...)");
  double beta = 0.0;
  auto* beta_opt = app.add_option("--beta", beta, "min t-DCF miss weight");
  std::string variant;
  auto* variant_opt =
      app.add_option("--variant", variant, "fixed | fastaudio-tri | fastaudio-gauss | fastaudio-sort");

  std::string out_path, checkpoint, data_dir, wav_path, scores_file, protocol_file;

  auto* synth = app.add_subcommand("synth", "write a synthetic train/eval corpus");
  synth->add_option("--out", out_path, "output directory")->required();

  auto* extract = app.add_subcommand("extract", "dump features for one wav file");
  extract->add_option("wav", wav_path, "input wav")->required();
  extract->add_option("--checkpoint", checkpoint, "take the front-end from this checkpoint");
  extract->add_option("--out", out_path, "feature dump path")->required();

  auto* train = app.add_subcommand("train", "train the selected variant on a corpus");
  train->add_option("data_dir", data_dir, "corpus directory")->required();
  train->add_option("--out", out_path, "checkpoint path")->required();

  auto* score = app.add_subcommand("score", "score the eval protocol with a checkpoint");
  score->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  score->add_option("data_dir", data_dir, "corpus directory")->required();
  score->add_option("--out", out_path, "scores path")->required();

  auto* eval = app.add_subcommand("eval", "EER and min t-DCF for a score file");
  eval->add_option("scores", scores_file, "score file")->required();
  eval->add_option("protocol", protocol_file, "protocol with the labels")->required();

  auto* export_filters = app.add_subcommand("export-filters", "filter response table as CSV");
  export_filters->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  export_filters->add_option("--out", out_path, "csv path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunConfig rc;
  try {
    if (!config_path.empty()) fastaudio::cli::load_config_file(rc, config_path);
    for (const std::string& kv : overrides) fastaudio::cli::apply_setting_line(rc, kv);
    if (seed_opt->count()) rc.seed = seed;
    if (beta_opt->count()) rc.beta = beta;
    if (variant_opt->count()) fastaudio::cli::apply_setting(rc, "variant", variant);
  } catch (const fastaudio::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (print_config) {
    std::cout << fastaudio::cli::print_config(rc);
    return 0;
  }

  if (synth->parsed()) return fastaudio::cli::cmd_synth(rc, out_path, std::cout);
  if (extract->parsed()) {
    return fastaudio::cli::cmd_extract(rc, wav_path, checkpoint, out_path, std::cout);
  }
  if (train->parsed()) return fastaudio::cli::cmd_train(rc, data_dir, out_path, std::cout);
  if (score->parsed()) {
    return fastaudio::cli::cmd_score(rc, checkpoint, data_dir, out_path, std::cout);
  }
  if (eval->parsed()) return fastaudio::cli::cmd_eval(rc, scores_file, protocol_file, std::cout);
  if (export_filters->parsed()) {
    return fastaudio::cli::cmd_export_filters(rc, checkpoint, out_path, std::cout);
  }

  std::cout << app.help();
  return 1;
}
