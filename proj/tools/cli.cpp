// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conformer_forge/geom.hpp"
#include "conformer_forge/hashing.hpp"
#include "conformer_forge/latent/analysis.hpp"
#include "conformer_forge/latent/cca.hpp"
#include "conformer_forge/latent/embedding.hpp"
#include "conformer_forge/latent/interpolate.hpp"
#include "conformer_forge/model/checkpoint.hpp"
#include "conformer_forge/train/evaluate.hpp"
#include "conformer_forge/train/trainer.hpp"
#include "conformer_forge/train/transfer.hpp"
#include "conformer_forge/trajdata.hpp"
#include "json.hpp"

namespace conformer_forge::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Raised for bad flag combinations or unusable paths; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataOptions {
  std::string path;
  std::uint64_t split_seed = 0;
};

struct ModelOptions {
  double cutoff = 8.0;
  std::size_t min_sep = 4;
  double radius0 = 2.5;
  std::size_t levels = 5;
  std::size_t heads = 4;
  std::size_t intrinsic_dim = 16;
  std::size_t extrinsic_dim = 32;
  bool extrinsic_only = false;

  model::ModelConfig config() const {
    model::ModelConfig c;
    c.contact_cutoff = cutoff;
    c.min_separation = min_sep;
    c.radius0 = radius0;
    c.heads = heads;
    c.intrinsic_dim = intrinsic_dim;
    c.extrinsic_dim = extrinsic_dim;
    c.use_intrinsic = !extrinsic_only;
    if (levels != c.levels) {
      // Keep the default width pattern and trim or extend it to the level count.
      std::vector<std::size_t> enc{12};
      std::vector<std::size_t> dec{128};
      for (std::size_t l = 1; l < levels; ++l) enc.push_back(std::min<std::size_t>(12u << l, 96));
      for (std::size_t l = 1; l < levels; ++l) dec.push_back(std::max<std::size_t>(128 >> (l - 1), 8));
      dec.push_back(3);
      c.levels = levels;
      c.encoder_widths = enc;
      c.decoder_widths = dec;
    }
    return c;
  }
};

struct Options {
  std::string out = ".";
  DataOptions data;
  ModelOptions model;
  train::TrainConfig train;
  trajdata::SyntheticConfig synth;
  std::string ckpt;
  std::string split = "test";
  std::vector<std::string> properties;
  long frame_a = -1;
  long frame_b = -1;
  std::size_t steps = 11;
  std::size_t transfer_epochs = 10;
  std::string filters = "all";
  bool baseline = false;
  bool quiet = false;
};

json model_json(const model::ModelConfig& c) {
  return {{"encoder_widths", c.encoder_widths}, {"decoder_widths", c.decoder_widths},
          {"intrinsic_dim", c.intrinsic_dim},   {"extrinsic_dim", c.extrinsic_dim},
          {"heads", c.heads},                   {"contact_cutoff", c.contact_cutoff},
          {"min_separation", c.min_separation}, {"radius0", c.radius0},
          {"levels", c.levels},                 {"use_intrinsic", c.use_intrinsic},
          {"leaky_slope", c.leaky_slope},       {"chain_links", c.chain_links}};
}

json train_json(const train::TrainConfig& t) {
  return {{"lr", t.lr},
          {"lr_decay", t.lr_decay},
          {"weight_decay", t.weight_decay},
          {"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"bond_weight", t.bond_weight},
          {"huber_delta", t.huber_delta},
          {"seed", t.seed}};
}

json report_json(const train::EvalReport& r, const std::string& split) {
  return {{"split", split},
          {"frames", r.frames},
          {"loss", r.loss},
          {"avg_l2", r.avg_l2},
          {"contact_recovery", r.contact_recovery},
          {"rmsd", r.rmsd}};
}

// JSON has no NaN; absent values are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

fs::path prepare_out(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw UsageError("cannot create output directory '" + out + "'");
  return fs::path(out);
}

void require_dir(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what + " path");
  if (!fs::is_directory(path)) {
    throw UsageError(std::string(what) + " directory '" + path + "' does not exist");
  }
}

json dataset_inputs(const std::string& path) {
  return {{"path", path},
          {"meta_hash", hash_file(fs::path(path) / "meta.json")},
          {"coords_hash", hash_file(fs::path(path) / "coords.f32")}};
}

json checkpoint_inputs(const std::string& path) {
  return {{"path", path},
          {"manifest_hash", hash_file(fs::path(path) / model::kManifestFile)},
          {"params_hash", hash_file(fs::path(path) / model::kPayloadFile)}};
}

void write_manifest(const fs::path& out, const std::string& command, json config,
                    std::uint64_t seed, json inputs) {
  write_json(out / "run-manifest.json", {{"tool", "conformer-forge"},
                                         {"version", kVersion},
                                         {"command", command},
                                         {"seed", seed},
                                         {"config", std::move(config)},
                                         {"inputs", std::move(inputs)}});
}

trajdata::TrajectoryDataset load_split(const DataOptions& d) {
  trajdata::TrajectoryDataset ds = trajdata::load_dataset(d.path);
  ds.splits = trajdata::split_dataset(ds.frames.size(), {0.7, 0.1, 0.2}, d.split_seed);
  return ds;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_embeddings(const fs::path& path, const latent::Embeddings& e) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "frame_index,label";
  for (Eigen::Index c = 0; c < e.intrinsic.cols(); ++c) out << ",z_i" << c;
  for (Eigen::Index c = 0; c < e.extrinsic.cols(); ++c) out << ",z_e" << c;
  out << '\n';
  for (Eigen::Index r = 0; r < e.extrinsic.rows(); ++r) {
    out << e.frame_index[static_cast<std::size_t>(r)] << ',' << e.labels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < e.intrinsic.cols(); ++c) out << ',' << fmt(e.intrinsic(r, c));
    for (Eigen::Index c = 0; c < e.extrinsic.cols(); ++c) out << ',' << fmt(e.extrinsic(r, c));
    out << '\n';
  }
}

int cmd_synth(const Options& o, std::ostream& out) {
  o.synth.validate();
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = trajdata::generate_synthetic(o.synth);
  trajdata::write_dataset(ds, dir);
  write_manifest(dir, "synth",
                 {{"atoms", o.synth.atom_count},
                  {"classes", o.synth.class_count},
                  {"frames_per_class", o.synth.frames_per_class},
                  {"spacing", o.synth.spacing},
                  {"amplitude", o.synth.mode_amplitude},
                  {"noise", o.synth.noise_sigma}},
                 o.synth.seed, json::object());
  out << "wrote " << ds.frames.size() << " frames of " << ds.meta.atom_count << " atoms to "
      << dir.string() << '\n';
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  o.train.validate();
  const model::ModelConfig mc = o.model.config();
  mc.validate();
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);

  model::ProGAE m = train::init_model_for(ds, mc, o.train.seed);
  auto progress = [&](const train::EpochRecord& r) {
    if (!o.quiet) {
      out << "epoch " << r.epoch << " lr " << r.lr << " train_loss " << r.train_loss
          << " val_loss " << r.val_loss << '\n';
    }
  };
  const train::TrainHistory history = train::train_model(m, ds, o.train, progress);
  history.write_csv(dir / "metrics.csv");
  model::save_checkpoint(m, dir / "ckpt");
  const train::EvalReport test = train::evaluate(m, ds, trajdata::Split::kTest, o.train.loss());
  write_json(dir / "report.json", report_json(test, "test"));
  write_manifest(dir, "train",
                 {{"model", model_json(mc)}, {"train", train_json(o.train)},
                  {"split_seed", o.data.split_seed}},
                 o.train.seed, {{"dataset", dataset_inputs(o.data.path)}});
  out << "test loss " << test.loss << " avg_l2 " << test.avg_l2 << " rmsd " << test.rmsd
      << " contact_recovery " << test.contact_recovery << '\n';
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  require_dir(o.ckpt, "checkpoint");
  const trajdata::Split split = trajdata::parse_split(o.split);
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);
  model::ProGAE m = model::load_checkpoint(o.ckpt);
  const train::EvalReport r = train::evaluate(m, ds, split, o.train.loss());
  const json report = report_json(r, o.split);
  write_json(dir / "report.json", report);
  write_manifest(dir, "eval",
                 {{"split", o.split}, {"split_seed", o.data.split_seed},
                  {"bond_weight", o.train.bond_weight}, {"huber_delta", o.train.huber_delta}},
                 o.data.split_seed,
                 {{"dataset", dataset_inputs(o.data.path)}, {"checkpoint", checkpoint_inputs(o.ckpt)}});
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_cca(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  require_dir(o.ckpt, "checkpoint");
  const trajdata::Split split = trajdata::parse_split(o.split);
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);
  model::ProGAE m = model::load_checkpoint(o.ckpt);
  if (!m.config().use_intrinsic) throw UsageError("cca needs a model with the intrinsic branch");
  const latent::Embeddings e = latent::embed_frames(m, ds, ds.indices(split));
  const latent::CCAResult r = latent::run_cca(e.intrinsic, e.extrinsic);
  write_embeddings(dir / "embeddings.csv", e);
  std::vector<double> corr(r.correlations.data(), r.correlations.data() + r.correlations.size());
  const json report = {{"split", o.split}, {"frames", e.labels.size()},
                       {"leading_correlation", r.leading()}, {"correlations", corr}};
  write_json(dir / "report.json", report);
  write_manifest(dir, "cca", {{"split", o.split}, {"split_seed", o.data.split_seed}},
                 o.data.split_seed,
                 {{"dataset", dataset_inputs(o.data.path)}, {"checkpoint", checkpoint_inputs(o.ckpt)}});
  out << "leading canonical correlation " << r.leading() << '\n';
  return 0;
}

int cmd_probe(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  require_dir(o.ckpt, "checkpoint");
  const trajdata::Split split = trajdata::parse_split(o.split);
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);
  model::ProGAE m = model::load_checkpoint(o.ckpt);
  const latent::ProbeSuite s = latent::run_probe_suite(m, ds, split, o.data.split_seed, o.properties);
  write_embeddings(dir / "embeddings.csv", latent::embed_frames(m, ds, ds.indices(split)));

  json regressions = json::object();
  for (const latent::ProbeResult& r : s.regressions) {
    regressions[r.task] = {{"latent_error", r.value}, {"pca_error", r.baseline}};
  }
  const json report = {{"split", o.split},
                       {"frames", s.test_frames},
                       {"one_shot_accuracy",
                        {{"extrinsic", s.extrinsic_accuracy},
                         {"intrinsic", number_or_null(s.intrinsic_accuracy)}}},
                       {"regression", regressions}};
  write_json(dir / "report.json", report);
  write_manifest(dir, "probe",
                 {{"split", o.split}, {"split_seed", o.data.split_seed}, {"properties", o.properties}},
                 o.data.split_seed,
                 {{"dataset", dataset_inputs(o.data.path)}, {"checkpoint", checkpoint_inputs(o.ckpt)}});
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_interp(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  require_dir(o.ckpt, "checkpoint");
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  const trajdata::Split split = trajdata::parse_split(o.split);
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);
  model::ProGAE m = model::load_checkpoint(o.ckpt);

  std::size_t a = 0;
  std::size_t b = 0;
  if (o.frame_a >= 0 && o.frame_b >= 0) {
    a = static_cast<std::size_t>(o.frame_a);
    b = static_cast<std::size_t>(o.frame_b);
    if (a >= ds.frames.size() || b >= ds.frames.size()) throw UsageError("frame index out of range");
  } else {
    // First frame of the split, then the first one from a different class.
    const auto& idx = ds.indices(split);
    if (idx.empty()) throw UsageError("split '" + o.split + "' is empty");
    a = idx.front();
    b = a;
    for (std::size_t i : idx) {
      if (ds.frames[i].label_id != ds.frames[a].label_id) {
        b = i;
        break;
      }
    }
    if (b == a) throw UsageError("split '" + o.split + "' has a single class; pass --frame-a/--frame-b");
  }

  const auto path = latent::interpolate_latent(m, ds.frames[a].coords, ds.frames[b].coords, o.steps);
  std::ofstream csv(dir / "interp_rmsd.csv", std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write interp_rmsd.csv");
  csv << "alpha,rmsd_to_a,rmsd_to_b\n";
  for (const auto& p : path) csv << fmt(p.alpha) << ',' << fmt(p.rmsd_to_a) << ',' << fmt(p.rmsd_to_b) << '\n';
  csv.close();

  const json report = {{"frame_a", a},
                       {"frame_b", b},
                       {"label_a", ds.frames[a].label_id},
                       {"label_b", ds.frames[b].label_id},
                       {"steps", o.steps},
                       {"rmsd_a_at_0", path.front().rmsd_to_a},
                       {"rmsd_a_at_1", path.back().rmsd_to_a},
                       {"rmsd_b_at_0", path.front().rmsd_to_b},
                       {"rmsd_b_at_1", path.back().rmsd_to_b}};
  write_json(dir / "report.json", report);
  write_manifest(dir, "interp",
                 {{"frame_a", a}, {"frame_b", b}, {"steps", o.steps}, {"split_seed", o.data.split_seed}},
                 o.data.split_seed,
                 {{"dataset", dataset_inputs(o.data.path)}, {"checkpoint", checkpoint_inputs(o.ckpt)}});
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_transfer(const Options& o, std::ostream& out) {
  require_dir(o.data.path, "dataset");
  require_dir(o.ckpt, "checkpoint");
  train::TransferConfig tc;
  tc.train = o.train;
  tc.train.epochs = o.transfer_epochs;
  tc.train.validate();
  tc.subset = train::parse_filter_subset(o.filters);
  tc.baseline = o.baseline;
  const fs::path dir = prepare_out(o.out);
  const trajdata::TrajectoryDataset ds = load_split(o.data);
  const model::ProGAE source = model::load_checkpoint(o.ckpt);

  train::TransferResult r = train::transfer_fit(source, ds, tc);
  r.history.write_csv(dir / "metrics.csv");
  model::save_checkpoint(r.model, dir / "ckpt");
  json report = report_json(r.report, "test");
  report["baseline"] = o.baseline;
  report["filters"] = o.filters;
  report["frozen_unchanged"] = r.frozen_before == r.frozen_after;
  write_json(dir / "report.json", report);
  write_manifest(dir, "transfer",
                 {{"train", train_json(tc.train)}, {"filters", o.filters}, {"baseline", o.baseline},
                  {"split_seed", o.data.split_seed}},
                 o.train.seed,
                 {{"dataset", dataset_inputs(o.data.path)}, {"checkpoint", checkpoint_inputs(o.ckpt)}});
  out << report.dump(2) << '\n';
  return 0;
}

void add_data(CLI::App* app, Options& o, bool required = true) {
  auto* opt = app->add_option("--data", o.data.path, "Dataset directory (meta.json + coords.f32)");
  if (required) opt->required();
  app->add_option("--split-seed", o.data.split_seed, "Seed of the 70/10/20 frame split")
      ->capture_default_str();
}

void add_loss(CLI::App* app, Options& o) {
  app->add_option("--huber-delta", o.train.huber_delta, "Smooth-L1 transition point")
      ->capture_default_str();
  app->add_option("--bond-weight", o.train.bond_weight, "Weight of the bond-length penalty")
      ->capture_default_str();
}

void add_optimizer(CLI::App* app, Options& o, std::size_t& epochs) {
  app->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
  app->add_option("--batch-size", o.train.batch_size, "Frames per mini-batch")->capture_default_str();
  app->add_option("--lr", o.train.lr, "Initial Adam learning rate")->capture_default_str();
  app->add_option("--lr-decay", o.train.lr_decay, "Per-epoch learning-rate factor")
      ->capture_default_str();
  app->add_option("--weight-decay", o.train.weight_decay, "Decoupled weight decay")
      ->capture_default_str();
  app->add_option("--seed", o.train.seed, "Initialization and shuffling seed")->capture_default_str();
  add_loss(app, o);
}

void add_ckpt(CLI::App* app, Options& o) {
  app->add_option("--ckpt", o.ckpt, "Checkpoint directory")->required();
}

void add_out(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "Output directory")->capture_default_str();
}

void add_split(CLI::App* app, Options& o) {
  app->add_option("--split", o.split, "Split to analyse (train, val or test)")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "val", "test"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Intrinsic/extrinsic graph autoencoder for chain conformational ensembles",
               "conformer-forge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled ensemble");
  synth->add_option("--atoms", o.synth.atom_count, "Atoms per chain")->capture_default_str();
  synth->add_option("--classes", o.synth.class_count, "Number of classes")->capture_default_str();
  synth->add_option("--frames-per-class", o.synth.frames_per_class, "Frames per class")
      ->capture_default_str();
  synth->add_option("--spacing", o.synth.spacing, "Consecutive-atom distance (Angstrom)")
      ->capture_default_str();
  synth->add_option("--amplitude", o.synth.mode_amplitude, "Class mode amplitude (Angstrom)")
      ->capture_default_str();
  synth->add_option("--noise", o.synth.noise_sigma, "Gaussian coordinate noise (Angstrom)")
      ->capture_default_str();
  synth->add_option("--seed", o.synth.seed, "Generator seed")->capture_default_str();
  add_out(synth, o);

  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  add_data(train_cmd, o);
  add_optimizer(train_cmd, o, o.train.epochs);
  train_cmd->add_option("--cutoff", o.model.cutoff, "Contact-graph cutoff (Angstrom)")
      ->capture_default_str()
      ->check(CLI::Range(6.5, 12.0));
  train_cmd->add_option("--min-sep", o.model.min_sep, "Minimum sequence separation of contacts")
      ->capture_default_str();
  train_cmd->add_option("--radius0", o.model.radius0, "Level-0 radius-graph radius (Angstrom)")
      ->capture_default_str();
  train_cmd->add_option("--levels", o.model.levels, "Hierarchy levels")->capture_default_str();
  train_cmd->add_option("--heads", o.model.heads, "Attention heads")->capture_default_str();
  train_cmd->add_option("--intrinsic-dim", o.model.intrinsic_dim, "Intrinsic latent size")
      ->capture_default_str();
  train_cmd->add_option("--extrinsic-dim", o.model.extrinsic_dim, "Extrinsic latent size")
      ->capture_default_str();
  train_cmd->add_flag("--extrinsic-only", o.model.extrinsic_only,
                      "Drop the intrinsic encoder (ablation)");
  train_cmd->add_flag("--quiet", o.quiet, "Do not print per-epoch progress");
  add_out(train_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "Reconstruction metrics on a split");
  add_data(eval_cmd, o);
  add_ckpt(eval_cmd, o);
  add_split(eval_cmd, o);
  add_loss(eval_cmd, o);
  add_out(eval_cmd, o);

  auto* cca_cmd = app.add_subcommand("cca", "Canonical correlations between latent spaces");
  add_data(cca_cmd, o);
  add_ckpt(cca_cmd, o);
  add_split(cca_cmd, o);
  add_out(cca_cmd, o);

  auto* probe_cmd = app.add_subcommand("probe", "One-shot classification and property regression");
  add_data(probe_cmd, o);
  add_ckpt(probe_cmd, o);
  add_split(probe_cmd, o);
  probe_cmd->add_option("--property", o.properties, "Property to regress (repeatable; default all)");
  add_out(probe_cmd, o);

  auto* interp_cmd = app.add_subcommand("interp", "Decode a linear path between two latent codes");
  add_data(interp_cmd, o);
  add_ckpt(interp_cmd, o);
  add_split(interp_cmd, o);
  interp_cmd->add_option("--frame-a", o.frame_a, "First endpoint frame (default: first of split)");
  interp_cmd->add_option("--frame-b", o.frame_b,
                         "Second endpoint frame (default: first of another class)");
  interp_cmd->add_option("--steps", o.steps, "Points on the path")->capture_default_str();
  add_out(interp_cmd, o);

  auto* transfer_cmd =
      app.add_subcommand("transfer", "Retrain only the latent-to-decoder layer on a new chain");
  add_data(transfer_cmd, o);
  add_ckpt(transfer_cmd, o);
  add_optimizer(transfer_cmd, o, o.transfer_epochs);
  transfer_cmd->add_option("--filters", o.filters, "Encoder filters to copy")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "intrinsic", "extrinsic"}));
  transfer_cmd->add_flag("--baseline", o.baseline, "Start from random filters instead");
  add_out(transfer_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (train_cmd->parsed()) return cmd_train(o, out);
    if (eval_cmd->parsed()) return cmd_eval(o, out);
    if (cca_cmd->parsed()) return cmd_cca(o, out);
    if (probe_cmd->parsed()) return cmd_probe(o, out);
    if (interp_cmd->parsed()) return cmd_interp(o, out);
    if (transfer_cmd->parsed()) return cmd_transfer(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 2;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace conformer_forge::cli
