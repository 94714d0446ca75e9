// Command-line front end: stimulus generation, model runs and detection
// metrics, wired for reproducible experiments.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tqd/metrics.h"
#include "tqd/model.h"
#include "tqd/stimulus.h"

namespace fs = std::filesystem;

namespace {

using tqd::Scalar;

struct SizeArg {
  int width = 0;
  int height = 0;
};

SizeArg ParseSize(const std::string& s) {
  SizeArg size;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%dx%d%c", &size.width, &size.height, &extra) !=
      2) {
    throw tqd::InvalidParameterError("bad --size '" + s +
                                     "' (expected WIDTHxHEIGHT)");
  }
  return size;
}

std::pair<Scalar, Scalar> ParseLumRange(const std::string& s) {
  Scalar lo = 0, hi = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf%c", &lo, &hi, &extra) != 2) {
    throw tqd::InvalidParameterError("bad --lum '" + s +
                                     "' (expected LO:HI)");
  }
  return {lo, hi};
}

tqd::ThresholdSchedule ParseSchedule(const std::string& s) {
  if (s.empty()) return tqd::ThresholdSchedule::Default();
  tqd::ThresholdSchedule schedule;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      schedule.gammas.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw tqd::InvalidParameterError("bad --gammas entry '" + item + "'");
    }
  }
  schedule.Validate();
  return schedule;
}

// Loads a model config, adopting the sequence sample interval when the
// file does not pin dt itself.
tqd::ModelConfig LoadRunConfig(const std::string& config_path,
                               Scalar sample_rate_hz) {
  tqd::ModelConfig cfg;
  bool has_dt = false;
  if (!config_path.empty()) {
    const auto kv = tqd::ReadKeyValueFile(config_path, "config");
    has_dt = kv.count("dt") > 0;
    cfg = tqd::ModelConfig::FromKeyValues(kv, "config '" + config_path + "'");
  }
  const Scalar seq_dt = 1.0 / sample_rate_hz;
  if (!has_dt) {
    cfg.dt = seq_dt;
  } else if (std::abs(cfg.dt - seq_dt) > 1e-9 * seq_dt) {
    throw tqd::InvalidParameterError(
        "config dt does not match the sequence sample_rate_hz");
  }
  return cfg;
}

void DumpStage(const fs::path& dir, const std::string& stage, int frame,
               const tqd::Image& img) {
  // Stage responses are signed and unbounded; dumps are min-max scaled.
  const Scalar lo = img.minCoeff();
  const Scalar hi = img.maxCoeff();
  tqd::Image scaled = hi > lo ? tqd::Image((img - lo) / (hi - lo))
                              : tqd::Image::Zero(img.rows(), img.cols());
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%06d.pgm", stage.c_str(), frame);
  tqd::WritePgm16((dir / name).string(), scaled);
}

int CmdGenerate(const std::string& size_arg, Scalar rate,
                const std::string& dir_name, Scalar velocity, int frames,
                const std::string& texture, std::uint64_t seed,
                const std::string& lum, const std::string& out_dir) {
  const SizeArg size = ParseSize(size_arg);
  const auto [lo, hi] = ParseLumRange(lum);
  tqd::StimulusSpec spec;
  spec.width = size.width;
  spec.height = size.height;
  spec.frame_count = frames;
  spec.sample_rate = rate;
  spec.direction = tqd::DirectionFromName(dir_name);
  spec.velocity = velocity;
  spec.texture = tqd::TextureFromName(texture);
  spec.seed = seed;
  spec.lum_lo = lo;
  spec.lum_hi = hi;
  tqd::WriteSequence(out_dir, spec);
  std::cout << "wrote " << frames << " frames to " << out_dir << "\n";
  return 0;
}

int CmdRun(const std::string& model_name, const std::string& config_path,
           const std::string& in_dir, const std::string& out_dir,
           bool dump_stages) {
  const auto start = std::chrono::steady_clock::now();
  const tqd::Variant variant = tqd::VariantFromName(model_name);
  const tqd::SequenceReader reader(in_dir);
  const tqd::SequenceManifest& manifest = reader.manifest();
  const tqd::ModelConfig cfg =
      LoadRunConfig(config_path, manifest.sample_rate_hz);

  fs::create_directories(out_dir);
  const fs::path out_path(out_dir);
  std::ofstream csv(out_path / "direction.csv");
  if (!csv) throw tqd::IoError("cannot write " + out_dir + "/direction.csv");
  tqd::WriteDirectionCsvHeader(csv);

  fs::path stage_dir = out_path / "stages";
  if (dump_stages) fs::create_directories(stage_dir);

  tqd::TqdModel model(cfg, manifest.height, manifest.width);
  for (int k = 0; k < manifest.frames; ++k) {
    const auto result = model.Step(reader.Frame(k), reader.Timestamp(k));
    const tqd::DirectionalField& field =
        variant == tqd::Variant::kClassic ? result.classic : result.improved;
    tqd::WriteDirectionCsvRow(csv, tqd::EstimateDirection(field),
                              result.warmup);
    if (dump_stages) {
      const auto& st = model.stages();
      DumpStage(stage_dir, "retina", k, st.retina);
      DumpStage(stage_dir, "contrast", k, st.contrast);
      DumpStage(stage_dir, "inhibited", k, st.inhibited);
      DumpStage(stage_dir, "on", k, st.channels.on);
      DumpStage(stage_dir, "off", k, st.channels.off);
      DumpStage(stage_dir, "on_sparse", k, st.sparse.on);
      DumpStage(stage_dir, "off_sparse", k, st.sparse.off);
    }
  }
  csv.close();
  if (!csv) throw tqd::IoError("failed writing " + out_dir + "/direction.csv");

  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  std::ofstream rm(out_path / "run_manifest.txt");
  if (!rm) throw tqd::IoError("cannot write " + out_dir + "/run_manifest.txt");
  rm << "tool_version=" << tqd::kToolVersion << "\n";
  rm << "model=" << model_name << "\n";
  rm << "input=" << fs::absolute(in_dir).string() << "\n";
  rm << "frames=" << manifest.frames << "\n";
  rm << "wall_ms=" << wall_ms << "\n";
  for (const auto& [key, value] : cfg.KeyValues()) {
    rm << "config." << key << "=" << value << "\n";
  }
  std::cout << "wrote " << manifest.frames << " estimates to " << out_dir
            << "/direction.csv\n";
  return 0;
}

struct RunInfo {
  std::string dir;
  std::string label;
  tqd::Variant variant = tqd::Variant::kClassic;
  std::string input;
  tqd::ModelConfig config;
};

RunInfo LoadRunInfo(const std::string& run_dir) {
  RunInfo info;
  info.dir = run_dir;
  const auto kv = tqd::ReadKeyValueFile(
      (fs::path(run_dir) / "run_manifest.txt").string(), "run manifest");
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw tqd::FormatError("run manifest in '" + run_dir +
                             "': missing key '" + key + "'");
    }
    return it->second;
  };
  info.variant = tqd::VariantFromName(require("model"));
  info.input = require("input");
  std::map<std::string, std::string> config_kv;
  for (const auto& [key, value] : kv) {
    if (key.rfind("config.", 0) == 0) config_kv[key.substr(7)] = value;
  }
  info.config = tqd::ModelConfig::FromKeyValues(
      config_kv, "run manifest in '" + run_dir + "'");
  std::string label = fs::path(run_dir).filename().string();
  if (label.empty()) label = fs::path(run_dir).parent_path().filename().string();
  info.label = label.empty() ? run_dir : label;
  return info;
}

int CmdMetrics(const std::vector<std::string>& run_dirs, int frame,
               const std::string& truth, const std::string& gammas,
               const std::string& out_dir, int threads) {
  const tqd::ThresholdSchedule schedule = ParseSchedule(gammas);
  std::vector<RunInfo> runs;
  for (const std::string& dir : run_dirs) runs.push_back(LoadRunInfo(dir));
  for (size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].config.KeyValues() != runs[0].config.KeyValues()) {
      throw tqd::InvalidParameterError(
          "run dirs were produced with different configs; score them "
          "separately");
    }
  }
  for (size_t i = 0; i < runs.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (runs[i].label == runs[j].label) {
        runs[i].label += "_" + std::to_string(i);
      }
    }
  }

  std::vector<tqd::MetricsCell> cells(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  const int worker_count =
      std::max(1, std::min<int>(threads, static_cast<int>(runs.size())));
  std::vector<std::thread> workers;
  std::atomic<size_t> cursor{0};
  auto work = [&]() {
    for (size_t i = cursor.fetch_add(1); i < runs.size();
         i = cursor.fetch_add(1)) {
      try {
        const tqd::SequenceReader reader(runs[i].input);
        const tqd::SequenceView view = tqd::SequenceView::FromReader(reader);
        const tqd::Direction theta0 = truth.empty()
                                          ? reader.manifest().direction
                                          : tqd::DirectionFromName(truth);
        cells[i] = tqd::EvaluateSequence(view, runs[i].config,
                                         runs[i].variant, schedule, frame,
                                         theta0, runs[i].label);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  for (int t = 0; t < worker_count; ++t) workers.emplace_back(work);
  for (auto& w : workers) w.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  tqd::MetricsReport report;
  report.config = runs.front().config;
  report.schedule = schedule;
  report.cells = std::move(cells);

  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "report.csv");
  if (!csv) throw tqd::IoError("cannot write " + out_dir + "/report.csv");
  report.WriteCsv(csv);
  std::ofstream summary(fs::path(out_dir) / "summary.txt");
  if (!summary) throw tqd::IoError("cannot write " + out_dir + "/summary.txt");
  report.WriteSummary(summary);
  report.WriteSummary(std::cout);
  return 0;
}

int CmdCompare(const std::string& in_dir, const std::string& config_path,
               int frame, const std::string& gammas,
               const std::string& out_dir) {
  const tqd::ThresholdSchedule schedule = ParseSchedule(gammas);
  const tqd::SequenceReader reader(in_dir);
  const tqd::ModelConfig cfg =
      LoadRunConfig(config_path, reader.manifest().sample_rate_hz);
  const tqd::SequenceView view = tqd::SequenceView::FromReader(reader);
  const tqd::MetricsReport report =
      tqd::CompareModels(view, cfg, schedule, frame);

  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "report.csv");
  if (!csv) throw tqd::IoError("cannot write " + out_dir + "/report.csv");
  report.WriteCsv(csv);
  std::ofstream summary(fs::path(out_dir) / "summary.txt");
  if (!summary) throw tqd::IoError("cannot write " + out_dir + "/summary.txt");
  report.WriteSummary(summary);
  report.WriteSummary(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-quadrant-detector motion models: stimulus generation, "
               "direction estimation and detection metrics"};
  app.require_subcommand(1);

  // generate
  std::string g_size, g_dir, g_texture = "clutter", g_lum = "0.05:0.95";
  std::string g_out;
  Scalar g_rate = 1000.0, g_vel = 0.0;
  int g_frames = 0;
  std::uint64_t g_seed = 0;
  CLI::App* generate =
      app.add_subcommand("generate", "Generate a drifting-background sequence");
  generate->add_option("--size", g_size, "Frame size as WIDTHxHEIGHT")
      ->required();
  generate->add_option("--rate", g_rate, "Sample rate in Hz (default 1000)");
  generate->add_option("--dir", g_dir, "Motion direction: right|up|left|down")
      ->required();
  generate->add_option("--vel", g_vel, "Background speed in pixels/second")
      ->required();
  generate->add_option("--frames", g_frames, "Number of frames")->required();
  generate->add_option("--texture", g_texture,
                       "Texture kind: clutter|blocks|stripes");
  generate->add_option("--seed", g_seed, "Texture seed");
  generate->add_option("--lum", g_lum, "Luminance range LO:HI");
  generate->add_option("--out", g_out, "Output sequence directory")
      ->required();

  // run
  std::string r_model, r_config, r_in, r_out;
  bool r_dump = false;
  CLI::App* run = app.add_subcommand(
      "run", "Run a model over a sequence and write per-frame estimates");
  run->add_option("--model", r_model, "Model variant: classic|improved")
      ->required();
  run->add_option("--config", r_config, "Model config file (key=value)");
  run->add_option("--in", r_in, "Input sequence directory")->required();
  run->add_option("--out", r_out, "Output run directory")->required();
  run->add_flag("--dump-stages", r_dump, "Write per-stage frame dumps");

  // metrics
  std::vector<std::string> m_runs;
  std::string m_truth, m_gammas, m_out = "metrics_out";
  int m_frame = 0, m_threads = 1;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Score existing runs at one frame across thresholds");
  metrics->add_option("--runs", m_runs, "Run directories to score")
      ->required()
      ->expected(-1);
  metrics->add_option("--frame", m_frame, "Frame index to evaluate")
      ->required();
  metrics->add_option("--truth", m_truth,
                      "True direction (default: sequence manifest)");
  metrics->add_option("--gammas", m_gammas,
                      "Comma-separated thresholds (default schedule)");
  metrics->add_option("--out", m_out, "Report output directory");
  metrics->add_option("--threads", m_threads, "Parallel run evaluations");

  // compare
  std::string c_in, c_config, c_gammas, c_out = "compare_out";
  int c_frame = 0;
  CLI::App* compare = app.add_subcommand(
      "compare", "Run both variants on a sequence and report metrics");
  compare->add_option("--in", c_in, "Input sequence directory")->required();
  compare->add_option("--config", c_config, "Model config file");
  compare->add_option("--frame", c_frame, "Frame index to evaluate")
      ->required();
  compare->add_option("--gammas", c_gammas, "Comma-separated thresholds");
  compare->add_option("--out", c_out, "Report output directory");

  try {
    app.parse(argc, argv);
    if (generate->parsed()) {
      return CmdGenerate(g_size, g_rate, g_dir, g_vel, g_frames, g_texture,
                         g_seed, g_lum, g_out);
    }
    if (run->parsed()) {
      return CmdRun(r_model, r_config, r_in, r_out, r_dump);
    }
    if (metrics->parsed()) {
      return CmdMetrics(m_runs, m_frame, m_truth, m_gammas, m_out, m_threads);
    }
    if (compare->parsed()) {
      return CmdCompare(c_in, c_config, c_frame, c_gammas, c_out);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const tqd::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
