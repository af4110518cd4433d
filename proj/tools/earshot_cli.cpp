// Copyright 2026 The Earshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// earshot command-line front end.
//
//   earshot synth       --out-dir DIR [--azimuth A] [--candidates K]
//   earshot spatialize  --mono IN.wav --out OUT.wav [--frames F.btf | --azimuth A]
//   earshot fuse        --mono IN.wav --candidates DIR_OR_FILES... --out OUT.wav
//   earshot evaluate    --pred P --gt G
//   earshot priors      --out-dir DIR
//   earshot demo-train  [--steps N] [--lr X]
//
// Exit codes: 0 ok, 2 usage, 3 data format, 4 numeric failure.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "earshot/config.hpp"
#include "earshot/errors.hpp"
#include "earshot/losses.hpp"
#include "earshot/metrics.hpp"
#include "earshot/params_io.hpp"
#include "earshot/pipeline.hpp"
#include "earshot/priors.hpp"
#include "earshot/scene.hpp"
#include "earshot/tensor_io.hpp"
#include "earshot/wav.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace earshot;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Flags that override the config file when given.
struct ConfigFlags {
  std::string path;
  std::optional<std::size_t> seg_len;
  std::optional<std::size_t> hop;
  std::optional<double> eps;
  std::optional<int> crops;

  void add_to(CLI::App* app, bool with_crops) {
    app->add_option("--config", path, "key=value config file");
    app->add_option("--seg-len", seg_len, "segment length in samples");
    app->add_option("--hop", hop, "inference hop in samples");
    app->add_option("--eps", eps, "fusion epsilon");
    if (with_crops) app->add_option("--crops", crops, "crops per segment");
  }

  RunConfig resolve() const {
    RunConfig c = path.empty() ? RunConfig{} : load_config(path);
    if (seg_len) c.seg_len = *seg_len;
    if (hop) c.infer_hop = *hop;
    if (eps) c.eps = *eps;
    if (crops) c.k_crops = *crops;
    c.validate();
    return c;
  }
};

PipelineOptions pipeline_options(const RunConfig& c, bool refine) {
  PipelineOptions o;
  o.stft = c.stft;
  o.seg_len = c.seg_len;
  o.hop = c.infer_hop;
  o.crops = c.k_crops;
  o.eps = c.eps;
  o.refine = refine;
  o.validate();
  return o;
}

SampleFormat parse_format(const std::string& name) {
  if (name == "float32") return SampleFormat::kFloat32;
  if (name == "pcm16") return SampleFormat::kPcm16;
  throw UsageError("unknown sample format '" + name + "' (float32 or pcm16)");
}

Waveform read_mono(const fs::path& path, int rate) {
  auto channels = read_wav(path, rate);
  if (channels.size() == 1) return channels.front();
  // Multi-channel input is summed to the mono mix.
  Waveform mix = channels.front();
  for (std::size_t c = 1; c < channels.size(); ++c) {
    for (std::size_t i = 0; i < mix.size(); ++i) mix.samples[i] += channels[c].samples[i];
  }
  return mix;
}

StereoWaveform read_stereo(const fs::path& path, int rate) {
  auto channels = read_wav(path, rate);
  if (channels.size() != 2) {
    throw FormatError(path.string() + ": expected 2 channels, found " + std::to_string(channels.size()));
  }
  return {std::move(channels[0]), std::move(channels[1])};
}

void write_stereo(const fs::path& path, const StereoWaveform& wave, SampleFormat format) {
  const Waveform channels[2] = {wave.left, wave.right};
  write_wav(path, channels, format);
}

FrameTensor frame_from_dims(const TensorData& t, std::size_t index) {
  const std::size_t offset = t.dims.size() == 4 ? 1 : 0;
  const int c = static_cast<int>(t.dims[offset]);
  const int h = static_cast<int>(t.dims[offset + 1]);
  const int w = static_cast<int>(t.dims[offset + 2]);
  FrameTensor f(c, h, w);
  const auto begin = t.values.begin() + static_cast<std::ptrdiff_t>(index * f.size());
  std::copy(begin, begin + static_cast<std::ptrdiff_t>(f.size()), f.values().begin());
  return f;
}

FrameSequence load_frames(const fs::path& path, double fps) {
  const TensorData t = read_tensor(path);
  FrameSequence seq;
  seq.fps = fps;
  if (t.dims.size() == 3) {
    seq.frames.push_back(frame_from_dims(t, 0));
  } else if (t.dims.size() == 4 && t.dims[0] > 0) {
    for (std::size_t i = 0; i < t.dims[0]; ++i) seq.frames.push_back(frame_from_dims(t, i));
  } else {
    throw FormatError(path.string() + ": frames must be C x H x W or N x C x H x W");
  }
  return seq;
}

std::vector<fs::path> expand_paths(const std::vector<std::string>& inputs, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ext) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  SceneSpec spec;
  std::string source = "tone";
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string format = "float32";
  int candidates = 0;
  double max_level = 0.5;
  ConfigFlags config;
};

int run_synth(const SynthArgs& a) {
  SceneSpec spec = a.spec;
  if (a.source == "tone") spec.source = SourceKind::kTone;
  else if (a.source == "noise") spec.source = SourceKind::kNoise;
  else throw UsageError("unknown source '" + a.source + "' (tone or noise)");
  const RunConfig config = a.config.resolve();
  spec.sample_rate = config.sample_rate;
  spec.validate(config.stft.hop_len);
  const SampleFormat format = parse_format(a.format);

  const Scene scene = synth_scene(spec, a.seed);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(scene.frame.channels()),
                                 static_cast<std::uint32_t>(scene.frame.height()),
                                 static_cast<std::uint32_t>(scene.frame.width())};
  std::vector<float> pixels(scene.frame.values().begin(), scene.frame.values().end());
  write_tensor(dir / "frame.btf", dims, pixels);
  write_wav(dir / "mono.wav", std::span<const Waveform>(&scene.mono, 1), format);
  write_stereo(dir / "binaural.wav", {scene.left, scene.right}, format);

  json summary = {{"frame", (dir / "frame.btf").string()},
                  {"mono", (dir / "mono.wav").string()},
                  {"binaural", (dir / "binaural.wav").string()},
                  {"samples", scene.mono.size()}};

  if (a.candidates > 0) {
    // Ground truth plus perturbed copies at increasing noise levels, one
    // tensor file per planned segment, ready for `fuse`.
    const fs::path cand_dir = dir / "candidates";
    fs::create_directories(cand_dir);
    const SegmentPlan plan = plan_segments(scene.mono.size(), config.seg_len, config.infer_hop);
    std::vector<double> levels(static_cast<std::size_t>(a.candidates));
    for (std::size_t k = 0; k < levels.size(); ++k) {
      levels[k] = levels.size() == 1 ? 0.0 : a.max_level * k / (levels.size() - 1);
    }
    std::mt19937_64 rng(a.seed ^ 0xc0ffeeULL);
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
      const Interval seg = plan.segments[s];
      auto part = [&](const Waveform& w) {
        Waveform out{{w.samples.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                      w.samples.begin() + static_cast<std::ptrdiff_t>(seg.end)},
                     w.sample_rate};
        return stft(out, config.stft);
      };
      const auto cands = perturbed_candidates(part(scene.left), part(scene.right), levels, rng);
      const TensorData t = candidates_to_tensor(cands);
      char name[32];
      std::snprintf(name, sizeof(name), "seg_%05zu.btf", s);
      write_tensor(cand_dir / name, t.dims, t.values);
    }
    summary["candidates"] = cand_dir.string();
    summary["segments"] = plan.segments.size();
  }
  std::cout << summary.dump() << "\n";
  return 0;
}

// ---- spatialize -----------------------------------------------------------

struct SpatializeArgs {
  std::string mono;
  std::string out;
  std::string frames;
  double fps = 0.0;
  std::optional<double> azimuth;
  std::string params;
  std::string save_params;
  std::uint64_t seed = 0;
  bool no_refine = false;
  std::string format = "float32";
  ConfigFlags config;
};

int run_spatialize(const SpatializeArgs& a) {
  const RunConfig config = a.config.resolve();
  const PipelineOptions options = pipeline_options(config, !a.no_refine);
  const SampleFormat format = parse_format(a.format);
  if (a.frames.empty() == !a.azimuth.has_value()) {
    throw UsageError("give exactly one of --frames or --azimuth");
  }

  FrameSequence frames;
  if (!a.frames.empty()) {
    frames = load_frames(a.frames, a.fps);
  } else {
    SceneSpec spec;
    spec.azimuth = *a.azimuth;
    spec.duration = 0.01;
    frames.frames.push_back(synth_scene(spec, a.seed).frame);
  }
  const ModelParams model = a.params.empty() ? init_model(a.seed) : load_params(a.params);
  if (!a.save_params.empty()) save_params(a.save_params, model);

  const Waveform mono = read_mono(a.mono, config.sample_rate);
  const auto start = std::chrono::steady_clock::now();
  const StereoWaveform out = spatialize_clip(mono, frames, model.encoder, model.net, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_stereo(a.out, out, format);

  const SegmentPlan plan = plan_segments(mono.size(), options.seg_len, options.hop);
  std::cout << json{{"output", a.out},
                    {"samples", out.left.size()},
                    {"segments", plan.segments.size()},
                    {"regular_segments", plan.regular_count},
                    {"refine", options.refine},
                    {"seconds", seconds}}
                   .dump()
            << "\n";
  return 0;
}

// ---- fuse -----------------------------------------------------------------

struct FuseArgs {
  std::string mono;
  std::vector<std::string> candidates;
  std::string out;
  bool no_refine = false;
  std::string format = "float32";
  ConfigFlags config;
};

int run_fuse(const FuseArgs& a) {
  const RunConfig config = a.config.resolve();
  const PipelineOptions options = pipeline_options(config, !a.no_refine);
  const SampleFormat format = parse_format(a.format);
  const Waveform mono = read_mono(a.mono, config.sample_rate);

  const auto files = expand_paths(a.candidates, ".btf");
  if (files.empty()) throw UsageError("no candidate files found");
  std::vector<std::vector<FusionCandidate>> per_segment;
  for (const auto& f : files) {
    per_segment.push_back(candidates_from_tensor(read_tensor(f), config.stft, config.sample_rate));
  }
  const StereoWaveform out = fuse_candidates(mono, per_segment, options);
  write_stereo(a.out, out, format);
  std::cout << json{{"output", a.out},
                    {"samples", out.left.size()},
                    {"segments", per_segment.size()},
                    {"refine", options.refine}}
                   .dump()
            << "\n";
  return 0;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string gt;
  std::string records;
  ConfigFlags config;
};

json report_json(const MetricReport& r) {
  return {{"stft_l2", r.stft_l2},
          {"env", r.env_dist},
          {"phase", r.phase_dist},
          {"snr_db", r.snr.db},
          {"snr_identical", r.snr.identical}};
}

int run_evaluate(const EvaluateArgs& a) {
  const RunConfig config = a.config.resolve();
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::is_directory(a.pred) != fs::is_directory(a.gt)) {
    throw UsageError("--pred and --gt must both be files or both be directories");
  }
  if (fs::is_directory(a.pred)) {
    for (const auto& p : expand_paths({a.pred}, ".wav")) {
      const fs::path g = fs::path(a.gt) / p.filename();
      if (!fs::exists(g)) throw FormatError("no ground truth for " + p.filename().string());
      pairs.emplace_back(p, g);
    }
    if (pairs.empty()) throw UsageError("no .wav files in " + a.pred);
  } else {
    pairs.emplace_back(a.pred, a.gt);
  }

  std::vector<MetricReport> reports;
  std::vector<json> lines;
  std::printf("%-28s %12s %12s %12s %12s\n", "clip", "stft_l2", "env", "phase", "snr_db");
  for (const auto& [p, g] : pairs) {
    StereoWaveform pred = read_stereo(p, config.sample_rate);
    const StereoWaveform gt = read_stereo(g, config.sample_rate);
    if (pred.left.size() != gt.left.size()) {
      throw FormatError(p.string() + ": length differs from ground truth");
    }
    reports.push_back(evaluate_clip(pred, gt, config.stft));
    const auto& r = reports.back();
    std::printf("%-28s %12.6g %12.6g %12.6g %12.4f%s\n", p.filename().string().c_str(), r.stft_l2,
                r.env_dist, r.phase_dist, r.snr.db, r.snr.identical ? " (identical)" : "");
    json line = report_json(r);
    line["clip"] = p.filename().string();
    lines.push_back(line);
  }
  const MetricReport mean = aggregate(reports);
  std::printf("%-28s %12.6g %12.6g %12.6g %12.4f\n", "mean", mean.stft_l2, mean.env_dist,
              mean.phase_dist, mean.snr.db);
  json agg = report_json(mean);
  agg["clip"] = "mean";
  agg["clips"] = reports.size();
  lines.push_back(agg);

  if (a.records.empty() || a.records == "-") {
    for (const auto& l : lines) std::cout << l.dump() << "\n";
  } else {
    std::ofstream out(a.records);
    if (!out) throw std::runtime_error("cannot open " + a.records);
    for (const auto& l : lines) out << l.dump() << "\n";
  }
  return 0;
}

// ---- priors ---------------------------------------------------------------

struct PriorArgs {
  int height = 14;
  int width = 28;
  std::string out_dir;
};

int run_priors(const PriorArgs& a) {
  const PriorConfig prior = PriorConfig::for_grid(a.height, a.width);
  const PriorTargets targets = logistic_targets(prior);
  fs::create_directories(a.out_dir);
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(a.height),
                                 static_cast<std::uint32_t>(a.width)};
  for (auto [name, map] : {std::pair{"W_L.btf", &targets.left}, std::pair{"W_R.btf", &targets.right}}) {
    std::vector<float> values(map->values().begin(), map->values().end());
    write_tensor(fs::path(a.out_dir) / name, dims, values);
  }
  double left_mass = 0.0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width / 2; ++x) left_mass += targets.left(y, x);
  }
  std::cout << json{{"height", a.height},
                    {"width", a.width},
                    {"slope", prior.slope},
                    {"center", prior.center},
                    {"left_mass_of_W_L", left_mass}}
                   .dump()
            << "\n";
  return 0;
}

// ---- demo-train -----------------------------------------------------------

struct DemoArgs {
  DemoOptions options;
  double lambda0 = 2.0;
  std::optional<long> t_anneal;
  int scenes = 4;
  std::uint64_t seed = 7;
  std::string params_out;
  std::string records;
};

int run_demo(const DemoArgs& a) {
  DemoOptions options = a.options;
  options.schedule.lambda0 = a.lambda0;
  options.schedule.t_anneal = a.t_anneal ? *a.t_anneal : std::max<long>(1, options.steps / 4);
  const auto frames = left_blob_frames(a.scenes, a.seed);
  const auto start = std::chrono::steady_clock::now();
  const DemoResult result = train_prior_demo(frames, PriorConfig{}, options, a.seed);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream file;
  if (!a.records.empty()) {
    file.open(a.records);
    if (!file) throw std::runtime_error("cannot open " + a.records);
  }
  std::ostream& out = a.records.empty() ? std::cout : file;
  for (const auto& r : result.trace) {
    out << json{{"step", r.step}, {"loss", r.loss}, {"lambda_t", r.lambda_t}, {"left_mass", r.left_mass}}
               .dump()
        << "\n";
  }
  if (!a.params_out.empty()) {
    save_params(a.params_out, {result.params, NetParams::init(NetConfig{}, a.seed)});
  }
  std::cerr << "demo: final left-half mass " << result.trace.back().left_mass << " after "
            << options.steps << " steps in " << seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"earshot: visually guided mono to binaural conversion"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scene");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--azimuth", synth.spec.azimuth, "source azimuth in [-1, 1]");
  synth_cmd->add_option("--blob-radius", synth.spec.blob_radius, "blob radius in pixels");
  synth_cmd->add_option("--ild", synth.spec.ild_db, "level difference in dB");
  synth_cmd->add_option("--itd", synth.spec.itd_samples, "far-ear delay in samples");
  synth_cmd->add_option("--source", synth.source, "tone or noise");
  synth_cmd->add_option("--tone-hz", synth.spec.tone_hz, "tone frequency");
  synth_cmd->add_option("--duration", synth.spec.duration, "seconds");
  synth_cmd->add_option("--seed", synth.seed, "random seed");
  synth_cmd->add_option("--format", synth.format, "float32 or pcm16");
  synth_cmd->add_option("--candidates", synth.candidates,
                        "also write K injected candidates per segment (ground truth first)");
  synth_cmd->add_option("--max-level", synth.max_level, "noise level of the worst candidate");
  synth.config.add_to(synth_cmd, false);

  SpatializeArgs spat;
  auto* spat_cmd = app.add_subcommand("spatialize", "mono WAV plus frames to binaural WAV");
  spat_cmd->add_option("--mono", spat.mono, "input WAV")->required();
  spat_cmd->add_option("--out", spat.out, "output stereo WAV")->required();
  spat_cmd->add_option("--frames", spat.frames, "frame tensor (C x H x W or N x C x H x W)");
  spat_cmd->add_option("--fps", spat.fps, "frame rate of a frame sequence");
  spat_cmd->add_option("--azimuth", spat.azimuth, "use a synthetic frame with this azimuth");
  spat_cmd->add_option("--params", spat.params, "parameter bundle (default: seeded init)");
  spat_cmd->add_option("--save-params", spat.save_params, "write the parameters used");
  spat_cmd->add_option("--seed", spat.seed, "parameter seed");
  spat_cmd->add_flag("--no-refine", spat.no_refine, "uniform fusion weights");
  spat_cmd->add_option("--format", spat.format, "float32 or pcm16");
  spat.config.add_to(spat_cmd, true);

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "fuse per-segment candidate tensors");
  fuse_cmd->add_option("--mono", fuse.mono, "input WAV")->required();
  fuse_cmd->add_option("--candidates", fuse.candidates, "candidate files or directories")
      ->required();
  fuse_cmd->add_option("--out", fuse.out, "output stereo WAV")->required();
  fuse_cmd->add_flag("--no-refine", fuse.no_refine, "uniform fusion weights");
  fuse_cmd->add_option("--format", fuse.format, "float32 or pcm16");
  fuse.config.add_to(fuse_cmd, false);

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "compare stereo WAVs");
  eval_cmd->add_option("--pred", eval.pred, "prediction WAV or directory")->required();
  eval_cmd->add_option("--gt", eval.gt, "ground-truth WAV or directory")->required();
  eval_cmd->add_option("--records", eval.records, "line-delimited records path ('-': stdout)");
  eval.config.add_to(eval_cmd, false);

  PriorArgs prior;
  auto* prior_cmd = app.add_subcommand("priors", "dump the left/right prior targets");
  prior_cmd->add_option("--out-dir", prior.out_dir, "output directory")->required();
  prior_cmd->add_option("--height", prior.height, "grid rows")->check(CLI::PositiveNumber);
  prior_cmd->add_option("--width", prior.width, "grid columns")->check(CLI::PositiveNumber);

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-train", "prior-only attention training demo");
  demo_cmd->add_option("--steps", demo.options.steps, "gradient steps");
  demo_cmd->add_option("--lr", demo.options.learning_rate, "learning rate");
  demo_cmd->add_option("--lambda0", demo.lambda0, "initial prior weight");
  demo_cmd->add_option("--t-anneal", demo.t_anneal, "annealing horizon (default steps / 4)");
  demo_cmd->add_option("--scenes", demo.scenes, "number of synthetic scenes")
      ->check(CLI::PositiveNumber);
  demo_cmd->add_option("--seed", demo.seed, "random seed");
  demo_cmd->add_option("--params-out", demo.params_out, "write trained parameters");
  demo_cmd->add_option("--records", demo.records, "trace output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (spat_cmd->parsed()) return run_spatialize(spat);
    if (fuse_cmd->parsed()) return run_fuse(fuse);
    if (eval_cmd->parsed()) return run_evaluate(eval);
    if (prior_cmd->parsed()) return run_priors(prior);
    if (demo_cmd->parsed()) return run_demo(demo);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitUsage;
}
