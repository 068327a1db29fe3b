// Command-line front end: simulate, estimate, infer, evaluate, traces.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtvv/baselines.h"
#include "gtvv/errors.h"
#include "gtvv/experiment.h"
#include "gtvv/wav.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out = "gtvv_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> order;
  std::optional<std::string> method;
  std::string input;
  int scene = 0;
  int rt = 0;
  std::optional<double> doa_az_deg;
  std::optional<double> doa_el_deg;
};

gtvv::ExperimentConfig ResolveConfig(const Options& opt) {
  gtvv::ExperimentConfig cfg;
  if (!opt.config.empty()) cfg = gtvv::LoadExperimentConfig(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.order) cfg.orders = {*opt.order};
  if (opt.method) cfg.methods = {gtvv::ParseMethod(*opt.method)};
  cfg.output_dir = opt.out;
  cfg.Validate();
  return cfg;
}

void WriteJson(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw gtvv::ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int MaxOrder(const gtvv::ExperimentConfig& cfg) {
  return *std::max_element(cfg.orders.begin(), cfg.orders.end());
}

struct SimulatedRun {
  gtvv::GroundTruthScene scene;
  gtvv::AmbisonicSignal signal;
};

SimulatedRun Simulate(const gtvv::ExperimentConfig& cfg, int rt_index, int scene_index) {
  const auto placements = gtvv::ResolvePlacements(cfg);
  if (rt_index < 0 || rt_index >= static_cast<int>(cfg.rt60s.size()) || scene_index < 0 ||
      scene_index >= static_cast<int>(placements.size())) {
    throw gtvv::ConfigError("--rt / --scene out of range");
  }
  SimulatedRun run;
  const gtvv::Placement& p = placements[scene_index];
  run.scene = gtvv::ImageSourceScene(cfg.room, p.src, p.mic, cfg.rt60s[rt_index],
                                     cfg.image_max_order, cfg.fs);
  const std::uint64_t seed = cfg.seed * 1000003ULL + rt_index * 1009ULL + scene_index;
  const auto source = gtvv::MakeDrySource(cfg, seed);
  run.signal = gtvv::AddNoise(gtvv::EncodeScene(run.scene, source, MaxOrder(cfg)),
                              cfg.snr_db, seed ^ 0x9E3779B97F4A7C15ULL);
  return run;
}

gtvv::EstimatorConfig EstimatorFor(const gtvv::ExperimentConfig& cfg, int order) {
  return {cfg.seg_count, cfg.frames_per_seg, cfg.diagonal_load, gtvv::MakeOmniBeam(order)};
}

int CmdSimulate(const Options& opt) {
  const auto cfg = ResolveConfig(opt);
  fs::create_directories(opt.out);
  const SimulatedRun run = Simulate(cfg, opt.rt, opt.scene);
  json j = gtvv::SceneToJson(run.scene);
  j["sh_order"] = MaxOrder(cfg);
  j["snr_db"] = std::isfinite(cfg.snr_db) ? json(cfg.snr_db) : json(nullptr);
  WriteJson(j, fs::path(opt.out) / "scene.json");
  gtvv::WriteFloatWav(run.signal, (fs::path(opt.out) / "signal.wav").string());
  std::cout << "wrote " << run.scene.wavefronts.size() << " wavefronts, "
            << run.signal.num_channels() << " channels to " << opt.out << '\n';
  return 0;
}

// Loads --input as an Ambisonic WAV, or simulates the selected run.
gtvv::AmbisonicSignal InputSignal(const Options& opt, const gtvv::ExperimentConfig& cfg) {
  if (!opt.input.empty()) return gtvv::ReadAmbisonicWav(opt.input);
  return Simulate(cfg, opt.rt, opt.scene).signal;
}

int CmdEstimate(const Options& opt) {
  const auto cfg = ResolveConfig(opt);
  fs::create_directories(opt.out);
  gtvv::AmbisonicSignal sig = InputSignal(opt, cfg);
  const int order = opt.order ? *opt.order : sig.order();
  if (order > sig.order()) throw gtvv::ConfigError("--order exceeds the input order");
  const auto spec = gtvv::Stft(sig.Truncated(order), cfg.win_len, cfg.hop);
  const gtvv::Method method = opt.method ? gtvv::ParseMethod(*opt.method) : gtvv::Method::kGtvv;
  auto est = EstimatorFor(cfg, order);

  if (method == gtvv::Method::kSrp) {
    const auto dict = gtvv::BuildDictionary(cfg.dict_size, order, cfg.dict_scheme, cfg.dict_file);
    const auto map = gtvv::SrpMap(spec, dict);
    gtvv::WritePowerMapCsv(map, dict, (fs::path(opt.out) / "srp_map.csv").string());
    const auto& doa = dict.directions()[map.Argmax()];
    std::cout << "srp doa " << doa.azimuth_deg() << ' ' << doa.elevation_deg() << '\n';
    return 0;
  }
  if (method == gtvv::Method::kGtvv) {
    gtvv::Direction steer;
    if (opt.doa_az_deg && opt.doa_el_deg) {
      steer = gtvv::Direction::FromDegrees(*opt.doa_az_deg, *opt.doa_el_deg);
    } else {
      const auto dict = gtvv::BuildDictionary(cfg.dict_size, order, cfg.dict_scheme, cfg.dict_file);
      const auto first = gtvv::Somp(gtvv::HTdvv(spec, est), dict, {1, true});
      steer = first.directions.at(0);
    }
    est.reference = gtvv::MakeReferenceBeam(steer, order);
  }
  const gtvv::GtvvMatrix v = gtvv::EstimateGtvv(spec, est);
  const std::string tag = gtvv::MethodName(method);
  gtvv::WriteGtvvCsv(v, (fs::path(opt.out) / (tag + ".csv")).string());
  gtvv::DumpTraces(v, (fs::path(opt.out) / ("traces_" + tag + ".csv")).string());
  std::cout << tag << ": negative-lag ratio " << gtvv::NegativeLagRatio(v) << '\n';
  return 0;
}

int CmdInfer(const Options& opt) {
  if (opt.input.empty()) throw gtvv::ConfigError("infer needs --input <gtvv.csv>");
  const auto cfg = ResolveConfig(opt);
  fs::create_directories(opt.out);
  const gtvv::GtvvMatrix v = gtvv::ReadGtvvCsv(opt.input);
  int order = 0;
  while (gtvv::NumChannels(order) < v.channels()) ++order;
  if (gtvv::NumChannels(order) != v.channels()) {
    throw gtvv::ConfigError("channel count is not a square");
  }
  const auto dict = gtvv::BuildDictionary(cfg.dict_size, order, cfg.dict_scheme, cfg.dict_file);
  const auto est = gtvv::Somp(v, dict, {cfg.IterationCap(order), true});
  WriteJson(gtvv::EstimateToJson(est), fs::path(opt.out) / "estimate.json");
  for (int i = 0; i < est.size(); ++i) {
    std::cout << i + 1 << ": az " << est.directions[i].azimuth_deg() << " el "
              << est.directions[i].elevation_deg() << " delay_ms " << est.delays[i] * 1e3
              << '\n';
  }
  return 0;
}

int CmdEvaluate(const Options& opt) {
  const auto cfg = ResolveConfig(opt);
  const fs::path out(opt.out);
  fs::create_directories(out / "runs");
  const gtvv::ResultsTable table = gtvv::RunExperiment(cfg);
  gtvv::WriteResultsCsv(table, (out / "results.csv").string());
  WriteJson(gtvv::ResultsToJson(table, cfg), out / "results.json");
  int failures = 0;
  for (const auto& r : table.runs) {
    if (!r.ok) {
      ++failures;
      continue;
    }
    if (r.method == gtvv::Method::kSrp) continue;
    json j = gtvv::EstimateToJson(r.estimate);
    j["doa_error_deg"] = r.match.doa_error * 180.0 / std::numbers::pi;
    j["detections"] = r.match.detections;
    const std::string name = std::string(gtvv::MethodName(r.method)) + "_L" +
                             std::to_string(r.order) + "_rt" + std::to_string(r.rt_index) +
                             "_s" + std::to_string(r.scene_index) + ".json";
    WriteJson(j, out / "runs" / name);
  }
  std::cout << "method,order,rt60,doa_deg,refl_deg,detections,delay_s\n";
  for (const auto& c : table.cells) {
    std::cout << gtvv::MethodName(c.method) << ',' << c.order << ',' << c.rt60 << ','
              << c.mean_doa_error_deg << ',' << c.mean_reflection_error_deg << ','
              << c.mean_detections << ',' << c.mean_delay_error_s << '\n';
  }
  if (failures) std::cout << failures << " run(s) failed, see results.csv footer\n";
  return 0;
}

int CmdTraces(const Options& opt) {
  const auto cfg = ResolveConfig(opt);
  fs::create_directories(opt.out);
  if (!opt.input.empty() && fs::path(opt.input).extension() == ".csv") {
    gtvv::DumpTraces(gtvv::ReadGtvvCsv(opt.input), (fs::path(opt.out) / "traces.csv").string());
    return 0;
  }
  gtvv::Direction truth;
  gtvv::AmbisonicSignal sig;
  if (opt.input.empty()) {
    SimulatedRun run = Simulate(cfg, opt.rt, opt.scene);
    truth = run.scene.direct().direction;
    sig = std::move(run.signal);
  } else {
    if (!opt.doa_az_deg || !opt.doa_el_deg) {
      throw gtvv::ConfigError("traces from a WAV needs --doa-az and --doa-el");
    }
    sig = gtvv::ReadAmbisonicWav(opt.input);
  }
  if (opt.doa_az_deg && opt.doa_el_deg) {
    truth = gtvv::Direction::FromDegrees(*opt.doa_az_deg, *opt.doa_el_deg);
  }
  const int order = opt.order ? *opt.order : sig.order();
  const auto spec = gtvv::Stft(sig.Truncated(order), cfg.win_len, cfg.hop);
  auto est = EstimatorFor(cfg, order);
  const auto h = gtvv::HTdvv(spec, est);
  est.reference = gtvv::MakeReferenceBeam(truth, order);
  const auto g = gtvv::EstimateGtvv(spec, est);
  gtvv::DumpTraces(h, (fs::path(opt.out) / "traces_htdvv.csv").string());
  gtvv::DumpTraces(g, (fs::path(opt.out) / "traces_gtvv.csv").string());
  std::cout << "negative-lag ratio htdvv " << gtvv::NegativeLagRatio(h) << " gtvv "
            << gtvv::NegativeLagRatio(g) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GTVV multipath analysis for Ambisonic recordings"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "experiment JSON")->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--seed", opt.seed, "override the master seed");
    cmd->add_option("--order", opt.order, "SH order")->check(CLI::Range(1, 4));
    cmd->add_option("--method", opt.method, "gtvv, htdvv or srp")
        ->check(CLI::IsMember({"gtvv", "htdvv", "srp"}));
  };
  auto add_run_select = [&](CLI::App* cmd) {
    cmd->add_option("--scene", opt.scene, "placement index");
    cmd->add_option("--rt", opt.rt, "rt60 index");
  };
  auto add_doa = [&](CLI::App* cmd) {
    cmd->add_option("--doa-az", opt.doa_az_deg, "steering azimuth, degrees");
    cmd->add_option("--doa-el", opt.doa_el_deg, "steering elevation, degrees");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "render one scene to scene.json + signal.wav");
  add_common(simulate);
  add_run_select(simulate);
  CLI::App* estimate = app.add_subcommand("estimate", "GTVV / H-TDVV / SRP from a recording");
  add_common(estimate);
  add_run_select(estimate);
  add_doa(estimate);
  estimate->add_option("--input", opt.input, "Ambisonic WAV (simulated when omitted)");
  CLI::App* infer = app.add_subcommand("infer", "S-OMP on a GTVV CSV");
  add_common(infer);
  infer->add_option("--input", opt.input, "GTVV CSV from 'estimate'");
  CLI::App* evaluate = app.add_subcommand("evaluate", "full sweep, results.csv/json");
  add_common(evaluate);
  CLI::App* traces = app.add_subcommand("traces", "|v(t)| traces for plotting");
  add_common(traces);
  add_run_select(traces);
  add_doa(traces);
  traces->add_option("--input", opt.input, "GTVV CSV or Ambisonic WAV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return CmdSimulate(opt);
    if (estimate->parsed()) return CmdEstimate(opt);
    if (infer->parsed()) return CmdInfer(opt);
    if (evaluate->parsed()) return CmdEvaluate(opt);
    if (traces->parsed()) return CmdTraces(opt);
  } catch (const gtvv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gtvv::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gtvv::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
