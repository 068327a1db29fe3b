#include "gtvv/experiment.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "gtvv/baselines.h"
#include "gtvv/errors.h"
#include "gtvv/wav.h"

namespace gtvv {

namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Eigen::Vector3d ReadVec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json Vec3ToJson(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

void RejectUnknownKeys(const json& j, const std::set<std::string>& known,
                       const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

bool InsideWithMargin(const Eigen::Vector3d& p, const Eigen::Vector3d& room,
                      double margin) {
  return (p.array() >= margin).all() && (p.array() <= room.array() - margin).all();
}

json DoubleOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kSrp: return "srp";
    case Method::kHTdvv: return "htdvv";
    case Method::kGtvv: return "gtvv";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  if (name == "srp") return Method::kSrp;
  if (name == "htdvv") return Method::kHTdvv;
  if (name == "gtvv") return Method::kGtvv;
  throw ConfigError("unknown method '" + name + "' (expected gtvv, htdvv or srp)");
}

long ExperimentConfig::SourceLength() const {
  // One extra second of margin beyond the estimator's frames.
  return static_cast<long>(seg_count * frames_per_seg - 1) * hop + win_len +
         std::lround(fs);
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if ((room.array() <= 0.0).any()) fail("room dimensions must be positive");
  if (rt60s.empty()) fail("rt60 list is empty");
  for (double rt : rt60s) {
    if (!(rt > 0.0)) fail("rt60 values must be positive");
    try {
      SabineReflectionCoefficient(room, rt);
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }
  }
  if (placements.empty() && num_scenes < 1) fail("num_scenes must be >= 1");
  if (min_wall_distance < 0.0 || 2.0 * min_wall_distance >= room.minCoeff()) {
    fail("min_wall_distance does not leave room for placements");
  }
  for (const Placement& p : placements) {
    if (!InsideWithMargin(p.src, room, 1e-9) || !InsideWithMargin(p.mic, room, 1e-9)) {
      fail("placement outside the room");
    }
    if ((p.src - p.mic).norm() == 0.0) fail("source and microphone coincide");
  }
  if (!(fs > 0.0)) fail("fs must be positive");
  if (orders.empty()) fail("orders list is empty");
  int max_order = 0;
  for (int order : orders) {
    if (order < 1 || order > kMaxShOrder) fail("orders must lie in [1, 8]");
    if (IterationCap(order) < 1 || IterationCap(order) > NumChannels(order)) {
      fail("iteration cap for order " + std::to_string(order) +
           " must lie in [1, (L+1)^2]");
    }
    max_order = std::max(max_order, order);
  }
  if (dict_scheme == GridScheme::kFibonacci && dict_size < NumChannels(max_order)) {
    fail("dictionary size below the channel count");
  }
  if (dict_scheme == GridScheme::kFile && dict_file.empty()) {
    fail("dictionary scheme 'file' needs dictionary.file");
  }
  if (win_len < 2 || (win_len & (win_len - 1)) != 0) fail("win_len must be a power of two");
  if (hop < 1 || win_len % hop != 0) fail("hop must divide win_len");
  if (seg_count < 2) fail("estimator.seg_count must be >= 2");
  if (frames_per_seg < 1) fail("estimator.frames_per_seg must be >= 1");
  if (!(diagonal_load >= 0.0)) fail("estimator.diagonal_load must be >= 0");
  if (!(gate_deg > 0.0 && gate_deg <= 180.0)) fail("gate_deg must lie in (0, 180]");
  if (image_max_order < 0) fail("image_max_order must be >= 0");
  if (methods.empty()) fail("methods list is empty");
  if (std::isnan(snr_db)) fail("snr_db is NaN");
}

ExperimentConfig ExperimentConfigFromJson(const json& j) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RejectUnknownKeys(j,
                      {"room", "rt60", "placements", "num_scenes", "placement_seed",
                       "min_wall_distance", "min_source_distance", "snr_db", "fs",
                       "orders", "dictionary", "iteration_caps", "seed",
                       "image_max_order", "stft", "estimator", "gate_deg",
                       "source_wav", "methods", "output_dir"},
                      "config");
    if (j.contains("room")) cfg.room = ReadVec3(j["room"], "room");
    if (j.contains("rt60")) cfg.rt60s = j["rt60"].get<std::vector<double>>();
    if (j.contains("placements")) {
      cfg.placements.clear();
      for (const json& p : j["placements"]) {
        RejectUnknownKeys(p, {"src", "mic"}, "placement");
        cfg.placements.push_back({ReadVec3(p.at("src"), "src"), ReadVec3(p.at("mic"), "mic")});
      }
    }
    if (j.contains("num_scenes")) cfg.num_scenes = j["num_scenes"].get<int>();
    if (j.contains("placement_seed")) cfg.placement_seed = j["placement_seed"].get<std::uint64_t>();
    if (j.contains("min_wall_distance")) cfg.min_wall_distance = j["min_wall_distance"].get<double>();
    if (j.contains("min_source_distance")) cfg.min_source_distance = j["min_source_distance"].get<double>();
    if (j.contains("snr_db")) {
      const json& snr = j["snr_db"];
      if (snr.is_null() || (snr.is_string() && snr.get<std::string>() == "inf")) {
        cfg.snr_db = kNoNoise;
      } else {
        cfg.snr_db = snr.get<double>();
      }
    }
    if (j.contains("fs")) cfg.fs = j["fs"].get<double>();
    if (j.contains("orders")) cfg.orders = j["orders"].get<std::vector<int>>();
    if (j.contains("dictionary")) {
      const json& d = j["dictionary"];
      RejectUnknownKeys(d, {"size", "scheme", "file"}, "dictionary");
      if (d.contains("size")) cfg.dict_size = d["size"].get<int>();
      if (d.contains("scheme")) {
        const std::string scheme = d["scheme"].get<std::string>();
        if (scheme == "fibonacci") {
          cfg.dict_scheme = GridScheme::kFibonacci;
        } else if (scheme == "file") {
          cfg.dict_scheme = GridScheme::kFile;
        } else {
          throw ConfigError("dictionary.scheme must be 'fibonacci' or 'file'");
        }
      }
      if (d.contains("file")) cfg.dict_file = d["file"].get<std::string>();
    }
    if (j.contains("iteration_caps")) {
      const json& c = j["iteration_caps"];
      RejectUnknownKeys(c, {"foa", "hoa"}, "iteration_caps");
      if (c.contains("foa")) cfg.iteration_cap_foa = c["foa"].get<int>();
      if (c.contains("hoa")) cfg.iteration_cap_hoa = c["hoa"].get<int>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("image_max_order")) cfg.image_max_order = j["image_max_order"].get<int>();
    if (j.contains("stft")) {
      const json& s = j["stft"];
      RejectUnknownKeys(s, {"win_len", "hop"}, "stft");
      if (s.contains("win_len")) cfg.win_len = s["win_len"].get<int>();
      if (s.contains("hop")) cfg.hop = s["hop"].get<int>();
    }
    if (j.contains("estimator")) {
      const json& e = j["estimator"];
      RejectUnknownKeys(e, {"seg_count", "frames_per_seg", "diagonal_load"}, "estimator");
      if (e.contains("seg_count")) cfg.seg_count = e["seg_count"].get<int>();
      if (e.contains("frames_per_seg")) cfg.frames_per_seg = e["frames_per_seg"].get<int>();
      if (e.contains("diagonal_load")) cfg.diagonal_load = e["diagonal_load"].get<double>();
    }
    if (j.contains("gate_deg")) cfg.gate_deg = j["gate_deg"].get<double>();
    if (j.contains("source_wav")) cfg.source_wav = j["source_wav"].get<std::string>();
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const json& m : j["methods"]) cfg.methods.push_back(ParseMethod(m.get<std::string>()));
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ExperimentConfigFromJson(j);
}

json ToJson(const ExperimentConfig& cfg) {
  json j;
  j["room"] = Vec3ToJson(cfg.room);
  j["rt60"] = cfg.rt60s;
  j["placements"] = json::array();
  for (const Placement& p : cfg.placements) {
    j["placements"].push_back({{"src", Vec3ToJson(p.src)}, {"mic", Vec3ToJson(p.mic)}});
  }
  j["num_scenes"] = cfg.num_scenes;
  j["placement_seed"] = cfg.placement_seed;
  j["min_wall_distance"] = cfg.min_wall_distance;
  j["min_source_distance"] = cfg.min_source_distance;
  j["snr_db"] = DoubleOrNull(cfg.snr_db);
  j["fs"] = cfg.fs;
  j["orders"] = cfg.orders;
  j["dictionary"] = {{"size", cfg.dict_size},
                     {"scheme", cfg.dict_scheme == GridScheme::kFile ? "file" : "fibonacci"},
                     {"file", cfg.dict_file}};
  j["iteration_caps"] = {{"foa", cfg.iteration_cap_foa}, {"hoa", cfg.iteration_cap_hoa}};
  j["seed"] = cfg.seed;
  j["image_max_order"] = cfg.image_max_order;
  j["stft"] = {{"win_len", cfg.win_len}, {"hop", cfg.hop}};
  j["estimator"] = {{"seg_count", cfg.seg_count},
                    {"frames_per_seg", cfg.frames_per_seg},
                    {"diagonal_load", cfg.diagonal_load}};
  j["gate_deg"] = cfg.gate_deg;
  j["source_wav"] = cfg.source_wav;
  j["methods"] = json::array();
  for (Method m : cfg.methods) j["methods"].push_back(MethodName(m));
  j["output_dir"] = cfg.output_dir;
  return j;
}

std::vector<Placement> ResolvePlacements(const ExperimentConfig& cfg) {
  if (!cfg.placements.empty()) return cfg.placements;
  std::mt19937_64 rng(cfg.placement_seed);
  auto draw = [&] {
    Eigen::Vector3d p;
    for (int a = 0; a < 3; ++a) {
      std::uniform_real_distribution<double> axis(cfg.min_wall_distance,
                                                  cfg.room[a] - cfg.min_wall_distance);
      p[a] = axis(rng);
    }
    return p;
  };
  std::vector<Placement> out;
  for (int i = 0; i < cfg.num_scenes; ++i) {
    Placement p{draw(), draw()};
    for (int attempt = 0; (p.src - p.mic).norm() < cfg.min_source_distance; ++attempt) {
      if (attempt > 1000) throw ConfigError("cannot satisfy min_source_distance in this room");
      p.src = draw();
    }
    out.push_back(p);
  }
  return out;
}

std::vector<double> MakeDrySource(const ExperimentConfig& cfg, std::uint64_t seed) {
  const long length = cfg.SourceLength();
  if (cfg.source_wav.empty()) return MakeBurstSource(length / cfg.fs, cfg.fs, seed);
  const MonoAudio audio = ReadMonoWav(cfg.source_wav);
  if (std::abs(audio.fs - cfg.fs) > 0.5) {
    throw ConfigError(cfg.source_wav + " is sampled at " + std::to_string(audio.fs) +
                      " Hz, config expects " + std::to_string(cfg.fs));
  }
  if (audio.samples.empty()) throw ConfigError(cfg.source_wav + " is empty");
  std::vector<double> out(length);
  for (long i = 0; i < length; ++i) out[i] = audio.samples[i % audio.samples.size()];
  return out;
}

const ResultCell& ResultsTable::Cell(Method m, int order, double rt60) const {
  for (const ResultCell& c : cells) {
    if (c.method == m && c.order == order && c.rt60 == rt60) return c;
  }
  throw InvalidArgument("no result cell for the requested method/order/rt60");
}

namespace {

// All methods and orders for one (rt60, placement) pair.
std::vector<RunRecord> RunScene(const ExperimentConfig& cfg, const Placement& placement,
                                int rt_index, int scene_index,
                                const std::map<int, Dictionary>& dicts) {
  const bool want_srp = std::find(cfg.methods.begin(), cfg.methods.end(), Method::kSrp) != cfg.methods.end();
  const bool want_htdvv = std::find(cfg.methods.begin(), cfg.methods.end(), Method::kHTdvv) != cfg.methods.end();
  const bool want_gtvv = std::find(cfg.methods.begin(), cfg.methods.end(), Method::kGtvv) != cfg.methods.end();
  const double gate = cfg.gate_deg / kRadToDeg;

  std::vector<RunRecord> records;
  auto fail_all = [&](const std::string& why) {
    for (int order : cfg.orders) {
      for (Method m : cfg.methods) {
        RunRecord r{rt_index, scene_index, order, m, false, why, {}, {}, {}};
        records.push_back(r);
      }
    }
    return records;
  };

  GroundTruthScene scene;
  AmbisonicSignal noisy;
  try {
    scene = ImageSourceScene(cfg.room, placement.src, placement.mic, cfg.rt60s[rt_index],
                             cfg.image_max_order, cfg.fs);
    const std::uint64_t run_seed = cfg.seed * 1000003ULL + rt_index * 1009ULL + scene_index;
    const std::vector<double> source = MakeDrySource(cfg, run_seed);
    const int max_order = *std::max_element(cfg.orders.begin(), cfg.orders.end());
    noisy = AddNoise(EncodeScene(scene, source, max_order), cfg.snr_db,
                     run_seed ^ 0x9E3779B97F4A7C15ULL);
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  for (int order : cfg.orders) {
    const Dictionary& dict = dicts.at(order);
    SpectrumTensor spec;
    try {
      spec = Stft(noisy.Truncated(order), cfg.win_len, cfg.hop);
    } catch (const std::exception& e) {
      for (Method m : cfg.methods) records.push_back({rt_index, scene_index, order, m, false, e.what(), {}, {}, {}});
      continue;
    }
    EstimatorConfig est_cfg{cfg.seg_count, cfg.frames_per_seg, cfg.diagonal_load,
                            MakeOmniBeam(order)};
    const SompOptions somp_options{cfg.IterationCap(order), true};

    if (want_srp) {
      RunRecord r{rt_index, scene_index, order, Method::kSrp, false, {}, {}, {}, {}};
      try {
        const PowerMap map = SrpMap(spec, dict);
        r.doa = dict.directions()[map.Argmax()];
        r.match.doa_error = AngularDistance(r.doa, scene.direct().direction);
        r.match.num_first_order = static_cast<int>(
            std::count(scene.first_order_flags.begin(), scene.first_order_flags.end(), true));
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      records.push_back(r);
    }

    RunRecord h{rt_index, scene_index, order, Method::kHTdvv, false, {}, {}, {}, {}};
    if (want_htdvv || want_gtvv) {
      try {
        const GtvvMatrix v = HTdvv(spec, est_cfg);
        h.estimate = Somp(v, dict, somp_options);
        h.match = MatchToTruth(h.estimate, scene, gate);
        h.doa = h.estimate.directions.at(0);
        h.ok = true;
      } catch (const std::exception& e) {
        h.error = e.what();
      }
    }
    if (want_htdvv) records.push_back(h);

    if (want_gtvv) {
      RunRecord g{rt_index, scene_index, order, Method::kGtvv, false, {}, {}, {}, {}};
      if (!h.ok) {
        g.error = "no H-TDVV DoA to steer the reference beam: " + h.error;
      } else {
        try {
          est_cfg.reference = MakeReferenceBeam(h.doa, order);
          const GtvvMatrix v = EstimateGtvv(spec, est_cfg);
          g.estimate = Somp(v, dict, somp_options);
          g.match = MatchToTruth(g.estimate, scene, gate);
          g.doa = g.estimate.directions.at(0);
          g.ok = true;
        } catch (const std::exception& e) {
          g.error = e.what();
        }
      }
      records.push_back(g);
    }
  }
  return records;
}

}  // namespace

ResultsTable RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const std::vector<Placement> placements = ResolvePlacements(cfg);
  std::map<int, Dictionary> dicts;
  for (int order : cfg.orders) {
    if (!dicts.contains(order)) {
      dicts.emplace(order, BuildDictionary(cfg.dict_size, order, cfg.dict_scheme, cfg.dict_file));
    }
  }

  const int n_rt = static_cast<int>(cfg.rt60s.size());
  const int n_scenes = static_cast<int>(placements.size());
  std::vector<std::vector<RunRecord>> per_run(n_rt * n_scenes);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n_rt * n_scenes; ++i) {
    per_run[i] = RunScene(cfg, placements[i % n_scenes], i / n_scenes, i % n_scenes, dicts);
  }

  ResultsTable table;
  for (auto& run : per_run) {
    for (RunRecord& r : run) table.runs.push_back(std::move(r));
  }

  for (Method m : cfg.methods) {
    for (int order : cfg.orders) {
      for (int rt = 0; rt < n_rt; ++rt) {
        ResultCell cell;
        cell.method = m;
        cell.order = order;
        cell.rt60 = cfg.rt60s[rt];
        double doa_sum = 0.0, angle_sum = 0.0, delay_sum = 0.0;
        int detections = 0;
        for (const RunRecord& r : table.runs) {
          if (r.method != m || r.order != order || r.rt_index != rt) continue;
          if (!r.ok) {
            ++cell.failures;
            continue;
          }
          ++cell.runs;
          doa_sum += r.match.doa_error;
          detections += r.match.detections;
          angle_sum += r.match.mean_angular_error * r.match.detections;
          delay_sum += r.match.mean_delay_error * r.match.detections;
        }
        cell.matched_reflections = detections;
        cell.mean_doa_error_deg = cell.runs ? doa_sum / cell.runs * kRadToDeg : kNan;
        cell.mean_detections = cell.runs ? static_cast<double>(detections) / cell.runs : kNan;
        if (m == Method::kSrp) {
          cell.mean_detections = kNan;
          cell.mean_reflection_error_deg = kNan;
          cell.mean_delay_error_s = kNan;
        } else {
          cell.mean_reflection_error_deg = detections ? angle_sum / detections * kRadToDeg : kNan;
          cell.mean_delay_error_s = detections ? delay_sum / detections : kNan;
        }
        table.cells.push_back(cell);
      }
    }
  }
  return table;
}

void WriteResultsCsv(const ResultsTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "method,order,rt60,mean_doa_error_deg,mean_reflection_error_deg,"
         "mean_detections,mean_delay_error_s,runs,failures\n";
  out << std::setprecision(8);
  auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(8);
    if (std::isfinite(v)) s << v; else s << "nan";
    return s.str();
  };
  for (const ResultCell& c : table.cells) {
    out << MethodName(c.method) << ',' << c.order << ',' << c.rt60 << ','
        << num(c.mean_doa_error_deg) << ',' << num(c.mean_reflection_error_deg) << ','
        << num(c.mean_detections) << ',' << num(c.mean_delay_error_s) << ',' << c.runs
        << ',' << c.failures << '\n';
  }
  int failures = 0;
  for (const RunRecord& r : table.runs) failures += r.ok ? 0 : 1;
  out << "# failed runs: " << failures << '\n';
  for (const RunRecord& r : table.runs) {
    if (r.ok) continue;
    out << "# " << MethodName(r.method) << " order " << r.order << " rt#" << r.rt_index
        << " scene " << r.scene_index << ": " << r.error << '\n';
  }
}

json ResultsToJson(const ResultsTable& table, const ExperimentConfig& cfg) {
  json j;
  j["metadata"] = {
      {"sh_convention", "real SN3D, ACN ordering"},
      {"dictionary", cfg.dict_scheme == GridScheme::kFile ? "file" : "fibonacci spiral"},
      {"doa_unit", "one estimate per analysis segment (seg_count x frames_per_seg frames)"},
      {"srp_note", "plain steered-response power, no PHAT weighting"},
      {"gtvv_reference", "maximum-directivity beam steered at the H-TDVV DoA"},
      {"speed_of_sound", kSpeedOfSound},
  };
  j["config"] = ToJson(cfg);
  j["resolved_placements"] = json::array();
  for (const Placement& p : ResolvePlacements(cfg)) {
    j["resolved_placements"].push_back({{"src", Vec3ToJson(p.src)}, {"mic", Vec3ToJson(p.mic)}});
  }
  j["cells"] = json::array();
  for (const ResultCell& c : table.cells) {
    j["cells"].push_back({{"method", MethodName(c.method)},
                          {"order", c.order},
                          {"rt60", c.rt60},
                          {"mean_doa_error_deg", DoubleOrNull(c.mean_doa_error_deg)},
                          {"mean_reflection_error_deg", DoubleOrNull(c.mean_reflection_error_deg)},
                          {"mean_detections", DoubleOrNull(c.mean_detections)},
                          {"mean_delay_error_s", DoubleOrNull(c.mean_delay_error_s)},
                          {"runs", c.runs},
                          {"failures", c.failures}});
  }
  j["failures"] = json::array();
  for (const RunRecord& r : table.runs) {
    if (r.ok) continue;
    j["failures"].push_back({{"method", MethodName(r.method)},
                             {"order", r.order},
                             {"rt_index", r.rt_index},
                             {"scene", r.scene_index},
                             {"error", r.error}});
  }
  return j;
}

json SceneToJson(const GroundTruthScene& scene) {
  json j;
  j["room"] = Vec3ToJson(scene.room);
  j["src"] = Vec3ToJson(scene.src);
  j["mic"] = Vec3ToJson(scene.mic);
  j["rt60"] = scene.rt60;
  j["fs"] = scene.fs;
  j["reflection_coefficient"] = scene.reflection_coefficient;
  j["wavefronts"] = json::array();
  for (size_t i = 0; i < scene.wavefronts.size(); ++i) {
    const Wavefront& w = scene.wavefronts[i];
    j["wavefronts"].push_back({{"azimuth_deg", w.direction.azimuth_deg()},
                               {"elevation_deg", w.direction.elevation_deg()},
                               {"toa_s", w.toa},
                               {"gain", w.gain},
                               {"reflection_order", w.reflection_order},
                               {"first_order", static_cast<bool>(scene.first_order_flags[i])}});
  }
  return j;
}

json EstimateToJson(const EstimateSet& est) {
  json j;
  j["directions"] = json::array();
  for (size_t i = 0; i < est.directions.size(); ++i) {
    j["directions"].push_back({{"azimuth_deg", est.directions[i].azimuth_deg()},
                               {"elevation_deg", est.directions[i].elevation_deg()},
                               {"atom", est.atoms[i]},
                               {"delay_ms", est.delays[i] * 1e3}});
  }
  j["residual_norms"] = est.residual_norms;
  j["terminated_early"] = est.terminated_early;
  if (est.terminated_early) j["termination_reason"] = est.termination_reason;
  return j;
}

void DumpTraces(const GtvvMatrix& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "time_s";
  for (int c = 0; c < v.channels(); ++c) out << ",ch" << c;
  out << ",norm\n" << std::setprecision(10);
  for (int q = 0; q < v.lags(); ++q) {
    out << v.time_axis[q];
    for (int c = 0; c < v.channels(); ++c) out << ',' << std::abs(v.data(c, q));
    out << ',' << v.data.col(q).norm() << '\n';
  }
}

void WriteGtvvCsv(const GtvvMatrix& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "time_s";
  for (int c = 0; c < v.channels(); ++c) out << ",ch" << c;
  out << '\n' << std::setprecision(17);
  for (int q = 0; q < v.lags(); ++q) {
    out << v.time_axis[q];
    for (int c = 0; c < v.channels(); ++c) out << ',' << v.data(c, q);
    out << '\n';
  }
}

GtvvMatrix ReadGtvvCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + " is empty");
  const int channels = static_cast<int>(std::count(line.begin(), line.end(), ','));
  std::vector<double> times;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(row.size()) != channels + 1) {
      throw ConfigError(path + ": ragged row");
    }
    times.push_back(row[0]);
    columns.emplace_back(row.begin() + 1, row.end());
  }
  const int lags = static_cast<int>(times.size());
  GtvvMatrix v;
  if (lags == 0) {
    v.data.resize(channels, 0);
    return v;
  }
  if (lags < 2 || (lags & (lags - 1)) != 0) {
    throw ConfigError(path + ": lag count must be a power of two");
  }
  v.data.resize(channels, lags);
  v.time_axis = times;
  for (int q = 0; q < lags; ++q) {
    for (int c = 0; c < channels; ++c) v.data(c, q) = columns[q][c];
  }
  v.fs = 1.0 / (times[1] - times[0]);
  if (times[lags / 2] != 0.0) throw ConfigError(path + ": t = 0 must sit at row T/2");
  return v;
}

}  // namespace gtvv
