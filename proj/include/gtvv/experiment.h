#ifndef GTVV_EXPERIMENT_H_
#define GTVV_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "gtvv/dictionary.h"
#include "gtvv/room.h"
#include "gtvv/somp.h"
#include "gtvv/spectral.h"
#include "gtvv/velocity.h"

namespace gtvv {

enum class Method { kSrp, kHTdvv, kGtvv };

const char* MethodName(Method m);
// Throws ConfigError for unknown names.
Method ParseMethod(const std::string& name);

struct Placement {
  Eigen::Vector3d src;
  Eigen::Vector3d mic;
};

// Defaults: 5 x 4 x 2.8 m room, RT60 0.16 /
// 0.44 s, SNR 20 dB, 16 kHz, 64 ms Hamming frames at 75 % overlap, 770
// directions, 4 / 7 S-OMP iterations, 20 degree gate.
struct ExperimentConfig {
  Eigen::Vector3d room{5.0, 4.0, 2.8};
  std::vector<double> rt60s{0.16, 0.44};
  // Explicit placements; when empty, `num_scenes` are drawn from
  // `placement_seed` at least `min_wall_distance` from every wall.
  std::vector<Placement> placements;
  int num_scenes = 5;
  std::uint64_t placement_seed = 7;
  double min_wall_distance = 0.5;
  double min_source_distance = 1.0;
  double snr_db = 20.0;  // kNoNoise disables noise
  double fs = 16000.0;
  std::vector<int> orders{1, 2, 3, 4};
  int dict_size = 770;
  GridScheme dict_scheme = GridScheme::kFibonacci;
  std::string dict_file;
  int iteration_cap_foa = 4;
  int iteration_cap_hoa = 7;
  std::uint64_t seed = 1;
  int image_max_order = 3;
  int win_len = 1024;
  int hop = 256;
  int seg_count = 8;
  int frames_per_seg = 24;
  double diagonal_load = 1e-6;
  double gate_deg = 20.0;
  std::string source_wav;
  std::vector<Method> methods{Method::kSrp, Method::kHTdvv, Method::kGtvv};
  std::string output_dir = "gtvv_out";

  int IterationCap(int order) const {
    return order <= 1 ? iteration_cap_foa : iteration_cap_hoa;
  }
  // Samples of dry source needed to fill the estimator's frames.
  long SourceLength() const;
  // Throws ConfigError on the first invalid field.
  void Validate() const;
};

// Missing keys keep their defaults; unknown keys are rejected. Throws
// ConfigError.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);
ExperimentConfig LoadExperimentConfig(const std::string& path);
nlohmann::json ToJson(const ExperimentConfig& cfg);

// Explicit placements or the seeded random draw.
std::vector<Placement> ResolvePlacements(const ExperimentConfig& cfg);

// Dry source for a run: the configured WAV (fs must match, looped or cut to
// length) or a seeded burst source.
std::vector<double> MakeDrySource(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunRecord {
  int rt_index = 0;
  int scene_index = 0;
  int order = 0;
  Method method = Method::kSrp;
  bool ok = false;
  std::string error;
  MatchReport match;
  EstimateSet estimate;      // empty for SRP
  Direction doa;
};

struct ResultCell {
  Method method = Method::kSrp;
  int order = 0;
  double rt60 = 0.0;
  double mean_doa_error_deg = 0.0;
  double mean_reflection_error_deg = 0.0;  // pooled over matches
  double mean_detections = 0.0;
  double mean_delay_error_s = 0.0;         // pooled over matches
  int runs = 0;
  int failures = 0;
  int matched_reflections = 0;
};

struct ResultsTable {
  std::vector<ResultCell> cells;  // method-major, then order, then rt60
  std::vector<RunRecord> runs;

  const ResultCell& Cell(Method m, int order, double rt60) const;
};

// Simulate -> encode -> noise -> {SRP, H-TDVV + S-OMP, GTVV + S-OMP} ->
// match -> aggregate. Per-run failures are recorded, not thrown.
ResultsTable RunExperiment(const ExperimentConfig& cfg);

void WriteResultsCsv(const ResultsTable& table, const std::string& path);
nlohmann::json ResultsToJson(const ResultsTable& table, const ExperimentConfig& cfg);

nlohmann::json SceneToJson(const GroundTruthScene& scene);
nlohmann::json EstimateToJson(const EstimateSet& est);

// |v(t)| per channel plus the column 2-norm; header only for an empty
// matrix.
void DumpTraces(const GtvvMatrix& v, const std::string& path);
// Signed matrix, one row per lag: time_s, ch0, ch1, ...
void WriteGtvvCsv(const GtvvMatrix& v, const std::string& path);
GtvvMatrix ReadGtvvCsv(const std::string& path);

}  // namespace gtvv

#endif  // GTVV_EXPERIMENT_H_
