#include "gtvv/baselines.h"

#include <fstream>
#include <iomanip>

#include "gtvv/errors.h"
#include "gtvv/kernels.h"

namespace gtvv {

GtvvMatrix HTdvv(const SpectrumTensor& spec, const EstimatorConfig& cfg) {
  EstimatorConfig omni = cfg;
  omni.reference = MakeOmniBeam(cfg.reference.order);
  return EstimateGtvv(spec, omni);
}

int PowerMap::Argmax() const {
  if (values.empty()) throw InvalidArgument("empty power map");
  int best = 0;
  for (int j = 1; j < static_cast<int>(values.size()); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return best;
}

PowerMap SrpMap(const SpectrumTensor& spec, const Dictionary& dict) {
  return {kernels::SteeredPowerParallel(spec, dict.atoms())};
}

void WritePowerMapCsv(const PowerMap& map, const Dictionary& dict,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "direction_deg_az,direction_deg_el,power\n" << std::setprecision(10);
  for (int j = 0; j < dict.size(); ++j) {
    out << dict.directions()[j].azimuth_deg() << ','
        << dict.directions()[j].elevation_deg() << ',' << map.values[j] << '\n';
  }
}

}  // namespace gtvv
