#ifndef GTVV_BASELINES_H_
#define GTVV_BASELINES_H_

#include <string>
#include <vector>

#include "gtvv/dictionary.h"
#include "gtvv/spectral.h"
#include "gtvv/velocity.h"

namespace gtvv {

// GTVV with the omnidirectional channel as reference. Runs the exact same
// estimator path as EstimateGtvv; only the weights differ.
GtvvMatrix HTdvv(const SpectrumTensor& spec, const EstimatorConfig& cfg);

// Plain steered-response power over the dictionary (no PHAT weighting).
struct PowerMap {
  std::vector<double> values;  // aligned with Dictionary::directions()

  int Argmax() const;  // lowest index on ties
};

PowerMap SrpMap(const SpectrumTensor& spec, const Dictionary& dict);

// CSV with columns direction_deg_az, direction_deg_el, power.
void WritePowerMapCsv(const PowerMap& map, const Dictionary& dict,
                      const std::string& path);

}  // namespace gtvv

#endif  // GTVV_BASELINES_H_
