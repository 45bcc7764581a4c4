#pragma once

#include <string>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/model.hpp"

namespace skiptrack::testing {

/// Individual with the given cycle lengths, X rows and baseline z.
inline IndividualRecord person(const std::string& id, const std::vector<double>& lengths,
                               const std::vector<std::vector<double>>& x, const std::vector<double>& z) {
  IndividualRecord r;
  r.id = id;
  r.z = z;
  for (std::size_t j = 0; j < lengths.size(); ++j) r.cycles.push_back({lengths[j], x[j]});
  return r;
}

/// Intercept-only X and Z.
inline IndividualRecord plain(const std::string& id, const std::vector<double>& lengths) {
  return person(id, lengths, std::vector<std::vector<double>>(lengths.size(), {1.0}), {1.0});
}

/// State with every cycle unskipped and neutral parameters.
inline ModelState neutral_state(const CycleDataset& data, int k_skip = 3) {
  ModelState s;
  s.c.assign(data.num_cycles(), 1);
  s.pi.assign(static_cast<std::size_t>(k_skip), 1.0 / k_skip);
  s.tau.assign(data.num_individuals(), 1.0);
  s.b.assign(data.num_individuals(), 0.0);
  s.beta.assign(data.mean_dim(), 0.0);
  s.gamma.assign(data.regularity_dim(), 0.0);
  s.rho = 1.0;
  s.phi = 1.0;
  return s;
}

}  // namespace skiptrack::testing
