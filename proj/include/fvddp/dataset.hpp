#pragma once

#include <string>
#include <vector>

#include "fvddp/baseline.hpp"
#include "fvddp/errors.hpp"

namespace fvddp {

// Ordered collection times with the observed type labels at each time.
// Zero-data collection times are legal.
struct Dataset {
  double theta = 1.0;
  Baseline baseline = Baseline::nonatomic();
  std::vector<double> times;
  std::vector<std::vector<std::string>> observations;

  // Merges batches at identical timestamps and checks ordering.
  Dataset canonical() const;
  void validate() const;

  // Sub-dataset over the time indices [first, last].
  Dataset slice(size_t first, size_t last) const;
};

}  // namespace fvddp
