#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fvddp/state.hpp"

namespace fvddp {

// Mixture summary: component count, how many top-weight nodes cover the
// usual mass quantiles, and a plot-ready row per node.
struct DiagnosticsReport {
  size_t components = 0;
  size_t nodes_for_mass90 = 0;
  size_t nodes_for_mass95 = 0;
  size_t nodes_for_mass99 = 0;
  struct Row {
    int cardinality;
    double log10_weight;
    int active_types;
  };
  std::vector<Row> rows;  // canonical node order
};

DiagnosticsReport diagnose(const FVDDPState& state);

// Smallest number of top-weight nodes whose mass reaches the fraction.
size_t nodes_covering(const FVDDPState& state, double mass_fraction);

// Tab-separated rendering of the report.
std::string render_report(const DiagnosticsReport& report);

}  // namespace fvddp
