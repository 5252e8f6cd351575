#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fvddp/dataset.hpp"
#include "fvddp/state.hpp"

namespace fvddp {

inline constexpr const char* kDatasetSchema = "fvddp-dataset-v1";
inline constexpr const char* kStateSchema = "fvddp-state-v1";

// Records how a state file was produced. Thread counts are deliberately
// excluded: outputs are invariant to them.
struct Provenance {
  std::string command;
  std::string mode;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> particles;
  std::optional<double> epsilon;
  std::optional<double> time;
};

Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path);

void save_state(const FVDDPState& state, const Provenance& provenance,
                const std::string& path);
FVDDPState load_state(const std::string& path,
                      Provenance* provenance = nullptr);

std::string dataset_to_json(const Dataset& dataset);
std::string state_to_json(const FVDDPState& state,
                          const Provenance& provenance);
Dataset dataset_from_json(const std::string& text);
FVDDPState state_from_json(const std::string& text,
                           Provenance* provenance = nullptr);

}  // namespace fvddp
