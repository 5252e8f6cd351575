#include "fvddp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fvddp {

namespace {

using nlohmann::json;

json baseline_to_json(const Baseline& baseline) {
  json out;
  if (baseline.is_atomic()) {
    out["kind"] = "atomic";
    json atoms = json::object();
    for (const auto& [label, mass] : baseline.atom_masses()) atoms[label] = mass;
    out["atoms"] = atoms;
  } else {
    out["kind"] = "nonatomic";
  }
  return out;
}

Baseline baseline_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ValidationError("baseline must be an object with a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "nonatomic") return Baseline::nonatomic();
  if (kind == "atomic") {
    std::map<std::string, double> atoms;
    for (const auto& [label, mass] : j.at("atoms").items())
      atoms.emplace(label, mass.get<double>());
    return Baseline::atomic(std::move(atoms));
  }
  throw ValidationError("unknown baseline kind: " + kind);
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("malformed JSON");
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
  if (!out) throw ValidationError("failed writing file: " + path);
}

}  // namespace

Dataset Dataset::canonical() const {
  if (times.size() != observations.size())
    throw ValidationError("times and observations must have equal length");
  Dataset out;
  out.theta = theta;
  out.baseline = baseline;
  for (size_t i = 0; i < times.size(); ++i) {
    if (!out.times.empty() && times[i] == out.times.back()) {
      auto& batch = out.observations.back();
      batch.insert(batch.end(), observations[i].begin(),
                   observations[i].end());
    } else {
      out.times.push_back(times[i]);
      out.observations.push_back(observations[i]);
    }
  }
  return out;
}

void Dataset::validate() const {
  if (theta <= 0.0)
    throw NonpositiveThetaError("dataset theta must be positive");
  if (times.size() != observations.size())
    throw ValidationError("times and observations must have equal length");
  if (times.empty()) throw ValidationError("dataset has no collection times");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("collection times must be strictly increasing");
}

Dataset Dataset::slice(size_t first, size_t last) const {
  if (first > last || last >= times.size())
    throw ValidationError("invalid dataset slice");
  Dataset out;
  out.theta = theta;
  out.baseline = baseline;
  out.times.assign(times.begin() + static_cast<long>(first),
                   times.begin() + static_cast<long>(last) + 1);
  out.observations.assign(
      observations.begin() + static_cast<long>(first),
      observations.begin() + static_cast<long>(last) + 1);
  return out;
}

std::string dataset_to_json(const Dataset& dataset) {
  json j;
  j["schema"] = kDatasetSchema;
  j["theta"] = dataset.theta;
  j["baseline"] = baseline_to_json(dataset.baseline);
  j["times"] = dataset.times;
  j["observations"] = dataset.observations;
  return j.dump(2) + "\n";
}

Dataset dataset_from_json(const std::string& text) {
  json j = parse(text);
  try {
    if (j.at("schema").get<std::string>() != kDatasetSchema)
      throw ValidationError("unsupported dataset schema");
    Dataset ds;
    ds.theta = j.at("theta").get<double>();
    ds.baseline = baseline_from_json(j.at("baseline"));
    ds.times = j.at("times").get<std::vector<double>>();
    ds.observations =
        j.at("observations").get<std::vector<std::vector<std::string>>>();
    ds = ds.canonical();
    ds.validate();
    return ds;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("dataset parse error: ") + e.what());
  }
}

Dataset load_dataset(const std::string& path) {
  return dataset_from_json(read_file(path));
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  write_file(path, dataset_to_json(dataset));
}

std::string state_to_json(const FVDDPState& state,
                          const Provenance& provenance) {
  json j;
  j["schema"] = kStateSchema;
  j["theta"] = state.theta();
  j["baseline"] = baseline_to_json(state.baseline());
  j["labels"] = state.registry().labels();
  json nodes = json::array();
  for (const auto& [node, w] : state.nodes()) {
    json row;
    row["m"] = node.values();
    row["w"] = w;
    nodes.push_back(row);
  }
  j["nodes"] = nodes;
  json prov;
  prov["command"] = provenance.command;
  prov["mode"] = provenance.mode;
  if (provenance.seed) prov["seed"] = *provenance.seed;
  if (provenance.particles) prov["particles"] = *provenance.particles;
  if (provenance.epsilon) prov["epsilon"] = *provenance.epsilon;
  if (provenance.time) prov["time"] = *provenance.time;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

FVDDPState state_from_json(const std::string& text, Provenance* provenance) {
  json j = parse(text);
  try {
    if (j.at("schema").get<std::string>() != kStateSchema)
      throw ValidationError("unsupported state schema");
    const double theta = j.at("theta").get<double>();
    Baseline baseline = baseline_from_json(j.at("baseline"));
    TypeRegistry registry(j.at("labels").get<std::vector<std::string>>());
    NodeWeights nodes;
    for (const auto& row : j.at("nodes")) {
      Node node(row.at("m").get<std::vector<int>>());
      if (!nodes.emplace(node, row.at("w").get<double>()).second)
        throw ValidationError("duplicate node row in state file");
    }
    FVDDPState state(theta, std::move(baseline), std::move(registry),
                     std::move(nodes));
    state.validate();
    if (provenance != nullptr && j.contains("provenance")) {
      const json& prov = j.at("provenance");
      provenance->command = prov.value("command", "");
      provenance->mode = prov.value("mode", "");
      if (prov.contains("seed"))
        provenance->seed = prov.at("seed").get<uint64_t>();
      if (prov.contains("particles"))
        provenance->particles = prov.at("particles").get<uint64_t>();
      if (prov.contains("epsilon"))
        provenance->epsilon = prov.at("epsilon").get<double>();
      if (prov.contains("time"))
        provenance->time = prov.at("time").get<double>();
    }
    return state;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("state parse error: ") + e.what());
  }
}

FVDDPState load_state(const std::string& path, Provenance* provenance) {
  return state_from_json(read_file(path), provenance);
}

void save_state(const FVDDPState& state, const Provenance& provenance,
                const std::string& path) {
  write_file(path, state_to_json(state, provenance));
}

}  // namespace fvddp
