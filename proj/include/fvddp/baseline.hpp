#pragma once

#include <map>
#include <string>

#include "fvddp/errors.hpp"

namespace fvddp {

// Offspring distribution P0 of the mutation measure alpha = theta * P0.
// Atomic baselines list their atom masses per label; the part of the mass
// not covered by the table backs labels that have not been enumerated.
// Nonatomic baselines put zero mass on every individual label.
class Baseline {
 public:
  enum class Kind { kNonatomic, kAtomic };

  static Baseline nonatomic() { return Baseline(Kind::kNonatomic, {}); }

  static Baseline atomic(std::map<std::string, double> atom_masses) {
    double total = 0.0;
    for (const auto& [label, p] : atom_masses) {
      if (p <= 0.0)
        throw ValidationError("atomic baseline masses must be positive (" +
                              label + ")");
      total += p;
    }
    if (total > 1.0 + 1e-12)
      throw ValidationError("atomic baseline masses must sum to at most 1");
    return Baseline(Kind::kAtomic, std::move(atom_masses));
  }

  Kind kind() const { return kind_; }
  bool is_atomic() const { return kind_ == Kind::kAtomic; }

  const std::map<std::string, double>& atom_masses() const { return atoms_; }

  // P0 mass at a single label; 0 for nonatomic baselines or unlisted atoms.
  double atom_mass(const std::string& label) const {
    auto it = atoms_.find(label);
    return it == atoms_.end() ? 0.0 : it->second;
  }

  bool operator==(const Baseline& other) const {
    return kind_ == other.kind_ && atoms_ == other.atoms_;
  }

 private:
  Baseline(Kind kind, std::map<std::string, double> atoms)
      : kind_(kind), atoms_(std::move(atoms)) {}

  Kind kind_;
  std::map<std::string, double> atoms_;
};

}  // namespace fvddp
