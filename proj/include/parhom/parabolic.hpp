#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parhom/dynkin.hpp"
#include "parhom/root_weyl.hpp"

namespace parhom {

/// True when the support of positive root r meets `psi`.
inline bool support_meets(const RootSystem& rs, int r, const Marking& psi) {
  const Coords& c = rs.root(r);
  for (int node : psi) {
    if (c[static_cast<std::size_t>(node - 1)] != 0) return true;
  }
  return false;
}

/// dim G/P for the parabolic marked at psi: positive roots whose support meets
/// psi, i.e. |Phi+| minus the Levi's positive roots.
inline int dim_flag(const RootSystem& rs, const Marking& psi) {
  int count = 0;
  for (int r = 0; r < rs.num_positive(); ++r) {
    if (support_meets(rs, r, psi)) ++count;
  }
  return count;
}

inline int dim_flag(const DynkinDiagram& d, const Marking& psi) {
  d.validate(psi);
  return dim_flag(RootSystem(d), psi);
}

/// Two standard parabolics P, Q over a common Borel, sharing a root system.
class ParabolicPair {
public:
  ParabolicPair(std::shared_ptr<const RootSystem> roots, Marking psi_p, Marking psi_q)
      : roots_(std::move(roots)), psi_p_(std::move(psi_p)), psi_q_(std::move(psi_q)) {
    roots_->diagram().validate(psi_p_);
    roots_->diagram().validate(psi_q_);
  }

  ParabolicPair(const DynkinDiagram& d, Marking psi_p, Marking psi_q)
      : ParabolicPair(std::make_shared<const RootSystem>(d), std::move(psi_p), std::move(psi_q)) {}

  const RootSystem& roots() const noexcept { return *roots_; }
  const std::shared_ptr<const RootSystem>& shared_roots() const noexcept { return roots_; }
  const DynkinDiagram& diagram() const noexcept { return roots_->diagram(); }
  const Marking& psi_p() const noexcept { return psi_p_; }
  const Marking& psi_q() const noexcept { return psi_q_; }
  /// Marking of P ∩ Q.
  Marking psi_intersection_parabolic() const { return psi_p_.union_with(psi_q_); }

  /// The same roots with P and Q exchanged.
  ParabolicPair transposed() const { return ParabolicPair(roots_, psi_q_, psi_p_); }

private:
  std::shared_ptr<const RootSystem> roots_;
  Marking psi_p_;
  Marking psi_q_;
};

struct CycleDescriptor {
  std::string type_string; // "" for a point
  Marking marking;         // on the cycle's own diagram
  int dim = 0;
  bool is_point = false;
  bool is_whole_space = false;
};

/// The Q-cycle Q.x0 in G/P: L_Q / (L_Q ∩ P).
inline CycleDescriptor cycle_descriptor(const ParabolicPair& pair) {
  const auto& rs = pair.roots();
  const auto& d = pair.diagram();
  CycleDescriptor out;
  out.dim = dim_flag(rs, pair.psi_intersection_parabolic()) - dim_flag(rs, pair.psi_q());
  out.is_point = pair.psi_p().subset_of(pair.psi_q());
  out.is_whole_space = pair.psi_q().empty();

  const Marking levi_q = d.all_nodes().minus(pair.psi_q());
  const Marking marked = pair.psi_p().minus(pair.psi_q());
  std::vector<int> marking;
  int offset = 0;
  for (const auto& comp : induced_subdiagram(d, levi_q, marked)) {
    if (comp.local_marking.empty()) continue; // collapses to a point
    if (!out.type_string.empty()) out.type_string += 'x';
    out.type_string += comp.type.name();
    for (int j : comp.local_marking) marking.push_back(offset + j);
    offset += comp.type.rank;
  }
  out.marking = Marking(std::move(marking));
  return out;
}

/// Dimension of the cycle recomputed inside its own diagram and marking.
inline int recompute_cycle_dim(const CycleDescriptor& c) {
  if (c.type_string.empty()) return 0;
  return dim_flag(parse_diagram_spec(c.type_string), c.marking);
}

/// dim of the P-cycle q(p^-1(x)) in G/Q.
inline int dual_cycle_dim(const ParabolicPair& pair) {
  const auto& rs = pair.roots();
  return dim_flag(rs, pair.psi_intersection_parabolic()) - dim_flag(rs, pair.psi_p());
}

/// Dimensions of the tower of k-chains. Each level adds a p-fiber (dimension
/// l_dual) and a q-fiber (dimension k_cycle); this formula is derived, not
/// quoted.
struct TowerDims {
  int k_cycle = 0;
  int l_dual = 0;

  int at(int level) const { return level * (k_cycle + l_dual); }
};

inline TowerDims tower_dims(const ParabolicPair& pair) {
  return TowerDims{cycle_descriptor(pair).dim, dual_cycle_dim(pair)};
}

} // namespace parhom
