#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parhom/dynkin.hpp"
#include "parhom/error.hpp"
#include "parhom/parabolic.hpp"
#include "parhom/root_weyl.hpp"

namespace parhom {

// ---------------------------------------------------------------------------
// Separation and reduction
// ---------------------------------------------------------------------------

/// chi separates psi_P and psi_Q when every diagram path from a node of psi_P
/// to a node of psi_Q (same factor, endpoints included) meets chi.
inline bool is_separating(const ParabolicPair& pair, const Marking& chi) {
  const auto& d = pair.diagram();
  for (int p : pair.psi_p()) {
    for (int q : pair.psi_q()) {
      const auto path = tree_path(d, p, q);
      if (!path) continue;
      const bool hit = std::any_of(path->begin(), path->end(),
                                   [&](int node) { return chi.contains(node); });
      if (!hit) return false;
    }
  }
  return true;
}

struct ReductionResult {
  Marking reduced_marking;
  bool is_already_reduced = false;
  /// node -> a path from psi_P ending at node with no other psi_Q node on it.
  std::map<int, std::vector<int>> forced_witnesses;
};

/// Reduction of psi_Q mod psi_P: the psi_Q nodes that are the first psi_Q
/// node on some path leaving psi_P.
inline ReductionResult reduction(const ParabolicPair& pair) {
  const auto& d = pair.diagram();
  const auto& psi_q = pair.psi_q();
  ReductionResult out;
  std::vector<int> reduced;
  for (int q : psi_q) {
    for (int p : pair.psi_p()) {
      const auto path = tree_path(d, p, q);
      if (!path) continue;
      const bool first = std::none_of(path->begin(), path->end() - 1,
                                      [&](int node) { return psi_q.contains(node); });
      if (first) {
        reduced.push_back(q);
        out.forced_witnesses.emplace(q, *path);
        break;
      }
    }
  }
  out.reduced_marking = Marking(std::move(reduced));
  out.is_already_reduced = out.reduced_marking == psi_q;
  return out;
}

namespace detail {

// Separation by the literal definition: after deleting chi, no connected
// piece of the diagram contains both a psi_P node and a psi_Q node.
inline bool separates_by_components(const DynkinDiagram& d, const Marking& psi_p,
                                    const Marking& psi_q, const Marking& chi) {
  const Marking rest = d.all_nodes().minus(chi);
  for (const auto& comp : induced_subdiagram(d, rest)) {
    bool has_p = false, has_q = false;
    for (int node : comp.bourbaki_to_global) {
      has_p = has_p || psi_p.contains(node);
      has_q = has_q || psi_q.contains(node);
    }
    if (has_p && has_q) return false;
  }
  return true;
}

} // namespace detail

/// Exhaustive search for the unique inclusion-minimal separating subset of
/// psi_Q. Throws ConsistencyError if the minimum is not unique.
inline Marking brute_force_reduction(const ParabolicPair& pair) {
  const auto& q = pair.psi_q().nodes();
  if (q.size() > 20) throw std::invalid_argument("brute_force_reduction: |psi_Q| > 20");
  const auto& d = pair.diagram();
  const std::uint32_t subsets = 1u << q.size();
  auto subset = [&](std::uint32_t mask) {
    std::vector<int> nodes;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (mask & (1u << i)) nodes.push_back(q[i]);
    return Marking(std::move(nodes));
  };
  std::vector<char> separating(subsets, 0);
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    separating[mask] = detail::separates_by_components(d, pair.psi_p(), pair.psi_q(), subset(mask));
  }
  std::vector<std::uint32_t> minimal;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    if (!separating[mask]) continue;
    bool is_min = true;
    for (std::uint32_t other = 0; other < subsets && is_min; ++other) {
      if (other != mask && separating[other] && (other & mask) == other) is_min = false;
    }
    if (is_min) minimal.push_back(mask);
  }
  if (minimal.size() != 1) {
    throw ConsistencyError("brute_force_reduction: " + std::to_string(minimal.size()) +
                           " inclusion-minimal separating subsets");
  }
  return subset(minimal.front());
}

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

/// G/P is Q-cycle-connected iff the markings are disjoint.
inline bool is_cycle_connected(const ParabolicPair& pair) {
  return !pair.psi_p().intersects(pair.psi_q());
}

/// Marking of the parabolic generated by P and Q.
inline Marking connectivity_quotient(const ParabolicPair& pair) {
  return pair.psi_p().intersection(pair.psi_q());
}

struct ChainAnalysis {
  bool connected = false; // the final reachable set is all of W
  bool complete = true;   // false when max_k cut the iteration short
  std::optional<int> minimal_n;
  std::vector<std::uint64_t> reachable_sizes;
  std::vector<int> reachable_dims;
  Marking quotient_marking;
  std::uint64_t weyl_order = 0;
};

namespace detail {

inline int max_cell_dim(const RootSystem& rs, const KeySet& set, const Marking& levi) {
  int best = 0;
  for (const auto& w : set) best = std::max(best, min_coset_length(w, levi, rs));
  return best;
}

} // namespace detail

/// Reachable sets S_0 = W_P, S_j = W_P W_Q S_{j-1}, with W_P, W_Q the Weyl
/// groups of the Levi factors (generated by the unmarked nodes). Stops when
/// S_j = W, when S_j = S_{j-1}, or after max_k steps.
inline ChainAnalysis chain_analysis(const ParabolicPair& pair, int max_k,
                                    std::uint64_t limit = kDefaultWeylLimit) {
  const auto& rs = pair.roots();
  const auto& d = pair.diagram();
  const Marking all = d.all_nodes();
  const std::uint64_t order = estimated_order(d, all);
  if (order > limit) throw GuardLimitError(order, limit);

  const Marking levi_p = all.minus(pair.psi_p());
  const Marking levi_q = all.minus(pair.psi_q());

  ChainAnalysis out;
  out.weyl_order = order;
  out.quotient_marking = connectivity_quotient(pair);

  KeySet reach{identity_key(rs)};
  close_left(rs, reach, levi_p, limit);
  out.reachable_sizes.push_back(reach.size());
  out.reachable_dims.push_back(detail::max_cell_dim(rs, reach, levi_p));

  if (reach.size() == order) {
    out.minimal_n = 0;
  } else {
    out.complete = false;
    for (int j = 1; j <= max_k; ++j) {
      const std::size_t before = reach.size();
      close_left(rs, reach, levi_q, limit);
      close_left(rs, reach, levi_p, limit);
      if (reach.size() == before) {
        out.complete = true;
        break;
      }
      out.reachable_sizes.push_back(reach.size());
      out.reachable_dims.push_back(detail::max_cell_dim(rs, reach, levi_p));
      if (reach.size() == order) {
        out.minimal_n = j;
        out.complete = true;
        break;
      }
    }
  }
  out.connected = reach.size() == order;
  return out;
}

// ---------------------------------------------------------------------------
// Boundary classification and exception tables
// ---------------------------------------------------------------------------

enum class BoundaryClass { AffineCell, CodimAtLeastTwo, CodimOne };

inline std::string_view to_string(BoundaryClass c) {
  switch (c) {
  case BoundaryClass::AffineCell: return "affine_cell";
  case BoundaryClass::CodimAtLeastTwo: return "codim_at_least_two";
  case BoundaryClass::CodimOne: return "codim_one";
  }
  return "";
}

inline BoundaryClass boundary_codim_class(const DynkinDiagram& d, const Marking& psi_p) {
  d.validate(psi_p);
  const Marking image = permute(diagram_involution_table(d), psi_p);
  if (image == psi_p) return BoundaryClass::AffineCell;
  if (!image.intersects(psi_p)) return BoundaryClass::CodimAtLeastTwo;
  return BoundaryClass::CodimOne;
}

enum class LargerAutomorphism { None, OddSymplecticProjective, SpinorOddOrthogonal, G2Quadric };

inline std::string_view to_string(LargerAutomorphism c) {
  switch (c) {
  case LargerAutomorphism::None: return "none";
  case LargerAutomorphism::OddSymplecticProjective: return "odd_symplectic_projective";
  case LargerAutomorphism::SpinorOddOrthogonal: return "spinor_odd_orthogonal";
  case LargerAutomorphism::G2Quadric: return "g2_quadric";
  }
  return "";
}

struct ExceptionFlags {
  bool mok_zhang_exception = false;
  LargerAutomorphism larger_automorphism_case = LargerAutomorphism::None;
  Marking reduced_p; // reduction of psi_P mod psi_Q
  std::vector<std::string> notes;
};

/// Restriction of m to one factor, in that factor's Bourbaki numbering.
inline Marking restrict_to_factor(const DynkinDiagram& d, const Marking& m, int factor) {
  std::vector<int> local;
  for (int node : m) {
    if (d.factor_of(node) == factor) local.push_back(d.local_index(node));
  }
  return Marking(std::move(local));
}

/// Integral-variety exception list for a simple factor (P of Picard number 1).
inline bool mok_zhang_entry(const SimpleFactor& f, const Marking& p, const Marking& q) {
  const int l = f.rank;
  if (p.size() != 1) return false;
  const int i = p.nodes().front();
  switch (f.family) {
  case Family::B: return i >= 2 && i <= l && q == Marking{i - 1, l};
  case Family::C: return i == l && q == Marking{l - 1};
  case Family::F: return i == 1 && q == Marking{3};
  case Family::G: return i == 2 && q == Marking{1};
  default: return false;
  }
}

/// Spaces whose automorphism group is larger than G, keyed on the reduced P.
inline LargerAutomorphism larger_automorphism_entry(const SimpleFactor& f, const Marking& p) {
  if (f.family == Family::C && p == Marking{1}) return LargerAutomorphism::OddSymplecticProjective;
  if (f.family == Family::B && p == Marking{f.rank}) return LargerAutomorphism::SpinorOddOrthogonal;
  if (f.family == Family::G && p == Marking{1}) return LargerAutomorphism::G2Quadric;
  return LargerAutomorphism::None;
}

inline ExceptionFlags exception_flags(const ParabolicPair& pair) {
  const auto& d = pair.diagram();
  ExceptionFlags out;
  out.reduced_p = reduction(pair.transposed()).reduced_marking;
  for (int f = 0; f < static_cast<int>(d.factors().size()); ++f) {
    const auto& sf = d.factors()[static_cast<std::size_t>(f)];
    const Marking p = restrict_to_factor(d, pair.psi_p(), f);
    const Marking q = restrict_to_factor(d, pair.psi_q(), f);
    if (mok_zhang_entry(sf, p, q)) out.mok_zhang_exception = true;
    if (sf.family == Family::B && p == Marking{1} && q == Marking{sf.rank}) {
      out.notes.push_back("degenerate index: (" + sf.name() +
                          ", alpha_1) with Q at {alpha_" + std::to_string(sf.rank) +
                          "} resembles the (B_l, alpha_i) exception with i-1 = 0; not flagged");
    }
    const auto larger = larger_automorphism_entry(sf, restrict_to_factor(d, out.reduced_p, f));
    if (larger != LargerAutomorphism::None) {
      if (out.larger_automorphism_case == LargerAutomorphism::None) {
        out.larger_automorphism_case = larger;
      } else {
        out.notes.push_back("factor " + std::to_string(f + 1) + " (" + sf.name() +
                            ") also has a larger automorphism group: " +
                            std::string(to_string(larger)));
      }
    }
  }
  return out;
}

} // namespace parhom
