#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parhom/error.hpp"

namespace parhom {

// ---------------------------------------------------------------------------
// Marking: a set of node ids (1-based, global across factors), kept sorted.
// ---------------------------------------------------------------------------

class Marking {
public:
  Marking() = default;
  Marking(std::initializer_list<int> nodes) : nodes_(nodes) { normalize(); }
  explicit Marking(std::vector<int> nodes) : nodes_(std::move(nodes)) {
    normalize();
  }

  const std::vector<int>& nodes() const noexcept { return nodes_; }
  auto begin() const noexcept { return nodes_.begin(); }
  auto end() const noexcept { return nodes_.end(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  bool contains(int node) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), node);
  }

  bool subset_of(const Marking& other) const {
    return std::includes(other.nodes_.begin(), other.nodes_.end(),
                         nodes_.begin(), nodes_.end());
  }

  bool intersects(const Marking& other) const {
    return !intersection(other).empty();
  }

  Marking union_with(const Marking& other) const {
    std::vector<int> out;
    std::set_union(nodes_.begin(), nodes_.end(), other.nodes_.begin(),
                   other.nodes_.end(), std::back_inserter(out));
    return Marking(std::move(out));
  }

  Marking intersection(const Marking& other) const {
    std::vector<int> out;
    std::set_intersection(nodes_.begin(), nodes_.end(), other.nodes_.begin(),
                          other.nodes_.end(), std::back_inserter(out));
    return Marking(std::move(out));
  }

  Marking minus(const Marking& other) const {
    std::vector<int> out;
    std::set_difference(nodes_.begin(), nodes_.end(), other.nodes_.begin(),
                        other.nodes_.end(), std::back_inserter(out));
    return Marking(std::move(out));
  }

  /// "2,4"; the empty marking renders as "".
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(nodes_[i]);
    }
    return out;
  }

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking& a, const Marking& b) {
    return a.nodes_ <=> b.nodes_;
  }

private:
  void normalize() {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  }

  std::vector<int> nodes_;
};

/// Parses the marking grammar: comma-separated strictly ascending positive
/// integers. The empty string is the empty marking.
inline Marking parse_marking(std::string_view text) {
  std::vector<int> nodes;
  if (text.empty()) return Marking{};
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token =
        text.substr(pos, comma == std::string_view::npos ? text.size() - pos
                                                         : comma - pos);
    int value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last || value <= 0) {
      throw ParseError("invalid marking token '" + std::string(token) + "'");
    }
    if (!nodes.empty() && value <= nodes.back()) {
      throw ParseError("marking not strictly ascending at token '" +
                       std::string(token) + "'");
    }
    nodes.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Marking(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Simple factors and diagrams
// ---------------------------------------------------------------------------

enum class Family : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

struct SimpleFactor {
  Family family;
  int rank;

  std::string name() const {
    return std::string(1, static_cast<char>(family)) + std::to_string(rank);
  }

  friend bool operator==(const SimpleFactor&, const SimpleFactor&) = default;
};

/// Rank bounds that make the families non-overlapping (B2 yes, C2 no, D4 min).
inline bool rank_in_bounds(Family family, int rank) {
  switch (family) {
  case Family::A: return rank >= 1;
  case Family::B: return rank >= 2;
  case Family::C: return rank >= 3;
  case Family::D: return rank >= 4;
  case Family::E: return rank >= 6 && rank <= 8;
  case Family::F: return rank == 4;
  case Family::G: return rank == 2;
  }
  return false;
}

/// Order of the Weyl group of a simple factor, saturating at UINT64_MAX.
inline std::uint64_t classical_weyl_order(const SimpleFactor& f) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMax / a) return kMax;
    return a * b;
  };
  auto factorial = [&](int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r = mul(r, static_cast<std::uint64_t>(i));
    return r;
  };
  auto pow2 = [&](int n) {
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) r = mul(r, 2);
    return r;
  };
  const int l = f.rank;
  switch (f.family) {
  case Family::A: return factorial(l + 1);
  case Family::B:
  case Family::C: return mul(pow2(l), factorial(l));
  case Family::D: return mul(pow2(l - 1), factorial(l));
  case Family::E:
    return l == 6 ? 51840ULL : l == 7 ? 2903040ULL : 696729600ULL;
  case Family::F: return 1152;
  case Family::G: return 12;
  }
  return 0;
}

/// Bond between two adjacent nodes. For multiple bonds `shorter` is the node
/// carrying the shorter root (the arrow points at it); 0 for single bonds.
struct Edge {
  int a;
  int b;
  int multiplicity;
  int shorter;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A finite-type Dynkin diagram, possibly a product of simple factors.
/// Node ids are 1..rank, assigned factor by factor in Bourbaki order.
class DynkinDiagram {
public:
  DynkinDiagram() = default;

  explicit DynkinDiagram(std::vector<SimpleFactor> factors)
      : factors_(std::move(factors)) {
    int offset = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& sf = factors_[f];
      if (!rank_in_bounds(sf.family, sf.rank)) {
        throw ParseError("rank " + std::to_string(sf.rank) +
                         " out of bounds for family " +
                         std::string(1, static_cast<char>(sf.family)));
      }
      offsets_.push_back(offset);
      for (int j = 0; j < sf.rank; ++j) factor_of_.push_back(static_cast<int>(f));
      add_factor_edges(sf, offset);
      offset += sf.rank;
    }
    adjacency_.assign(static_cast<std::size_t>(offset), {});
    for (const auto& e : edges_) {
      adjacency_[static_cast<std::size_t>(e.a - 1)].push_back(e.b);
      adjacency_[static_cast<std::size_t>(e.b - 1)].push_back(e.a);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  int rank() const noexcept { return static_cast<int>(factor_of_.size()); }
  const std::vector<SimpleFactor>& factors() const noexcept { return factors_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_node(int node) const noexcept { return node >= 1 && node <= rank(); }
  int factor_of(int node) const { return factor_of_.at(static_cast<std::size_t>(node - 1)); }
  int offset(int factor) const { return offsets_.at(static_cast<std::size_t>(factor)); }
  /// Bourbaki index of `node` inside its own factor.
  int local_index(int node) const { return node - offset(factor_of(node)); }

  const std::vector<int>& neighbors(int node) const {
    return adjacency_.at(static_cast<std::size_t>(node - 1));
  }

  /// The edge joining a and b, if any.
  std::optional<Edge> edge(int a, int b) const {
    for (const auto& e : edges_) {
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e;
    }
    return std::nullopt;
  }

  Marking all_nodes() const {
    std::vector<int> all(static_cast<std::size_t>(rank()));
    for (int i = 0; i < rank(); ++i) all[static_cast<std::size_t>(i)] = i + 1;
    return Marking(std::move(all));
  }

  Marking factor_nodes(int factor) const {
    std::vector<int> nodes;
    for (int j = 1; j <= factors_.at(static_cast<std::size_t>(factor)).rank; ++j)
      nodes.push_back(offset(factor) + j);
    return Marking(std::move(nodes));
  }

  /// Canonical uppercase type string, e.g. "A2xG2".
  std::string type_string() const {
    std::string out;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (f) out += 'x';
      out += factors_[f].name();
    }
    return out;
  }

  /// Throws ParseError naming the first node that does not exist.
  void validate(const Marking& m) const {
    for (int node : m) {
      if (!has_node(node)) {
        throw ParseError("node " + std::to_string(node) + " out of range");
      }
    }
  }

  friend bool operator==(const DynkinDiagram& a, const DynkinDiagram& b) {
    return a.factors_ == b.factors_;
  }

private:
  void add_edge(int a, int b, int multiplicity = 1, int shorter = 0) {
    edges_.push_back(Edge{a, b, multiplicity, shorter});
  }

  // Bourbaki plates.
  void add_factor_edges(const SimpleFactor& sf, int o) {
    const int l = sf.rank;
    switch (sf.family) {
    case Family::A:
      for (int i = 1; i < l; ++i) add_edge(o + i, o + i + 1);
      break;
    case Family::B: // alpha_l short
      for (int i = 1; i < l - 1; ++i) add_edge(o + i, o + i + 1);
      add_edge(o + l - 1, o + l, 2, o + l);
      break;
    case Family::C: // alpha_l long
      for (int i = 1; i < l - 1; ++i) add_edge(o + i, o + i + 1);
      add_edge(o + l - 1, o + l, 2, o + l - 1);
      break;
    case Family::D:
      for (int i = 1; i < l - 1; ++i) add_edge(o + i, o + i + 1);
      add_edge(o + l - 2, o + l);
      break;
    case Family::E:
      add_edge(o + 1, o + 3);
      add_edge(o + 2, o + 4);
      for (int i = 3; i < l; ++i) add_edge(o + i, o + i + 1);
      break;
    case Family::F: // alpha_1, alpha_2 long
      add_edge(o + 1, o + 2);
      add_edge(o + 2, o + 3, 2, o + 3);
      add_edge(o + 3, o + 4);
      break;
    case Family::G: // alpha_1 short
      add_edge(o + 1, o + 2, 3, o + 1);
      break;
    }
  }

  std::vector<SimpleFactor> factors_;
  std::vector<int> offsets_;
  std::vector<int> factor_of_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Parses `FACTOR ("x" FACTOR)*` with `FACTOR := [A-Ga-g][0-9]+`.
inline DynkinDiagram parse_diagram_spec(std::string_view text) {
  if (text.empty()) throw ParseError("empty diagram string");
  std::vector<SimpleFactor> factors;
  std::size_t pos = 0;
  while (true) {
    const std::size_t sep = text.find_first_of("xX", pos);
    const std::string_view token =
        text.substr(pos, sep == std::string_view::npos ? text.size() - pos : sep - pos);
    if (token.size() < 2) {
      throw ParseError("malformed diagram factor '" + std::string(token) + "'");
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    if (letter < 'A' || letter > 'G') {
      throw ParseError("unknown family '" + std::string(1, token[0]) + "' in '" +
                       std::string(token) + "'");
    }
    const std::string_view digits = token.substr(1);
    int rank = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), rank);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError("malformed rank in '" + std::string(token) + "'");
    }
    const auto family = static_cast<Family>(letter);
    if (!rank_in_bounds(family, rank)) {
      throw ParseError("rank " + std::to_string(rank) + " out of bounds for family " +
                       std::string(1, letter));
    }
    factors.push_back(SimpleFactor{family, rank});
    if (sep == std::string_view::npos) break;
    pos = sep + 1;
  }
  return DynkinDiagram(std::move(factors));
}

using Matrix = std::vector<std::vector<int>>;

/// Cartan matrix with a_ij = <alpha_i, alpha_j^vee>; a long-to-short entry
/// carries the bond multiplicity.
inline Matrix cartan_matrix(const DynkinDiagram& d) {
  const auto n = static_cast<std::size_t>(d.rank());
  Matrix a(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 2;
  for (const auto& e : d.edges()) {
    const auto i = static_cast<std::size_t>(e.a - 1);
    const auto j = static_cast<std::size_t>(e.b - 1);
    if (e.multiplicity == 1) {
      a[i][j] = a[j][i] = -1;
    } else {
      const auto s = static_cast<std::size_t>(e.shorter - 1);
      const auto l = s == i ? j : i;
      a[l][s] = -e.multiplicity;
      a[s][l] = -1;
    }
  }
  return a;
}

/// Permutation of nodes; perm[i - 1] is the image of node i.
using NodePermutation = std::vector<int>;

/// The involution alpha -> -w0(alpha) read off the diagram, factor by factor.
inline NodePermutation diagram_involution_table(const DynkinDiagram& d) {
  NodePermutation perm(static_cast<std::size_t>(d.rank()));
  for (int node = 1; node <= d.rank(); ++node) perm[static_cast<std::size_t>(node - 1)] = node;
  for (std::size_t f = 0; f < d.factors().size(); ++f) {
    const auto& sf = d.factors()[f];
    const int o = d.offset(static_cast<int>(f));
    const int l = sf.rank;
    auto set = [&](int from, int to) { perm[static_cast<std::size_t>(o + from - 1)] = o + to; };
    switch (sf.family) {
    case Family::A:
      for (int i = 1; i <= l; ++i) set(i, l + 1 - i);
      break;
    case Family::D:
      if (l % 2 == 1) {
        set(l - 1, l);
        set(l, l - 1);
      }
      break;
    case Family::E:
      if (l == 6) {
        set(1, 6);
        set(6, 1);
        set(3, 5);
        set(5, 3);
      }
      break;
    default:
      break;
    }
  }
  return perm;
}

inline Marking permute(const NodePermutation& perm, const Marking& m) {
  std::vector<int> out;
  out.reserve(m.size());
  for (int node : m) out.push_back(perm.at(static_cast<std::size_t>(node - 1)));
  return Marking(std::move(out));
}

/// Unique simple path from a to b (inclusive); nullopt across factors.
inline std::optional<std::vector<int>> tree_path(const DynkinDiagram& d, int a, int b) {
  if (!d.has_node(a) || !d.has_node(b)) {
    throw ParseError("tree_path: node out of range");
  }
  if (d.factor_of(a) != d.factor_of(b)) return std::nullopt;
  std::vector<int> parent(static_cast<std::size_t>(d.rank() + 1), 0);
  std::deque<int> queue{a};
  parent[static_cast<std::size_t>(a)] = a;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == b) break;
    for (int v : d.neighbors(u)) {
      if (parent[static_cast<std::size_t>(v)] == 0) {
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> path{b};
  while (path.back() != a) path.push_back(parent[static_cast<std::size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Induced subdiagrams
// ---------------------------------------------------------------------------

/// One connected component of an induced subdiagram, identified with a
/// simple type. bourbaki_to_global[j - 1] is the global node playing the
/// role of Bourbaki node j.
struct SubdiagramComponent {
  SimpleFactor type;
  std::vector<int> bourbaki_to_global;
  Marking local_marking; // marked nodes in Bourbaki numbering
};

namespace detail {

// All isomorphisms from the single-factor reference diagram `ref` onto the
// component `comp` (a list of global nodes of `d`), respecting bonds and
// arrows. Each result maps reference node j to result[j - 1].
inline std::vector<std::vector<int>> isomorphisms(const DynkinDiagram& ref,
                                                  const DynkinDiagram& d,
                                                  const std::vector<int>& comp) {
  std::vector<std::vector<int>> results;
  const int n = ref.rank();
  if (static_cast<int>(comp.size()) != n) return results;

  std::size_t comp_edges = 0;
  for (const auto& e : d.edges()) {
    if (std::binary_search(comp.begin(), comp.end(), e.a) &&
        std::binary_search(comp.begin(), comp.end(), e.b))
      ++comp_edges;
  }
  if (comp_edges != ref.edges().size()) return results;

  // BFS order over the reference tree with parents.
  std::vector<int> order{1};
  std::vector<int> parent(static_cast<std::size_t>(n + 1), 0);
  parent[1] = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int v : ref.neighbors(order[k])) {
      if (parent[static_cast<std::size_t>(v)] == 0) {
        parent[static_cast<std::size_t>(v)] = order[k];
        order.push_back(v);
      }
    }
  }

  std::vector<int> image(static_cast<std::size_t>(n + 1), 0);
  std::vector<char> used(static_cast<std::size_t>(d.rank() + 1), 0);

  auto compatible = [&](int r1, int r2, int g1, int g2) {
    const auto re = ref.edge(r1, r2);
    const auto ge = d.edge(g1, g2);
    if (!re || !ge || re->multiplicity != ge->multiplicity) return false;
    if (re->multiplicity == 1) return true;
    return (re->shorter == r1) == (ge->shorter == g1);
  };

  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      results.emplace_back(image.begin() + 1, image.end());
      return;
    }
    const int r = order[k];
    std::vector<int> candidates;
    if (k == 0) {
      candidates = comp;
    } else {
      const int p = parent[static_cast<std::size_t>(r)];
      for (int g : d.neighbors(image[static_cast<std::size_t>(p)])) {
        if (std::binary_search(comp.begin(), comp.end(), g)) candidates.push_back(g);
      }
    }
    for (int g : candidates) {
      if (used[static_cast<std::size_t>(g)]) continue;
      if (k > 0 && !compatible(parent[static_cast<std::size_t>(r)], r,
                               image[static_cast<std::size_t>(parent[static_cast<std::size_t>(r)])], g))
        continue;
      image[static_cast<std::size_t>(r)] = g;
      used[static_cast<std::size_t>(g)] = 1;
      self(self, k + 1);
      used[static_cast<std::size_t>(g)] = 0;
      image[static_cast<std::size_t>(r)] = 0;
    }
  };
  recurse(recurse, 0);
  return results;
}

inline std::vector<SimpleFactor> candidate_types(int n) {
  std::vector<SimpleFactor> out;
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::E,
                   Family::F, Family::G}) {
    if (rank_in_bounds(f, n)) out.push_back(SimpleFactor{f, n});
  }
  return out;
}

} // namespace detail

/// Connected components of the subdiagram induced on `nodes`, each identified
/// with its simple type. Components come ordered by smallest global node; each
/// labeling is the Bourbaki labeling with the lexicographically smallest
/// marking of `marked`.
inline std::vector<SubdiagramComponent> induced_subdiagram(const DynkinDiagram& d,
                                                           const Marking& nodes,
                                                           const Marking& marked = {}) {
  std::vector<SubdiagramComponent> out;
  std::vector<char> seen(static_cast<std::size_t>(d.rank() + 1), 0);
  for (int start : nodes) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> comp{start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      for (int v : d.neighbors(comp[k])) {
        if (nodes.contains(v) && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          comp.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());

    bool found = false;
    for (const auto& type : detail::candidate_types(static_cast<int>(comp.size()))) {
      const DynkinDiagram ref({type});
      const auto isos = detail::isomorphisms(ref, d, comp);
      if (isos.empty()) continue;
      std::optional<SubdiagramComponent> best;
      for (const auto& iso : isos) {
        std::vector<int> local;
        for (std::size_t j = 0; j < iso.size(); ++j) {
          if (marked.contains(iso[j])) local.push_back(static_cast<int>(j) + 1);
        }
        SubdiagramComponent cand{type, iso, Marking(std::move(local))};
        if (!best || cand.local_marking < best->local_marking ||
            (cand.local_marking == best->local_marking &&
             cand.bourbaki_to_global < best->bourbaki_to_global)) {
          best = std::move(cand);
        }
      }
      out.push_back(std::move(*best));
      found = true;
      break;
    }
    if (!found) {
      throw ConsistencyError("induced subdiagram component is not of finite type");
    }
  }
  return out;
}

} // namespace parhom
