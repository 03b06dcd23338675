#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parhom/dynkin.hpp"
#include "parhom/error.hpp"

namespace parhom {

using Coords = std::vector<int>;

/// Enumerations stop at this many elements unless the caller raises it.
inline constexpr std::uint64_t kDefaultWeylLimit = 1'000'000;

struct CoordsHash {
  std::size_t operator()(const Coords& c) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : c) {
      h ^= static_cast<std::size_t>(x + 0x9e37);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/// Root system of a finite-type diagram in the simple-root basis.
///
/// Roots are indexed 0..2N-1: indices [0, N) are the positive roots sorted by
/// height and then by descending coordinates (so alpha_i has index i - 1), and
/// index r + N is the negative of root r.
class RootSystem {
public:
  explicit RootSystem(DynkinDiagram diagram)
      : diagram_(std::move(diagram)), cartan_(cartan_matrix(diagram_)) {
    const int n = diagram_.rank();
    std::vector<Coords> positive;
    std::unordered_set<Coords, CoordsHash> seen;
    for (int i = 0; i < n; ++i) {
      Coords c(static_cast<std::size_t>(n), 0);
      c[static_cast<std::size_t>(i)] = 1;
      seen.insert(c);
      positive.push_back(std::move(c));
    }
    for (std::size_t k = 0; k < positive.size(); ++k) {
      for (int j = 0; j < n; ++j) {
        Coords next = reflect_coords(positive[k], j);
        const bool is_positive =
            std::all_of(next.begin(), next.end(), [](int x) { return x >= 0; });
        if (is_positive && seen.insert(next).second) positive.push_back(std::move(next));
      }
    }
    std::sort(positive.begin(), positive.end(), [](const Coords& a, const Coords& b) {
      const int ha = height_of(a), hb = height_of(b);
      if (ha != hb) return ha < hb;
      return a > b;
    });

    num_positive_ = static_cast<int>(positive.size());
    roots_ = positive;
    for (const auto& c : positive) {
      Coords neg(c.size());
      std::transform(c.begin(), c.end(), neg.begin(), [](int x) { return -x; });
      roots_.push_back(std::move(neg));
    }
    for (std::size_t r = 0; r < roots_.size(); ++r) index_.emplace(roots_[r], static_cast<int>(r));
    heights_.reserve(roots_.size());
    for (const auto& c : roots_) heights_.push_back(height_of(c));

    reflections_.assign(static_cast<std::size_t>(n), {});
    for (int j = 0; j < n; ++j) {
      auto& table = reflections_[static_cast<std::size_t>(j)];
      table.reserve(roots_.size());
      for (const auto& c : roots_) table.push_back(static_cast<std::uint16_t>(index_of(reflect_coords(c, j))));
    }
  }

  const DynkinDiagram& diagram() const noexcept { return diagram_; }
  const Matrix& cartan() const noexcept { return cartan_; }
  int rank() const noexcept { return diagram_.rank(); }
  int num_positive() const noexcept { return num_positive_; }
  int size() const noexcept { return static_cast<int>(roots_.size()); }

  const Coords& root(int r) const { return roots_.at(static_cast<std::size_t>(r)); }
  int height(int r) const { return heights_[static_cast<std::size_t>(r)]; }
  bool is_positive(int r) const noexcept { return r < num_positive_; }
  int negate(int r) const noexcept { return r < num_positive_ ? r + num_positive_ : r - num_positive_; }

  /// Index of the root with these coordinates, or -1.
  int index_of(const Coords& c) const {
    const auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
  }

  /// s_j applied to root r (j is 0-based).
  int reflect(int j, int r) const {
    return reflections_[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
  }

  /// s_j(beta) = beta - <beta, alpha_j^vee> alpha_j.
  Coords reflect_coords(const Coords& beta, int j) const {
    int pairing = 0;
    for (std::size_t i = 0; i < beta.size(); ++i)
      pairing += beta[i] * cartan_[i][static_cast<std::size_t>(j)];
    Coords out = beta;
    out[static_cast<std::size_t>(j)] -= pairing;
    return out;
  }

  static int height_of(const Coords& c) {
    int h = 0;
    for (int x : c) h += x;
    return h;
  }

private:
  DynkinDiagram diagram_;
  Matrix cartan_;
  int num_positive_ = 0;
  std::vector<Coords> roots_;
  std::vector<int> heights_;
  std::unordered_map<Coords, int, CoordsHash> index_;
  std::vector<std::vector<std::uint16_t>> reflections_;
};

inline RootSystem generate_roots(const DynkinDiagram& d) { return RootSystem(d); }

// ---------------------------------------------------------------------------
// Weyl group elements
// ---------------------------------------------------------------------------

/// Images of the simple roots (as root indices); determines the element.
using WeylKey = std::vector<std::uint16_t>;

struct WeylKeyHash {
  std::size_t operator()(const WeylKey& k) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : k) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

using KeySet = std::unordered_set<WeylKey, WeylKeyHash>;

struct WeylElement {
  WeylKey key;
  int length = 0;

  friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.key == b.key; }
};

/// A set of Weyl group elements; generators_marking is set when the set is
/// the parabolic subgroup W_I generated by s_i, i in I.
struct WeylSubset {
  KeySet elements;
  std::optional<Marking> generators_marking;

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(const WeylKey& k) const { return elements.count(k) != 0; }
};

inline WeylKey identity_key(const RootSystem& rs) {
  WeylKey k(static_cast<std::size_t>(rs.rank()));
  for (int i = 0; i < rs.rank(); ++i) k[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i);
  return k;
}

/// Key of s_i * w (i is 0-based).
inline WeylKey left_reflect(const RootSystem& rs, const WeylKey& w, int i) {
  WeylKey out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = static_cast<std::uint16_t>(rs.reflect(i, w[j]));
  return out;
}

/// w applied to root r, by linearity over the simple roots.
inline int apply(const RootSystem& rs, const WeylKey& w, int r) {
  const Coords& c = rs.root(r);
  Coords image(c.size(), 0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    const Coords& col = rs.root(w[k]);
    for (std::size_t i = 0; i < image.size(); ++i) image[i] += c[k] * col[i];
  }
  return rs.index_of(image);
}

/// Key of w * s_i (i is 0-based): (w s_i)(alpha_j) = w(alpha_j) - a_ji w(alpha_i).
inline WeylKey right_reflect(const RootSystem& rs, const WeylKey& w, int i) {
  WeylKey out(w.size());
  const Coords& wi = rs.root(w[static_cast<std::size_t>(i)]);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const int a = rs.cartan()[j][static_cast<std::size_t>(i)];
    if (a == 0) {
      out[j] = w[j];
      continue;
    }
    Coords c = rs.root(w[j]);
    for (std::size_t t = 0; t < c.size(); ++t) c[t] -= a * wi[t];
    out[j] = static_cast<std::uint16_t>(rs.index_of(c));
  }
  return out;
}

/// Full permutation of the 2N root indices induced by w.
inline std::vector<std::uint16_t> full_action(const RootSystem& rs, const WeylKey& w) {
  std::vector<std::uint16_t> perm(static_cast<std::size_t>(rs.size()));
  for (int r = 0; r < rs.size(); ++r) perm[static_cast<std::size_t>(r)] = static_cast<std::uint16_t>(apply(rs, w, r));
  return perm;
}

/// Key of a * b given the full action of a.
inline WeylKey compose(const std::vector<std::uint16_t>& a_action, const WeylKey& b) {
  WeylKey out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) out[j] = a_action[b[j]];
  return out;
}

/// Number of positive roots beta with w(beta) < 0, restricted to roots for
/// which `include(beta)` holds. The sign of w(beta) is the sign of its height,
/// which is linear in the heights of the w(alpha_k).
template <class Pred>
int count_inversions(const RootSystem& rs, const WeylKey& w, Pred include) {
  std::vector<int> h(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) h[k] = rs.height(w[k]);
  int count = 0;
  for (int r = 0; r < rs.num_positive(); ++r) {
    if (!include(r)) continue;
    const Coords& c = rs.root(r);
    int height = 0;
    for (std::size_t k = 0; k < c.size(); ++k) height += c[k] * h[k];
    if (height < 0) ++count;
  }
  return count;
}

inline int length(const RootSystem& rs, const WeylKey& w) {
  return count_inversions(rs, w, [](int) { return true; });
}

inline WeylElement make_element(const RootSystem& rs, WeylKey key) {
  const int l = length(rs, key);
  return WeylElement{std::move(key), l};
}

/// Classical order of W_I: product over the components of the subdiagram on I.
inline std::uint64_t estimated_order(const DynkinDiagram& d, const Marking& generators) {
  std::uint64_t order = 1;
  for (const auto& comp : induced_subdiagram(d, generators)) {
    const std::uint64_t f = classical_weyl_order(comp.type);
    order = (f != 0 && order > UINT64_MAX / f) ? UINT64_MAX : order * f;
  }
  return order;
}

/// Replaces `set` by W_I * set, where I = generators (1-based nodes).
inline void close_left(const RootSystem& rs, KeySet& set, const Marking& generators,
                       std::uint64_t limit) {
  std::vector<WeylKey> work(set.begin(), set.end());
  while (!work.empty()) {
    WeylKey x = std::move(work.back());
    work.pop_back();
    for (int node : generators) {
      WeylKey y = left_reflect(rs, x, node - 1);
      if (set.insert(y).second) {
        if (set.size() > limit) throw GuardLimitError(set.size(), limit);
        work.push_back(std::move(y));
      }
    }
  }
}

/// The subgroup generated by {s_i : i in generators}, by breadth-first closure.
inline WeylSubset enumerate_weyl(const RootSystem& rs, const Marking& generators,
                                 std::uint64_t limit = kDefaultWeylLimit) {
  rs.diagram().validate(generators);
  const std::uint64_t est = estimated_order(rs.diagram(), generators);
  if (est > limit) throw GuardLimitError(est, limit);
  WeylSubset out;
  out.elements.reserve(static_cast<std::size_t>(est));
  out.elements.insert(identity_key(rs));
  close_left(rs, out.elements, generators, limit);
  out.generators_marking = generators;
  return out;
}

/// w0: grow w by right multiplication while some w(alpha_i) is positive.
inline WeylElement longest_element(const RootSystem& rs) {
  WeylKey w = identity_key(rs);
  while (true) {
    const auto it = std::find_if(w.begin(), w.end(), [&](auto r) { return rs.is_positive(r); });
    if (it == w.end()) break;
    w = right_reflect(rs, w, static_cast<int>(it - w.begin()));
  }
  return make_element(rs, std::move(w));
}

/// i -> j where alpha_j = -w0(alpha_i).
inline NodePermutation involution_via_w0(const RootSystem& rs) {
  const WeylElement w0 = longest_element(rs);
  NodePermutation perm(static_cast<std::size_t>(rs.rank()));
  for (int i = 0; i < rs.rank(); ++i) {
    const int j = rs.negate(w0.key[static_cast<std::size_t>(i)]);
    if (j < 0 || j >= rs.rank()) throw ConsistencyError("-w0 does not permute the simple roots");
    perm[static_cast<std::size_t>(i)] = j + 1;
  }
  return perm;
}

/// The unique element of w W_I with w(alpha_i) > 0 for all i in I.
inline WeylKey minimal_coset_representative(const RootSystem& rs, WeylKey w, const Marking& I) {
  while (true) {
    bool changed = false;
    for (int node : I) {
      if (!rs.is_positive(w[static_cast<std::size_t>(node - 1)])) {
        w = right_reflect(rs, w, node - 1);
        changed = true;
      }
    }
    if (!changed) return w;
  }
}

/// Length of the minimal representative of w W_I (the Schubert cell dimension
/// of w P_I in G/P_I).
inline int min_coset_length(const WeylKey& w, const Marking& I, const RootSystem& rs) {
  return length(rs, minimal_coset_representative(rs, w, I));
}

inline int min_coset_length(const WeylElement& w, const Marking& I, const RootSystem& rs) {
  return min_coset_length(w.key, I, rs);
}

/// {ab : a in A, b in B}. `shards` threads each take a slice of A; the result
/// does not depend on the shard count.
inline WeylSubset product_set(const RootSystem& rs, const WeylSubset& A, const WeylSubset& B,
                              std::uint64_t limit = kDefaultWeylLimit, unsigned shards = 1) {
  const std::vector<WeylKey> left(A.elements.begin(), A.elements.end());
  const std::vector<WeylKey> right(B.elements.begin(), B.elements.end());
  shards = std::max(1u, std::min<unsigned>(shards, static_cast<unsigned>(std::max<std::size_t>(left.size(), 1))));

  std::vector<KeySet> partial(shards);
  std::atomic<bool> overflow{false};
  auto work = [&](unsigned s) {
    for (std::size_t i = s; i < left.size() && !overflow; i += shards) {
      const auto action = full_action(rs, left[i]);
      for (const auto& b : right) partial[s].insert(compose(action, b));
      if (partial[s].size() > limit) overflow = true;
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned s = 0; s < shards; ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }
  WeylSubset out;
  for (auto& p : partial) {
    if (out.elements.empty()) {
      out.elements = std::move(p);
    } else {
      out.elements.insert(p.begin(), p.end());
    }
    if (out.elements.size() > limit) overflow = true;
  }
  if (overflow) throw GuardLimitError(static_cast<std::uint64_t>(left.size()) * right.size(), limit);
  return out;
}

} // namespace parhom
