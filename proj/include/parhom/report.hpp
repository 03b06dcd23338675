#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "parhom/connectivity.hpp"
#include "parhom/dynkin.hpp"
#include "parhom/error.hpp"
#include "parhom/parabolic.hpp"
#include "parhom/root_weyl.hpp"

namespace parhom {

inline constexpr const char* kSchemaVersion = "parhom/1";
inline constexpr int kDefaultMaxK = 64;

/// PARHOM_WEYL_LIMIT if set to a positive integer, else the default guard.
inline std::uint64_t weyl_limit_from_env() {
  if (const char* env = std::getenv("PARHOM_WEYL_LIMIT")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw ParseError("invalid PARHOM_WEYL_LIMIT '" + std::string(env) + "'");
  }
  return kDefaultWeylLimit;
}

struct AnalysisOptions {
  bool chain = false;
  int max_k = kDefaultMaxK;
  std::uint64_t weyl_limit = kDefaultWeylLimit;
};

struct AnalysisReport {
  std::string type;
  Marking psi_p;
  Marking psi_q;
  std::vector<std::string> psi_p_local; // "factor.index"
  std::vector<std::string> psi_q_local;

  int dim_gp = 0;
  int dim_gq = 0;
  int dim_gpq = 0;

  CycleDescriptor cycle;
  int dual_cycle_dim = 0;
  TowerDims tower;
  ReductionResult reduction;

  bool connected = false;
  std::optional<ChainAnalysis> chain;

  ExceptionFlags flags;
  BoundaryClass boundary = BoundaryClass::AffineCell;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> local_form(const DynkinDiagram& d, const Marking& m) {
  std::vector<std::string> out;
  for (int node : m)
    out.push_back(std::to_string(d.factor_of(node) + 1) + "." + std::to_string(d.local_index(node)));
  return out;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConsistencyError("consistency check failed: " + what);
}

// Positive roots meeting psi_P whose support avoids psi_Q, counted directly.
inline int direct_cycle_dim(const ParabolicPair& pair) {
  const auto& rs = pair.roots();
  int count = 0;
  for (int r = 0; r < rs.num_positive(); ++r) {
    if (support_meets(rs, r, pair.psi_p()) && !support_meets(rs, r, pair.psi_q())) ++count;
  }
  return count;
}

} // namespace detail

/// Cross-checks every derived field of a freshly built report against an
/// independent recomputation. Throws ConsistencyError on any disagreement.
inline void check_consistency(const AnalysisReport& r, const ParabolicPair& pair) {
  using detail::require;
  require(r.cycle.dim == r.dim_gpq - r.dim_gq, "cycle dim = dim G/(P∩Q) - dim G/Q");
  require(r.cycle.dim == detail::direct_cycle_dim(pair), "cycle dim by direct root count");
  require(r.cycle.dim == recompute_cycle_dim(r.cycle), "cycle dim inside its own type");
  require((r.cycle.dim == 0) == r.cycle.is_point, "cycle dim 0 iff point");
  require(r.dual_cycle_dim == r.dim_gpq - r.dim_gp, "dual cycle dim");
  require(r.tower.at(0) == 0 && r.tower.at(1) == r.cycle.dim + r.dual_cycle_dim, "tower dims");
  require(is_separating(pair, r.reduction.reduced_marking), "reduction separates");
  require(r.reduction.reduced_marking.subset_of(pair.psi_q()), "reduction inside psi_Q");
  const ParabolicPair reduced(pair.shared_roots(), pair.psi_p(), r.reduction.reduced_marking);
  require(reduction(reduced).reduced_marking == r.reduction.reduced_marking, "reduction idempotent");
  require(cycle_descriptor(reduced).dim == r.cycle.dim, "cycle dim invariant under reduction");
  if (r.chain && r.chain->complete) {
    require(r.chain->connected == r.connected, "Weyl reachability agrees with disjoint markings");
    require((r.chain->reachable_dims.back() == r.dim_gp) == r.chain->connected,
            "full reachable dimension iff connected");
  }
}

inline AnalysisReport analyze(const ParabolicPair& pair, const AnalysisOptions& opts = {}) {
  const auto& rs = pair.roots();
  const auto& d = pair.diagram();
  AnalysisReport r;
  r.type = d.type_string();
  r.psi_p = pair.psi_p();
  r.psi_q = pair.psi_q();
  r.psi_p_local = detail::local_form(d, r.psi_p);
  r.psi_q_local = detail::local_form(d, r.psi_q);
  r.dim_gp = dim_flag(rs, r.psi_p);
  r.dim_gq = dim_flag(rs, r.psi_q);
  r.dim_gpq = dim_flag(rs, pair.psi_intersection_parabolic());
  r.cycle = cycle_descriptor(pair);
  r.dual_cycle_dim = dual_cycle_dim(pair);
  r.tower = TowerDims{r.cycle.dim, r.dual_cycle_dim};
  r.reduction = reduction(pair);
  r.connected = is_cycle_connected(pair);
  if (opts.chain) {
    r.chain = chain_analysis(pair, opts.max_k, opts.weyl_limit);
    if (!r.chain->complete) {
      r.warnings.push_back("chain analysis truncated at max_k = " + std::to_string(opts.max_k));
    }
  }
  r.flags = exception_flags(pair);
  for (const auto& note : r.flags.notes) r.warnings.push_back(note);
  if (r.flags.mok_zhang_exception) {
    r.warnings.push_back("linearity not computed: the integral-variety exception assumes "
                         "cycles are maximal linear or non-linear");
  }
  r.boundary = boundary_codim_class(d, r.psi_p);
  check_consistency(r, pair);
  return r;
}

inline AnalysisReport analyze(const DynkinDiagram& d, const Marking& psi_p, const Marking& psi_q,
                              const AnalysisOptions& opts = {}) {
  return analyze(ParabolicPair(d, psi_p, psi_q), opts);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json to_json(const AnalysisReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["input"] = {{"type", r.type},
                {"psi_p", r.psi_p.nodes()},
                {"psi_q", r.psi_q.nodes()},
                {"psi_p_local", r.psi_p_local},
                {"psi_q_local", r.psi_q_local}};
  j["dims"] = {{"gp", r.dim_gp}, {"gq", r.dim_gq}, {"gpq", r.dim_gpq}};
  j["cycle"] = {{"dim", r.cycle.dim},
                {"is_point", r.cycle.is_point},
                {"is_whole_space", r.cycle.is_whole_space},
                {"type", r.cycle.type_string},
                {"marking", r.cycle.marking.nodes()}};
  j["dual_cycle_dim"] = r.dual_cycle_dim;
  j["tower"] = {{"k", r.tower.k_cycle},
                {"l", r.tower.l_dual},
                {"dim_formula", "j*(k+l)"},
                {"derived", true}};
  Json witnesses = Json::object();
  for (const auto& [node, path] : r.reduction.forced_witnesses) witnesses[std::to_string(node)] = path;
  j["reduction"] = {{"reduced", r.reduction.reduced_marking.nodes()},
                    {"is_already_reduced", r.reduction.is_already_reduced},
                    {"witnesses", witnesses}};
  Json conn;
  conn["connected"] = r.connected;
  conn["quotient_marking"] = r.psi_p.intersection(r.psi_q).nodes();
  conn["computed"] = r.chain.has_value();
  if (r.chain) {
    conn["complete"] = r.chain->complete;
    conn["saturated"] = r.chain->connected;
    conn["minimal_n"] = r.chain->minimal_n ? Json(*r.chain->minimal_n) : Json(nullptr);
    conn["weyl_order"] = r.chain->weyl_order;
    conn["reachable_sizes"] = r.chain->reachable_sizes;
    conn["reachable_dims"] = r.chain->reachable_dims;
  } else {
    conn["complete"] = false;
    conn["saturated"] = nullptr;
    conn["minimal_n"] = nullptr;
    conn["weyl_order"] = nullptr;
    conn["reachable_sizes"] = Json::array();
    conn["reachable_dims"] = Json::array();
  }
  j["connectivity"] = conn;
  j["flags"] = {{"mok_zhang_exception", r.flags.mok_zhang_exception},
                {"larger_automorphism_case", std::string(to_string(r.flags.larger_automorphism_case))},
                {"reduced_p", r.flags.reduced_p.nodes()},
                {"linearity", "not computed"}};
  j["boundary_class"] = std::string(to_string(r.boundary));
  j["warnings"] = r.warnings;
  return j;
}

/// Single JSON object, keys in fixed order, two-space indentation.
inline std::string render_json(const AnalysisReport& r, int indent = 2) {
  return to_json(r).dump(indent);
}

inline AnalysisReport report_from_json(const Json& j) {
  if (j.at("schema") != kSchemaVersion) throw ParseError("unsupported report schema");
  auto marking = [](const Json& a) { return Marking(a.get<std::vector<int>>()); };
  AnalysisReport r;
  const auto& in = j.at("input");
  r.type = in.at("type").get<std::string>();
  r.psi_p = marking(in.at("psi_p"));
  r.psi_q = marking(in.at("psi_q"));
  r.psi_p_local = in.at("psi_p_local").get<std::vector<std::string>>();
  r.psi_q_local = in.at("psi_q_local").get<std::vector<std::string>>();
  const auto& dims = j.at("dims");
  r.dim_gp = dims.at("gp");
  r.dim_gq = dims.at("gq");
  r.dim_gpq = dims.at("gpq");
  const auto& c = j.at("cycle");
  r.cycle = CycleDescriptor{c.at("type"), marking(c.at("marking")), c.at("dim"), c.at("is_point"),
                            c.at("is_whole_space")};
  r.dual_cycle_dim = j.at("dual_cycle_dim");
  r.tower = TowerDims{j.at("tower").at("k"), j.at("tower").at("l")};
  const auto& red = j.at("reduction");
  r.reduction.reduced_marking = marking(red.at("reduced"));
  r.reduction.is_already_reduced = red.at("is_already_reduced");
  for (const auto& [node, path] : red.at("witnesses").items())
    r.reduction.forced_witnesses.emplace(std::stoi(node), path.get<std::vector<int>>());
  const auto& conn = j.at("connectivity");
  r.connected = conn.at("connected");
  if (conn.at("computed").get<bool>()) {
    ChainAnalysis ch;
    ch.connected = conn.at("saturated");
    ch.complete = conn.at("complete");
    if (!conn.at("minimal_n").is_null()) ch.minimal_n = conn.at("minimal_n").get<int>();
    ch.weyl_order = conn.at("weyl_order");
    ch.reachable_sizes = conn.at("reachable_sizes").get<std::vector<std::uint64_t>>();
    ch.reachable_dims = conn.at("reachable_dims").get<std::vector<int>>();
    ch.quotient_marking = marking(conn.at("quotient_marking"));
    r.chain = std::move(ch);
  }
  const auto& fl = j.at("flags");
  r.flags.mok_zhang_exception = fl.at("mok_zhang_exception");
  const auto larger = fl.at("larger_automorphism_case").get<std::string>();
  for (auto c2 : {LargerAutomorphism::None, LargerAutomorphism::OddSymplecticProjective,
                  LargerAutomorphism::SpinorOddOrthogonal, LargerAutomorphism::G2Quadric}) {
    if (to_string(c2) == larger) r.flags.larger_automorphism_case = c2;
  }
  r.flags.reduced_p = marking(fl.at("reduced_p"));
  const auto boundary = j.at("boundary_class").get<std::string>();
  for (auto b : {BoundaryClass::AffineCell, BoundaryClass::CodimAtLeastTwo, BoundaryClass::CodimOne}) {
    if (to_string(b) == boundary) r.boundary = b;
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

inline AnalysisReport parse_report(std::string_view text) {
  return report_from_json(Json::parse(text));
}

// ---------------------------------------------------------------------------
// TSV and text
// ---------------------------------------------------------------------------

inline std::string tsv_header() {
  return "type\tpsi_p\tpsi_q\tdim_GP\tcycle_dim\treduced\tconnected\tminimal_n\texception";
}

inline std::string exception_label(const ExceptionFlags& f) {
  std::string out;
  if (f.mok_zhang_exception) out = "mok_zhang";
  if (f.larger_automorphism_case != LargerAutomorphism::None) {
    if (!out.empty()) out += '+';
    out += to_string(f.larger_automorphism_case);
  }
  return out.empty() ? "none" : out;
}

inline std::string tsv_row(const AnalysisReport& r) {
  auto m = [](const Marking& x) { return x.empty() ? std::string("-") : x.to_string(); };
  std::string minimal = "-";
  if (r.chain && r.chain->minimal_n) minimal = std::to_string(*r.chain->minimal_n);
  std::ostringstream os;
  os << r.type << '\t' << m(r.psi_p) << '\t' << m(r.psi_q) << '\t' << r.dim_gp << '\t'
     << r.cycle.dim << '\t' << m(r.reduction.reduced_marking) << '\t'
     << (r.connected ? "true" : "false") << '\t' << minimal << '\t' << exception_label(r.flags);
  return os.str();
}

inline std::string render_text(const AnalysisReport& r) {
  auto m = [](const Marking& x) { return "{" + x.to_string() + "}"; };
  std::ostringstream os;
  os << "G/P of type " << r.type << ", psi_P = " << m(r.psi_p) << ", psi_Q = " << m(r.psi_q) << "\n";
  os << "  dim G/P = " << r.dim_gp << ", dim G/Q = " << r.dim_gq << ", dim G/(P∩Q) = " << r.dim_gpq
     << "\n";
  os << "  Q-cycle: ";
  if (r.cycle.is_point) {
    os << "point";
  } else {
    os << r.cycle.type_string << " marked " << m(r.cycle.marking) << ", dim " << r.cycle.dim;
    if (r.cycle.is_whole_space) os << " (whole space)";
  }
  os << "\n  P-cycle dim = " << r.dual_cycle_dim << "\n";
  os << "  tower dims (derived): j*(" << r.tower.k_cycle << "+" << r.tower.l_dual << ")\n";
  os << "  reduction of psi_Q mod psi_P = " << m(r.reduction.reduced_marking)
     << (r.reduction.is_already_reduced ? " (already reduced)" : "") << "\n";
  os << "  reduction of psi_P mod psi_Q = " << m(r.flags.reduced_p) << "\n";
  os << "  Q-cycle-connected: " << (r.connected ? "yes" : "no");
  if (!r.connected) os << " (quotient marking " << m(r.psi_p.intersection(r.psi_q)) << ")";
  os << "\n";
  if (r.chain) {
    os << "  minimal chain length N = "
       << (r.chain->minimal_n ? std::to_string(*r.chain->minimal_n) : std::string("none")) << "\n";
    os << "  reachable dims:";
    for (int x : r.chain->reachable_dims) os << ' ' << x;
    os << "\n  reachable sizes:";
    for (auto x : r.chain->reachable_sizes) os << ' ' << x;
    os << " (|W| = " << r.chain->weyl_order << ")\n";
  }
  os << "  exceptions: " << exception_label(r.flags) << "\n";
  os << "  boundary of open orbit: " << to_string(r.boundary) << "\n";
  for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

struct EnumerateOptions {
  bool nontrivial_only = false;
  AnalysisOptions analysis;
  unsigned threads = 1;
};

/// Every subset of {1..n}, sorted lexicographically as node lists.
inline std::vector<Marking> all_markings(int n) {
  std::vector<Marking> out;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
      if (mask & (1ULL << i)) nodes.push_back(i + 1);
    out.emplace_back(std::move(nodes));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Reports for every (psi_P, psi_Q) with psi_P nonempty, in lexicographic
/// order of (psi_P, psi_Q). Pairs are analyzed concurrently; the output order
/// does not depend on the thread count.
inline std::vector<AnalysisReport> enumerate_reports(const DynkinDiagram& d,
                                                     const EnumerateOptions& opts) {
  const auto rs = std::make_shared<const RootSystem>(d);
  const auto markings = all_markings(d.rank());
  std::vector<std::pair<Marking, Marking>> pairs;
  for (const auto& p : markings) {
    if (p.empty()) continue;
    for (const auto& q : markings) {
      if (opts.nontrivial_only && (p.subset_of(q) || q.empty())) continue;
      pairs.emplace_back(p, q);
    }
  }
  std::vector<AnalysisReport> out(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  auto work = [&] {
    while (!failed) {
      const std::size_t i = next++;
      if (i >= pairs.size()) return;
      try {
        out[i] = analyze(ParabolicPair(rs, pairs[i].first, pairs[i].second), opts.analysis);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

} // namespace parhom
