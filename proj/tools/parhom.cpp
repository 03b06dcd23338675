// parhom: analyze marked Dynkin diagrams (G/P with a second parabolic Q).
//
//   parhom analyze --type A3 --p 2 --q 1 --chain-length [--json]
//   parhom enumerate --type F4 --with-chains --format tsv
//
// Exit codes: 0 ok, 2 input error, 3 Weyl guard limit, 4 consistency failure.

#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "parhom/parhom.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitGuard = 3;
constexpr int kExitConsistency = 4;

struct AnalyzeArgs {
  std::string type;
  std::string p;
  std::string q;
  bool chain = false;
  int max_k = parhom::kDefaultMaxK;
  bool json = false;
  std::uint64_t weyl_limit = 0;
};

struct EnumerateArgs {
  std::string type;
  bool nontrivial_only = false;
  bool with_chains = false;
  std::string format = "tsv";
  int max_k = parhom::kDefaultMaxK;
  std::uint64_t weyl_limit = 0;
  unsigned threads = 0;
};

std::uint64_t resolve_limit(std::uint64_t flag) {
  return flag > 0 ? flag : parhom::weyl_limit_from_env();
}

int run_analyze(const AnalyzeArgs& args) {
  const auto diagram = parhom::parse_diagram_spec(args.type);
  const auto p = parhom::parse_marking(args.p);
  const auto q = parhom::parse_marking(args.q);
  diagram.validate(p);
  diagram.validate(q);
  parhom::AnalysisOptions opts;
  opts.chain = args.chain;
  opts.max_k = args.max_k;
  opts.weyl_limit = resolve_limit(args.weyl_limit);
  const auto report = parhom::analyze(diagram, p, q, opts);
  if (args.json) {
    std::cout << parhom::render_json(report) << '\n';
  } else {
    std::cout << parhom::render_text(report);
  }
  return 0;
}

int run_enumerate(const EnumerateArgs& args) {
  const auto diagram = parhom::parse_diagram_spec(args.type);
  if (args.format != "tsv" && args.format != "json") {
    throw parhom::ParseError("unknown format '" + args.format + "'");
  }
  parhom::EnumerateOptions opts;
  opts.nontrivial_only = args.nontrivial_only;
  opts.analysis.chain = args.with_chains;
  opts.analysis.max_k = args.max_k;
  opts.analysis.weyl_limit = resolve_limit(args.weyl_limit);
  opts.threads = args.threads > 0 ? args.threads : std::max(1u, std::thread::hardware_concurrency());
  const auto reports = parhom::enumerate_reports(diagram, opts);

  std::string out;
  if (args.format == "tsv") {
    out += parhom::tsv_header() + '\n';
    for (const auto& r : reports) out += parhom::tsv_row(r) + '\n';
  } else {
    for (const auto& r : reports) out += parhom::render_json(r, -1) + '\n';
  }
  std::cout << out;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorics of rational homogeneous spaces G/P and their Q-cycles"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Full invariant report for one (type, psi_P, psi_Q)");
  a->add_option("--type", analyze.type, "Diagram, e.g. A3 or A2xG2")->required();
  a->add_option("--p", analyze.p, "Marking of P, e.g. 2,4 (empty string for none)")->required();
  a->add_option("--q", analyze.q, "Marking of Q")->required();
  a->add_flag("--chain-length", analyze.chain, "Run the Weyl-group reachability search");
  a->add_option("--max-k", analyze.max_k, "Chain length cap")->check(CLI::PositiveNumber);
  a->add_flag("--json", analyze.json, "Emit the parhom/1 JSON report");
  a->add_option("--weyl-limit", analyze.weyl_limit, "Weyl enumeration guard (default 1000000)");

  EnumerateArgs enumerate;
  auto* e = app.add_subcommand("enumerate", "One row per (psi_P, psi_Q) with psi_P nonempty");
  e->add_option("--type", enumerate.type, "Diagram")->required();
  e->add_flag("--nontrivial-only", enumerate.nontrivial_only, "Keep only Q not in P and Q != G");
  e->add_flag("--with-chains", enumerate.with_chains, "Run chain analysis on every row");
  e->add_option("--format", enumerate.format, "tsv or json (one object per line)");
  e->add_option("--max-k", enumerate.max_k, "Chain length cap")->check(CLI::PositiveNumber);
  e->add_option("--weyl-limit", enumerate.weyl_limit, "Weyl enumeration guard");
  e->add_option("--threads", enumerate.threads, "Worker threads (default: hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitParse;
  }

  try {
    if (a->parsed()) return run_analyze(analyze);
    return run_enumerate(enumerate);
  } catch (const parhom::ParseError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitParse;
  } catch (const parhom::GuardLimitError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitGuard;
  } catch (const parhom::ConsistencyError& err) {
    std::cerr << "internal consistency failure: " << err.what() << '\n';
    return kExitConsistency;
  }
}
