// SPDX-License-Identifier: Apache-2.0
//
// nilbridge: generate frames, bridge or invert erased coefficients, recover
// samples and audit skew spark from the command line.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nilbridge/bridging.hpp"
#include "nilbridge/errors.hpp"
#include "nilbridge/fixtures.hpp"
#include "nilbridge/inversion.hpp"
#include "nilbridge/io.hpp"
#include "nilbridge/sampling.hpp"
#include "nilbridge/spark_lab.hpp"

namespace {

using namespace nilbridge;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kNoRobustBridge = 3,
  kNotInvertible = 4,
  kBudget = 5,
};

/// Raised for bad flags or inputs detected by the CLI itself.
struct UsageError : Error {
  using Error::Error;
};

struct Globals {
  double tol_rank = Tolerance::kDefaultRankRel;
  double tol_residual = Tolerance::kDefaultResidualRel;
  std::uint64_t seed = 0;
  std::string json_report;

  Tolerance tolerance() const { return {tol_rank, tol_residual}; }
};

/// Parses "2,4" (1-based) into an index set. "" and "none" are empty.
IndexSet parse_indices(const std::string& text, std::size_t universe) {
  std::vector<std::size_t> out;
  if (text.empty() || text == "none") return IndexSet(universe, out);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad index '" + item + "'");
    }
    if (pos != item.size() || v < 1 || v > universe) {
      throw UsageError("index '" + item + "' outside 1.." + std::to_string(universe));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return IndexSet::from_one_based(universe, out);
}

json indices_json(const IndexSet& s) { return s.one_based(); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

DualFramePair load_pair(const std::string& f_path, const std::string& g_path,
                        const Tolerance& tol) {
  const auto f = io::read_frame(io::read_text_file(f_path));
  const auto g = io::read_frame(io::read_text_file(g_path));
  return DualFramePair(f.frame, g.frame, tol);
}

/// Erasures are the indices missing from the coefficient file unless given
/// explicitly; explicit erasures must cover every missing index.
IndexSet resolve_erasures(const std::string& flag, bool given, CoefficientMap& known,
                          std::size_t universe) {
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < universe; ++j) {
    if (known.count(j) == 0) missing.push_back(j);
  }
  if (!given) return IndexSet(universe, missing);
  IndexSet erased = parse_indices(flag, universe);
  for (std::size_t j : missing) {
    if (!erased.contains(j)) {
      throw UsageError("coefficient " + std::to_string(j + 1) +
                       " is missing but not listed in --erase");
    }
  }
  for (std::size_t j : erased) known.erase(j);
  return erased;
}

CoefficientMap merge(const CoefficientMap& known, const IndexSet& erased, const Vector& values) {
  CoefficientMap out = known;
  for (std::size_t k = 0; k < erased.size(); ++k) {
    out[erased[k]] = values(static_cast<Eigen::Index>(k));
  }
  return out;
}

json reconstruction_json(const ReconstructionReport& r) {
  json j;
  j["recovered_coefficients"] = vector_json(r.recovered_coefficients);
  j["partial"] = vector_json(r.partial);
  if (r.recovered_vector) j["recovered_vector"] = vector_json(*r.recovered_vector);
  if (r.supplement) j["supplement"] = vector_json(*r.supplement);
  if (r.bridged) j["bridged"] = vector_json(*r.bridged);
  if (r.reduced_error) j["reduced_error"] = vector_json(*r.reduced_error);
  return j;
}

std::string redundancy_diagnosis(bool holds) {
  return holds ? "minimal redundancy holds for the erased set, so another bridge set "
                 "is robust (omit --bridge to search for one)"
               : "minimal redundancy fails: the remaining analysis vectors do not span "
                 "the space, so no bridge set can be robust";
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  std::size_t big_n = 0;
  bool complex = false;
  std::string out = "frame";
};

int run_gen(const GenArgs& a, const Globals& g, json& result) {
  const Field field = a.complex ? Field::complex : Field::real;
  Rng rng = make_rng(g.seed);
  std::optional<DualFramePair> pair;
  const bool random_kind = a.kind == "random-parseval" || a.kind == "random-dual-pair";
  if (random_kind) {
    if (a.n < 1 || a.big_n < a.n) throw UsageError("gen " + a.kind + " needs 1 <= n <= N");
  } else if (a.n != 0 || a.big_n != 0) {
    throw UsageError("gen " + a.kind + " has fixed dimensions; drop --n/--N");
  }
  if (a.kind == "random-parseval") {
    const Frame f = random_parseval_frame(a.n, a.big_n, rng, field);
    pair.emplace(f, f, g.tolerance());
  } else if (a.kind == "random-dual-pair") {
    const Frame f = random_gaussian_frame(a.n, a.big_n, rng, field);
    pair.emplace(f, random_dual(f, rng()), g.tolerance());
  } else if (a.kind == "paper-2d") {
    pair = paper_2d_pair();
  } else if (a.kind == "example-3-3") {
    pair = nilpotent_pair();
  } else if (a.kind == "mercedes") {
    const Frame f = mercedes_benz();
    pair.emplace(f, f, g.tolerance());
  } else {
    throw UsageError("unknown gen kind '" + a.kind + "'");
  }
  const Field tag = random_kind ? field : Field::real;
  const std::string f_path = a.out + "_F.json";
  const std::string g_path = a.out + "_G.json";
  io::write_text_file(f_path, io::write_frame({tag, pair->synthesis(), "synthesis"}));
  io::write_text_file(g_path, io::write_frame({tag, pair->analysis(), "analysis"}));
  result["kind"] = a.kind;
  result["n"] = pair->dim();
  result["N"] = pair->size();
  result["files"] = {f_path, g_path};
  result["duality_residual"] = pair->duality_residual();
  std::cout << "wrote " << f_path << " and " << g_path << "\n";
  return kOk;
}

// ---------------------------------------------------------------- bridge

struct PairArgs {
  std::string f_path;
  std::string g_path;
  std::string coeffs;
  std::string out;
  std::string erase;
};

struct BridgeArgs : PairArgs {
  std::string bridge;
  std::string solution = "minimum-norm";
};

int run_bridge(const BridgeArgs& a, bool erase_given, bool bridge_given, const Globals& g,
               json& result) {
  const Tolerance tol = g.tolerance();
  const DualFramePair pair = load_pair(a.f_path, a.g_path, tol);
  CoefficientMap known = io::read_coefficients(io::read_text_file(a.coeffs), pair.size());
  const IndexSet erased = resolve_erasures(a.erase, erase_given, known, pair.size());
  result["erased"] = indices_json(erased);

  if (erased.empty()) {
    io::write_text_file(a.out, io::write_coefficients(known));
    result["bridge"] = json::array();
    result["robust"] = true;
    result["residual"] = 0.0;
    std::cout << "nothing erased; wrote " << a.out << "\n";
    return kOk;
  }

  LeastSquaresSolution kind = LeastSquaresSolution::minimum_norm;
  if (a.solution == "basic") {
    kind = LeastSquaresSolution::basic;
  } else if (a.solution != "minimum-norm") {
    throw UsageError("--solution must be 'minimum-norm' or 'basic'");
  }

  std::optional<BridgePlan> plan;
  if (bridge_given) {
    const IndexSet bridge = parse_indices(a.bridge, pair.size());
    if (!bridge.disjoint(erased)) throw UsageError("--bridge overlaps the erased set");
    plan = solve_bridge(pair, erased, bridge, tol, kind);
  } else {
    plan = find_bridge_set(pair, erased, tol).plan;
    if (kind == LeastSquaresSolution::basic) plan = solve_bridge(pair, erased, plan->bridge, tol, kind);
  }
  result["bridge"] = indices_json(plan->bridge);
  result["robust"] = plan->robust;
  result["residual"] = plan->residual;
  if (!plan->robust) {
    const bool holds = minimal_redundancy(pair.analysis(), erased, tol);
    result["minimal_redundancy"] = holds;
    throw NoRobustBridge("bridge set " + json(plan->bridge.one_based()).dump() +
                             " is not robust (residual " + io::format_double(plan->residual) +
                             ")",
                         holds);
  }
  const auto report = reconstruct_vector(*plan, known);
  result["coefficients"] = io::matrix_to_json(plan->coefficients);
  result["reconstruction"] = reconstruction_json(report);
  io::write_text_file(a.out, io::write_coefficients(merge(known, erased, report.recovered_coefficients)));
  std::cout << "recovered " << erased.size() << " coefficient(s) with bridge set "
            << json(plan->bridge.one_based()).dump() << "; wrote " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- invert

int run_invert(const PairArgs& a, bool erase_given, const Globals& g, json& result) {
  const Tolerance tol = g.tolerance();
  const DualFramePair pair = load_pair(a.f_path, a.g_path, tol);
  CoefficientMap known = io::read_coefficients(io::read_text_file(a.coeffs), pair.size());
  const IndexSet erased = resolve_erasures(a.erase, erase_given, known, pair.size());
  result["erased"] = indices_json(erased);
  const auto report = reconstruct_via_inverse(pair, erased, known, tol);
  result["reconstruction"] = reconstruction_json(report);
  io::write_text_file(a.out, io::write_coefficients(merge(known, erased, report.recovered_coefficients)));
  std::cout << "recovered " << erased.size() << " coefficient(s) by inversion; wrote " << a.out
            << "\n";
  return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string scheme = "trig";
  std::size_t n = 0;
  std::size_t big_n = 0;
  double p = 0.5;
  std::size_t half_width = 8;
  std::string scheme_in;
  std::string scheme_out;
  std::string samples;
  std::string erase;
  std::string bridge;
  std::string out;
};

double shannon_test_function(double t) {
  const double s = sinc(std::numbers::pi * (t - 0.3) / 2.0);
  return s * s;
}

int run_sample(const SampleArgs& a, bool erase_given, bool bridge_given, const Globals& g,
               json& result) {
  const Tolerance tol = g.tolerance();
  SamplingScheme scheme;
  if (!a.scheme_in.empty()) {
    scheme = io::scheme_from_json(json::parse(io::read_text_file(a.scheme_in)));
  } else if (a.scheme == "trig") {
    if (a.n < 1 || a.big_n < a.n) throw UsageError("sample trig needs 1 <= n <= N");
    scheme = build_trig_scheme(a.n, a.big_n);
  } else if (a.scheme == "shannon") {
    if (!(a.p > 0.0 && a.p <= 1.0) || a.half_width < 1) {
      throw UsageError("sample shannon needs 0 < p <= 1 and K >= 1");
    }
    scheme = build_truncated_shannon(a.p, a.half_width);
  } else {
    throw UsageError("--scheme must be 'trig' or 'shannon'");
  }
  if (!a.scheme_out.empty()) io::write_text_file(a.scheme_out, io::to_json(scheme).dump(2) + "\n");
  const std::size_t big_n = scheme.size();
  result["scheme"] = to_string(scheme.kind);
  result["points"] = big_n;

  CoefficientMap known;
  std::optional<Vector> truth;
  if (!a.samples.empty()) {
    known = io::read_coefficients(io::read_text_file(a.samples), big_n);
  } else {
    // No samples given: draw a member of the space and keep its exact samples.
    Vector all(static_cast<Eigen::Index>(big_n));
    if (scheme.kind == SchemeKind::trig_poly) {
      Rng rng = make_rng(g.seed);
      all = sample_trig(scheme, random_vector(scheme.space_dim, rng, Field::complex));
    } else if (scheme.kind == SchemeKind::truncated_shannon) {
      for (std::size_t k = 0; k < big_n; ++k) {
        all(static_cast<Eigen::Index>(k)) = shannon_test_function(scheme.points[k].value());
      }
    } else {
      throw UsageError("custom schemes need --samples");
    }
    for (std::size_t k = 0; k < big_n; ++k) known[k] = all(static_cast<Eigen::Index>(k));
    truth = all;
    if (!erase_given) throw UsageError("sample without --samples needs --erase");
  }
  const IndexSet erased = resolve_erasures(a.erase, erase_given, known, big_n);
  const IndexSet bridge = bridge_given ? parse_indices(a.bridge, big_n)
                                       : choose_sampling_bridge(scheme, erased, tol);
  if (!bridge.disjoint(erased)) throw UsageError("--bridge overlaps the erased set");
  result["erased"] = indices_json(erased);
  result["bridge"] = indices_json(bridge);
  const Vector rec = recover_samples(scheme, erased, bridge, known, tol);
  result["recovered_samples"] = vector_json(rec);
  if (truth) {
    double err = 0.0;
    for (std::size_t k = 0; k < erased.size(); ++k) {
      err = std::max(err, std::abs(rec(static_cast<Eigen::Index>(k)) -
                                   (*truth)(static_cast<Eigen::Index>(erased[k]))));
    }
    result["max_abs_error"] = err;
    std::cout << "max abs error against direct evaluation: " << io::format_double(err) << "\n";
  }
  if (!a.out.empty()) io::write_text_file(a.out, io::write_coefficients(merge(known, erased, rec)));
  std::cout << "recovered " << erased.size() << " sample(s)\n";
  return kOk;
}

// ---------------------------------------------------------------- audit

struct AuditArgs {
  std::string f_path;
  std::string g_path;
  std::size_t k = 1;
  double budget = kDefaultAuditBudget;
  bool serial = false;
  bool genericity = false;
  std::size_t n = 2;
  std::size_t big_n = 4;
  std::size_t trials = 100;
  bool complex = false;
  std::string out;
};

json audit_json(const SkewSparkReport& r) {
  json j;
  j["k_requested"] = r.k_requested;
  j["k_checked"] = r.k_checked;
  j["bound"] = r.bound;
  j["skew_spark"] = r.skew_spark;
  j["full"] = r.full;
  j["complete"] = r.complete;
  j["matrices_checked"] = r.matrices_checked;
  j["failure_count"] = r.failure_count;
  j["near_singular_count"] = r.near_singular_count;
  j["worst_condition"] = finite_or_null(r.worst_condition);
  j["spark_lower_bound"] = r.spark_lower_bound;
  json fails = json::array();
  for (const auto& f : r.failures) {
    fails.push_back({{"erased", indices_json(f.erased)},
                     {"bridge", indices_json(f.bridge)},
                     {"rank", f.rank},
                     {"condition", finite_or_null(f.condition)},
                     {"near_singular", f.near_singular}});
  }
  j["failures"] = std::move(fails);
  return j;
}

int run_audit(const AuditArgs& a, const Globals& g, json& result) {
  const Tolerance tol = g.tolerance();
  const Execution exec = a.serial ? Execution::serial : Execution::parallel;
  if (a.genericity) {
    if (a.n < 1 || a.big_n < a.n || a.k < 1 || 2 * a.k > a.big_n) {
      throw UsageError("audit --genericity needs 1 <= n <= N and 1 <= 2k <= N");
    }
    const auto stats = genericity_trial(a.n, a.big_n, a.trials, a.k, g.seed,
                                        a.complex ? Field::complex : Field::real, tol, exec);
    std::ostringstream csv;
    csv << "trial,n,N,k,failures,worst_condition\n";
    for (const auto& row : stats.rows) {
      csv << row.trial << ',' << row.n << ',' << row.big_n << ',' << row.k << ',' << row.failures
          << ',' << io::format_double(row.worst_condition) << '\n';
    }
    if (a.out.empty()) {
      std::cout << csv.str();
    } else {
      io::write_text_file(a.out, csv.str());
    }
    result["trials"] = stats.rows.size();
    result["failed_trials"] = stats.failed_trials;
    result["failure_frequency"] = stats.failure_frequency;
    result["worst_condition"] = finite_or_null(stats.worst_condition);
    std::cerr << "failure frequency " << io::format_double(stats.failure_frequency) << " over "
              << stats.rows.size() << " trial(s)\n";
    return kOk;
  }
  if (a.f_path.empty() || a.g_path.empty()) throw UsageError("audit needs --F and --G");
  if (!(a.budget >= 1.0)) throw UsageError("--budget must be at least 1");
  const DualFramePair pair = load_pair(a.f_path, a.g_path, tol);
  const auto report = skew_spark_audit(pair, a.k, tol, a.budget, exec);
  result["audit"] = audit_json(report);
  if (!a.out.empty()) io::write_text_file(a.out, result["audit"].dump(2) + "\n");
  std::cout << "skew spark " << report.skew_spark << " (bound " << report.bound << ", checked k <= "
            << report.k_checked << ")" << (report.full ? ", full" : "") << "\n";
  if (!report.complete) {
    std::cerr << "budget exhausted after " << report.matrices_checked
              << " matrices; results are partial\n";
    return kBudget;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilbridge: erasure recovery for finite dual frame pairs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--tol-rank", globals.tol_rank, "relative rank cutoff")->check(CLI::Range(0.0, 1.0));
  app.add_option("--tol-residual", globals.tol_residual, "relative residual cutoff")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", globals.seed, "random seed");
  app.add_option("--json-report", globals.json_report, "write a JSON report to PATH");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a dual frame pair");
  gen_cmd->add_option("kind", gen.kind,
                      "random-parseval | random-dual-pair | paper-2d | example-3-3 | mercedes")
      ->required();
  gen_cmd->add_option("--n", gen.n, "dimension");
  gen_cmd->add_option("--N", gen.big_n, "number of vectors");
  gen_cmd->add_flag("--complex", gen.complex, "complex entries");
  gen_cmd->add_option("--out", gen.out, "output prefix (writes PREFIX_F.json, PREFIX_G.json)");

  BridgeArgs br;
  auto* br_cmd = app.add_subcommand("bridge", "recover erased coefficients by nilpotent bridging");
  br_cmd->add_option("--F", br.f_path, "synthesis frame file")->required();
  br_cmd->add_option("--G", br.g_path, "analysis frame file")->required();
  br_cmd->add_option("--coeffs", br.coeffs, "known coefficients (CSV)")->required();
  br_cmd->add_option("--out", br.out, "output coefficients (CSV)")->required();
  auto* br_erase = br_cmd->add_option("--erase", br.erase, "erased indices, e.g. 2,4");
  auto* br_bridge = br_cmd->add_option("--bridge", br.bridge, "bridge indices (default: search)");
  br_cmd->add_option("--solution", br.solution, "minimum-norm | basic");

  PairArgs inv;
  auto* inv_cmd = app.add_subcommand("invert", "recover erased coefficients by inverting R");
  inv_cmd->add_option("--F", inv.f_path, "synthesis frame file")->required();
  inv_cmd->add_option("--G", inv.g_path, "analysis frame file")->required();
  inv_cmd->add_option("--coeffs", inv.coeffs, "known coefficients (CSV)")->required();
  inv_cmd->add_option("--out", inv.out, "output coefficients (CSV)")->required();
  auto* inv_erase = inv_cmd->add_option("--erase", inv.erase, "erased indices");

  SampleArgs sm;
  auto* sm_cmd = app.add_subcommand("sample", "recover missing samples");
  sm_cmd->add_option("--scheme", sm.scheme, "trig | shannon");
  sm_cmd->add_option("--n", sm.n, "trig: dimension");
  sm_cmd->add_option("--N", sm.big_n, "trig: number of points");
  sm_cmd->add_option("--p", sm.p, "shannon: spacing");
  sm_cmd->add_option("--K", sm.half_width, "shannon: half width");
  sm_cmd->add_option("--scheme-in", sm.scheme_in, "read the scheme from a JSON file");
  sm_cmd->add_option("--scheme-out", sm.scheme_out, "write the scheme to a JSON file");
  sm_cmd->add_option("--samples", sm.samples, "known samples (CSV, 1-based positions)");
  auto* sm_erase = sm_cmd->add_option("--erase", sm.erase, "erased positions");
  auto* sm_bridge = sm_cmd->add_option("--bridge", sm.bridge, "bridge positions");
  sm_cmd->add_option("--out", sm.out, "output samples (CSV)");

  AuditArgs au;
  auto* au_cmd = app.add_subcommand("audit", "skew spark audit and genericity trials");
  au_cmd->add_option("--F", au.f_path, "synthesis frame file");
  au_cmd->add_option("--G", au.g_path, "analysis frame file");
  au_cmd->add_option("--k", au.k, "largest erasure size to check");
  au_cmd->add_option("--budget", au.budget, "maximum number of bridge matrices");
  au_cmd->add_flag("--serial", au.serial, "disable OpenMP");
  au_cmd->add_flag("--genericity", au.genericity, "run seeded genericity trials instead");
  au_cmd->add_option("--n", au.n, "genericity: dimension");
  au_cmd->add_option("--N", au.big_n, "genericity: number of vectors");
  au_cmd->add_option("--trials", au.trials, "genericity: number of trials");
  au_cmd->add_flag("--complex", au.complex, "genericity: complex frames");
  au_cmd->add_option("--out", au.out, "output file (report JSON or trials CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  json report;
  report["schema_version"] = io::kSchemaVersion;
  report["tolerances"] = {{"rank_rel", globals.tol_rank}, {"residual_rel", globals.tol_residual}};
  report["seed"] = globals.seed;
  json result = json::object();
  int code = kOk;
  std::string message = "ok";

  try {
    globals.tolerance();  // validates the pair before any work
    if (*gen_cmd) {
      report["command"] = "gen";
      code = run_gen(gen, globals, result);
    } else if (*br_cmd) {
      report["command"] = "bridge";
      code = run_bridge(br, br_erase->count() > 0, br_bridge->count() > 0, globals, result);
    } else if (*inv_cmd) {
      report["command"] = "invert";
      code = run_invert(inv, inv_erase->count() > 0, globals, result);
    } else if (*sm_cmd) {
      report["command"] = "sample";
      code = run_sample(sm, sm_erase->count() > 0, sm_bridge->count() > 0, globals, result);
    } else if (*au_cmd) {
      report["command"] = "audit";
      code = run_audit(au, globals, result);
    }
    if (code == kBudget) message = "budget exhausted; partial results";
  } catch (const NoRobustBridge& e) {
    code = kNoRobustBridge;
    message = std::string(e.what()) + "; " + redundancy_diagnosis(e.minimal_redundancy());
    result["minimal_redundancy"] = e.minimal_redundancy();
  } catch (const NotInvertible& e) {
    code = kNotInvertible;
    message = std::string(e.what()) + "; try 'nilbridge bridge' with the same inputs";
  } catch (const Error& e) {
    code = kUsage;
    message = e.what();
  } catch (const std::exception& e) {
    code = kInternal;
    message = std::string("internal error: ") + e.what();
  }

  if (code != kOk) std::cerr << "nilbridge: " << message << "\n";
  report["exit_code"] = code;
  report["status"] = code == kOk ? "ok" : code == kBudget ? "partial" : "error";
  report["message"] = message;
  report["result"] = std::move(result);
  if (!globals.json_report.empty()) {
    try {
      io::write_text_file(globals.json_report, report.dump(2) + "\n");
    } catch (const Error& e) {
      std::cerr << "nilbridge: " << e.what() << "\n";
      if (code == kOk) code = kUsage;
    }
  }
  return code;
}
