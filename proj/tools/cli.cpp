#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "itermean/charspec.hpp"
#include "itermean/errors.hpp"
#include "itermean/families.hpp"
#include "itermean/interval.hpp"
#include "itermean/json_io.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/recurfit.hpp"
#include "itermean/verifier.hpp"
#include "selftest.hpp"

namespace itermean::cli {

namespace {

constexpr double kPredictionTol = 1e-6;
constexpr double kAnchorTol = 1e-10;
constexpr double kSeparationFloor = 1e-6;

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

ParamMap parse_params(const std::string& text) {
  ParamMap out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("bad parameter '" + item + "', expected key=value");
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ParseError("bad value in '" + item + "'");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

Generator make_generator(const std::string& kind, double p, const Interval& domain) {
  if (kind == "identity") return Generator::identity(domain);
  if (kind == "log") return Generator::log(domain);
  if (kind == "power") return Generator::power(p, domain);
  throw ParseError("unknown generator '" + kind + "'");
}

// A spec document may be a single spec, an array of specs, or solve output.
std::vector<SolutionSpec> specs_from_json(const Json& doc) {
  const Json* list = &doc;
  if (doc.is_object() && doc.contains("status")) {
    if (doc.at("status") != "ok") throw ParseError("solution file reports status " + doc.at("status").dump());
    list = &doc.at("solutions");
  }
  std::vector<SolutionSpec> out;
  if (list->is_array()) {
    for (const auto& s : *list) out.push_back(solution_from_json(s));
  } else {
    out.push_back(solution_from_json(*list));
  }
  if (out.empty()) throw ParseError("solution file holds no solutions");
  return out;
}

struct Options {
  int n = 0;
  int k = 0;
  double tol = kDefaultResidualTol;
  bool json = false;
  std::string interval = "(-inf,+inf)";
  std::string params;
  std::string generator = "identity";
  double p = 2.0;
  std::string solution;
  int samples = kDefaultSamples;
  double verify_tol = kDefaultVerifyTol;
  double x0 = 0.0;
  int steps = 10;
  int back = 0;
  std::optional<std::size_t> index;
  std::string csv;
  std::string orbit_file;
};

int cmd_analyze(const Options& o, std::ostream& out) {
  const CharProblem prob(o.n, o.k);
  const RootReport r = analyze_roots(prob, o.tol);
  const bool sep_ok = !r.modulus_separation_min_gap || *r.modulus_separation_min_gap > kSeparationFloor;
  const bool ok = r.expectation_matched && r.bound_2n1_ok && sep_ok;
  if (o.json) {
    Json j = to_json(r);
    j["pass"] = ok;
    out << dump_json(j) << '\n';
    return ok ? kPass : kCheckFailed;
  }
  out << "n=" << o.n << " k=" << o.k << " case " << to_string(r.label) << '\n';
  out << "real roots:\n";
  for (const auto& x : r.real_roots) {
    out << "  " << short_num(x.value);
    if (x.multiplicity > 1) out << " (multiplicity " << x.multiplicity << ")";
    if (!x.bracket.degenerate()) out << " in (" << short_num(x.bracket.lo) << ", " << short_num(x.bracket.hi) << ")";
    out << '\n';
  }
  out << "complex roots:" << (r.complex_roots.empty() ? " none" : "") << '\n';
  for (const auto& z : r.complex_roots) {
    out << "  " << short_num(z.re) << (z.im < 0 ? " - " : " + ") << short_num(std::abs(z.im)) << "i  |z| = "
        << short_num(z.modulus) << '\n';
  }
  out << "max modulus " << short_num(r.max_modulus) << " vs bound " << 2 * o.n + 1 << ": "
      << (r.bound_2n1_ok ? "ok" : "violated") << " (margin " << short_num(r.bound_margin) << ")\n";
  out << "modulus separation: ";
  if (!r.modulus_separation_min_gap) {
    out << "not applicable (k and n even)\n";
  } else if (std::isinf(*r.modulus_separation_min_gap)) {
    out << "no complex roots\n";
  } else {
    out << "min gap " << short_num(*r.modulus_separation_min_gap) << (sep_ok ? "" : " (too small)") << '\n';
  }
  out << "expectations: " << (r.expectation_matched ? "matched" : "MISMATCH") << '\n';
  for (const auto& m : r.mismatches) out << "  " << m << '\n';
  return ok ? kPass : kCheckFailed;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const CharProblem prob(o.n, o.k);
  const Interval domain = Interval::parse(o.interval);
  const ParamMap params = parse_params(o.params);
  const Generator gen = make_generator(o.generator, o.p, domain);
  const bool conj = gen.kind() != GeneratorKind::Identity;
  const Interval inner_domain = conj ? gen.image() : domain;

  const FamilyList list = enumerate_families(prob, inner_domain);
  if (list.status == FamilyStatus::OpenProblem) {
    const Json j{{"status", "open_problem"}, {"n", o.n}, {"k", o.k}};
    out << dump_json(j, o.json ? 2 : -1) << '\n';
    return kOpenProblem;
  }
  Json solutions = Json::array();
  Json families = Json::array();
  for (const auto& fam : list.families) {
    const SolutionSpec s = instantiate(fam, inner_domain, params);
    solutions.push_back(to_json(conj ? conjugate(gen, s) : s));
    families.push_back(to_json(fam));
  }
  Json doc{{"status", "ok"}, {"n", o.n}, {"k", o.k}, {"interval", to_json(domain)}};
  if (conj) doc["generator"] = to_json(gen);
  doc["families"] = families;
  doc["solutions"] = solutions;
  if (o.json) {
    out << dump_json(doc) << '\n';
    return kPass;
  }
  out << "n=" << o.n << " k=" << o.k << " on " << domain.to_string() << '\n';
  for (std::size_t i = 0; i < list.families.size(); ++i) {
    const auto& fam = list.families[i];
    out << "- " << to_string(fam.kind);
    if (fam.slope) out << " slope " << short_num(*fam.slope);
    out << '\n' << "  " << dump_json(solutions[i], -1) << '\n';
  }
  return kPass;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const CharProblem prob(o.n, o.k);
  const auto specs = specs_from_json(read_json_file(o.solution));
  Json results = Json::array();
  bool all = true;
  for (const auto& s : specs) {
    std::optional<Generator> gen;
    if (o.generator == "auto") {
      const auto* c = std::get_if<ConjugateForm>(&s.form());
      if (c && c->direction == ConjugateDirection::Pullback) gen = c->gen;
    } else if (o.generator != "identity") {
      gen = make_generator(o.generator, o.p, s.domain());
    }
    const VerifyReport r = gen ? verify_general(s, *gen, prob, o.samples, o.verify_tol)
                               : verify_mean(s, prob, o.samples, o.verify_tol);
    Json item{{"family", to_string(s.family())},
              {"generator", gen ? to_json(*gen) : Json{{"kind", "identity"}}}};
    const Json rj = to_json(r);
    for (const auto& [key, value] : rj.items()) item[key] = value;
    results.push_back(item);
    all = all && r.pass;
  }
  const Json doc{{"n", o.n}, {"k", o.k}, {"pass", all}, {"results", results}};
  out << dump_json(doc) << '\n';
  return all ? kPass : kCheckFailed;
}

int cmd_orbit(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.steps < 0 || o.back < 0) throw ParseError("--steps and --back must be non-negative");
  const auto specs = specs_from_json(read_json_file(o.solution));
  if (!o.index && specs.size() != 1) {
    throw ParseError("the file holds " + std::to_string(specs.size()) + " solutions; pick one with --index");
  }
  const std::size_t idx = o.index.value_or(0);
  if (idx >= specs.size()) throw ParseError("--index out of range");
  const Orbit orbit = iterate(specs[idx], o.x0, -o.back, o.steps);
  if (o.csv.empty()) {
    write_orbit_csv(out, orbit);
  } else {
    std::ofstream file(o.csv);
    if (!file) throw ParseError("cannot write '" + o.csv + "'");
    write_orbit_csv(file, orbit);
  }
  if (orbit.escaped) {
    err << "orbit left the domain at index " << orbit.escape_index.value_or(0) << '\n';
    return kCheckFailed;
  }
  return kPass;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const CharProblem prob(o.n, o.k);
  std::ifstream in(o.orbit_file);
  if (!in) throw ParseError("cannot open '" + o.orbit_file + "'");
  const Orbit orbit = read_orbit_csv(in);
  const Spectrum spectrum = Spectrum::from_report(analyze_roots(prob));
  const int have = orbit.m_hi() + 1;
  if (have < spectrum.degree()) {
    throw TooShort("orbit has " + std::to_string(have) + " forward rows, the spectrum needs " +
                   std::to_string(spectrum.degree()));
  }
  PredictionReport rep;
  try {
    rep = fit_and_predict(orbit, spectrum);
  } catch (const SingularSystem& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  const bool ok = rep.anchor_residual <= kAnchorTol && rep.max_relative_error <= kPredictionTol;
  if (o.json) {
    const Json doc{{"n", o.n},
                   {"k", o.k},
                   {"closed_form", to_json(rep.fit)},
                   {"anchor_residual", rep.anchor_residual},
                   {"held_out", rep.held_out},
                   {"max_relative_error", rep.max_relative_error},
                   {"pass", ok}};
    out << dump_json(doc) << '\n';
    return ok ? kPass : kCheckFailed;
  }
  out << "closed form (n=" << o.n << " k=" << o.k << "):\n";
  for (const auto& t : rep.fit.real_terms) {
    out << "  lambda " << short_num(t.lambda) << ": A(j) coefficients";
    for (double c : t.poly_coeffs) out << ' ' << short_num(c);
    out << '\n';
  }
  for (const auto& t : rep.fit.complex_terms) {
    out << "  |mu| " << short_num(t.modulus) << " phi " << short_num(t.argument) << ": B";
    for (double c : t.cos_poly) out << ' ' << short_num(c);
    out << "  C";
    for (double c : t.sin_poly) out << ' ' << short_num(c);
    out << '\n';
  }
  out << "anchor residual " << short_num(rep.anchor_residual) << '\n';
  out << "held-out rows " << rep.held_out << ", max relative error " << short_num(rep.max_relative_error) << '\n';
  out << (ok ? "pass" : "FAIL") << '\n';
  return ok ? kPass : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative mean equations: root analysis, solution families and verification", "itermean"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Characteristic roots of (n+1) r^k = 1 + r + ... + r^n");
  analyze->add_option("--n", o.n, "Number of iterates n (>= 2)")->required();
  analyze->add_option("--k", o.k, "Iterate order k (0 <= k <= n)")->required();
  analyze->add_option("--tol", o.tol, "Root residual tolerance");
  analyze->add_flag("--json", o.json, "Machine-readable output");

  auto* solve = app.add_subcommand("solve", "Continuous solution families on an interval");
  solve->add_option("--n", o.n)->required();
  solve->add_option("--k", o.k)->required();
  solve->add_option("--interval", o.interval, "Domain such as \"(-inf,+inf)\" or \"[0,1)\"");
  solve->add_option("--params", o.params, "Family parameters, e.g. \"c=1\" or \"a=0,b=1\"");
  solve->add_option("--generator", o.generator, "Mean generator: identity, log or power")
      ->check(CLI::IsMember({"identity", "log", "power"}));
  solve->add_option("--p", o.p, "Power generator exponent");
  solve->add_flag("--json", o.json);

  auto* verify = app.add_subcommand("verify", "Grid verification of solution specs");
  verify->add_option("--n", o.n)->required();
  verify->add_option("--k", o.k)->required();
  verify->add_option("--solution", o.solution, "Solution spec JSON file")->required();
  verify->add_option("--samples", o.samples);
  verify->add_option("--tol", o.verify_tol);
  o.generator = "auto";
  verify->add_option("--generator", o.generator, "auto, identity, log or power")
      ->check(CLI::IsMember({"auto", "identity", "log", "power"}));
  verify->add_option("--p", o.p);
  verify->add_flag("--json", o.json);

  auto* orbit = app.add_subcommand("orbit", "Orbit of a solution as CSV");
  orbit->add_option("--solution", o.solution)->required();
  orbit->add_option("--x0", o.x0)->required();
  orbit->add_option("--steps", o.steps);
  orbit->add_option("--back", o.back);
  orbit->add_option("--csv", o.csv, "Output file (default stdout)");
  orbit->add_option("--index", o.index, "Which solution to use when the file holds several");

  auto* fit = app.add_subcommand("fit-recurrence", "Closed-form fit of an orbit and held-out prediction check");
  fit->add_option("--n", o.n)->required();
  fit->add_option("--k", o.k)->required();
  fit->add_option("--orbit", o.orbit_file, "Orbit CSV file")->required();
  fit->add_flag("--json", o.json);

  auto* self = app.add_subcommand("selftest", "Run the acceptance criteria");

  std::vector<std::string> storage{"itermean"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kPass : kUsage;
  }
  if (solve->parsed() && o.generator == "auto") o.generator = "identity";

  try {
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (orbit->parsed()) return cmd_orbit(o, out, err);
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (self->parsed()) return selftest::report(selftest::run_all(), out) ? kPass : kCheckFailed;
  } catch (const BracketFailure& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace itermean::cli
