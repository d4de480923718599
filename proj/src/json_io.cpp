#include "itermean/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <variant>

#include "itermean/errors.hpp"

namespace itermean {

namespace {

void write(std::string& out, const Json& j, int indent, int depth) {
  const bool pretty = indent >= 0;
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        write(out, value, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(out, value, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double endpoint(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf") return -kInf;
    if (s == "+inf" || s == "inf") return kInf;
  }
  throw ParseError("interval endpoint must be a number, \"-inf\" or \"+inf\"");
}

Json endpoint_json(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
  return x;
}

std::vector<double> numbers(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Json branch_json(const DecreasingBranch& b) {
  switch (b.kind()) {
    case DecreasingBranch::Kind::Reciprocal: return {{"kind", "reciprocal"}, {"scale", b.scale()}};
    case DecreasingBranch::Kind::Linear:
      return {{"kind", "linear"}, {"slope", b.slope()}, {"intercept", b.intercept()}};
    case DecreasingBranch::Kind::Table: return {{"kind", "table"}, {"x", b.xs()}, {"y", b.ys()}};
  }
  return {};
}

DecreasingBranch branch_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "reciprocal") return DecreasingBranch::reciprocal(number(j, "scale"));
  if (k == "linear") return DecreasingBranch::linear(number(j, "slope"), number(j, "intercept"));
  if (k == "table") return DecreasingBranch::table(numbers(j, "x"), numbers(j, "y"));
  throw ParseError("unknown branch kind '" + k + "'");
}

Generator generator_from_json(const Json& j, const Interval& domain) {
  const Json& kind = field(j, "kind");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "identity") return Generator::identity(domain);
  if (k == "log") return Generator::log(domain);
  if (k == "power") return Generator::power(number(j, "p"), domain);
  throw ParseError("unknown generator kind '" + k + "'");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json to_json(const Interval& iv) {
  return {{"lo", endpoint_json(iv.lo())},
          {"hi", endpoint_json(iv.hi())},
          {"lo_closed", iv.lo_closed()},
          {"hi_closed", iv.hi_closed()}};
}

Interval interval_from_json(const Json& j) {
  if (j.is_string()) return Interval::parse(j.get<std::string>());
  const Json& lc = field(j, "lo_closed");
  const Json& hc = field(j, "hi_closed");
  if (!lc.is_boolean() || !hc.is_boolean()) throw ParseError("interval closure flags must be booleans");
  try {
    return Interval(endpoint(field(j, "lo")), endpoint(field(j, "hi")), lc.get<bool>(), hc.get<bool>());
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const Generator& gen) {
  Json j{{"kind", to_string(gen.kind())}};
  if (gen.kind() == GeneratorKind::Power) j["p"] = gen.p();
  return j;
}

Json to_json(const SolutionSpec& s) {
  Json params = Json::object();
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TranslationForm>) {
          params["c"] = f.c;
        } else if constexpr (std::is_same_v<T, AffineForm>) {
          params["slope"] = f.slope;
          params["c"] = f.c;
        } else if constexpr (std::is_same_v<T, ThreePieceForm>) {
          params["a"] = f.a;
          params["b"] = f.b;
          params["slope"] = f.slope;
        } else if constexpr (std::is_same_v<T, InvolutionForm>) {
          params["a"] = f.a;
          params["f0"] = branch_json(f.f0);
        } else if constexpr (std::is_same_v<T, ConjugateForm>) {
          params["generator"] = to_json(f.gen);
          params["direction"] = f.direction == ConjugateDirection::Pullback ? "pullback" : "pushforward";
          params["inner"] = to_json(*f.inner);
        }
      },
      s.form());
  return {{"family", to_string(s.family())}, {"params", params}, {"domain", to_json(s.domain())}};
}

SolutionSpec solution_from_json(const Json& j) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) throw ParseError("field 'family' must be a string");
  const FamilyKind kind = family_kind_from_string(fam.get<std::string>());
  const Interval domain = interval_from_json(field(j, "domain"));
  const Json empty = Json::object();
  const Json& params = j.contains("params") ? j.at("params") : empty;
  if (!params.is_object()) throw ParseError("field 'params' must be an object");
  switch (kind) {
    case FamilyKind::Identity: return SolutionSpec::identity(domain);
    case FamilyKind::Translation: return SolutionSpec::translation(domain, number(params, "c"));
    case FamilyKind::Affine: return SolutionSpec::affine(domain, number(params, "slope"), number(params, "c"));
    case FamilyKind::ThreePiece:
      return SolutionSpec::three_piece(domain, number(params, "a"), number(params, "b"), number(params, "slope"));
    case FamilyKind::Involution:
      return build_involution(domain, number(params, "a"), branch_from_json(field(params, "f0")));
    case FamilyKind::Conjugate: {
      const SolutionSpec inner = solution_from_json(field(params, "inner"));
      const Json& dir = field(params, "direction");
      const std::string d = dir.is_string() ? dir.get<std::string>() : "";
      if (d == "pullback") return conjugate(generator_from_json(field(params, "generator"), domain), inner);
      if (d == "pushforward") {
        return transport(generator_from_json(field(params, "generator"), inner.domain()), inner);
      }
      throw ParseError("conjugate direction must be 'pullback' or 'pushforward'");
    }
  }
  throw ParseError("unsupported family");
}

Json to_json(const RootReport& r) {
  Json real = Json::array();
  for (const auto& x : r.real_roots) {
    real.push_back({{"value", x.value},
                    {"multiplicity", x.multiplicity},
                    {"bracket", {endpoint_json(x.bracket.lo), endpoint_json(x.bracket.hi)}}});
  }
  Json cplx = Json::array();
  for (const auto& z : r.complex_roots) {
    cplx.push_back({{"re", z.re}, {"im", z.im}, {"multiplicity", z.multiplicity}, {"modulus", z.modulus}});
  }
  Json j{{"n", r.problem.n()},
         {"k", r.problem.k()},
         {"case", to_string(r.label)},
         {"real_roots", real},
         {"complex_roots", cplx},
         {"total_multiplicity", r.total_multiplicity()},
         {"max_modulus", r.max_modulus},
         {"bound", 2 * r.problem.n() + 1},
         {"bound_ok", r.bound_2n1_ok},
         {"bound_margin", r.bound_margin}};
  if (!r.modulus_separation_min_gap) {
    j["separation_gap"] = "n/a";
  } else if (std::isinf(*r.modulus_separation_min_gap)) {
    j["separation_gap"] = "no_complex_roots";
  } else {
    j["separation_gap"] = *r.modulus_separation_min_gap;
  }
  j["expectation_matched"] = r.expectation_matched;
  j["mismatches"] = r.mismatches;
  return j;
}

Json to_json(const VerifyReport& r) {
  return {{"max_residual", r.max_residual},
          {"pass", r.pass},
          {"points_evaluated", r.points_evaluated},
          {"points_escaped", r.points_escaped},
          {"scale", r.scale}};
}

Json to_json(const DualReport& r) {
  return {{"primal", to_json(r.primal)}, {"dual", to_json(r.dual)}, {"consistent", r.consistent}};
}

Json to_json(const ClosedForm& cf) {
  Json real = Json::array();
  for (const auto& t : cf.real_terms) real.push_back({{"lambda", t.lambda}, {"poly_coeffs", t.poly_coeffs}});
  Json cplx = Json::array();
  for (const auto& t : cf.complex_terms) {
    cplx.push_back({{"modulus", t.modulus},
                    {"argument", t.argument},
                    {"cos_poly", t.cos_poly},
                    {"sin_poly", t.sin_poly}});
  }
  return {{"real_terms", real}, {"complex_terms", cplx}};
}

Json to_json(const FamilyDescriptor& d) {
  Json j{{"family", to_string(d.kind)}};
  if (d.slope) j["slope"] = *d.slope;
  j["free_params"] = d.free_params;
  if (!d.note.empty()) j["note"] = d.note;
  return j;
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
  out << "m,x_m\n";
  for (int m = orbit.m_lo; m <= orbit.m_hi(); ++m) out << m << ',' << format_number(orbit.at(m)) << '\n';
}

Orbit read_orbit_csv(std::istream& in) {
  std::string line;
  std::vector<std::pair<long, double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("orbit line " + std::to_string(lineno) + ": expected 'm,x'");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    char* end = nullptr;
    const long m = std::strtol(a.c_str(), &end, 10);
    const bool idx_ok = end != a.c_str() && std::string(end).find_first_not_of(" \t") == std::string::npos;
    if (!idx_ok) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw ParseError("orbit line " + std::to_string(lineno) + ": bad index '" + a + "'");
    }
    const double x = std::strtod(b.c_str(), &end);
    if (end == b.c_str() || std::string(end).find_first_not_of(" \t") != std::string::npos) {
      throw ParseError("orbit line " + std::to_string(lineno) + ": bad value '" + b + "'");
    }
    if (!rows.empty() && m != rows.back().first + 1) {
      throw ParseError("orbit line " + std::to_string(lineno) + ": indices must be consecutive");
    }
    rows.emplace_back(m, x);
  }
  if (rows.empty()) throw ParseError("orbit file has no rows");
  if (rows.front().first > 0 || rows.back().first < 0) throw ParseError("orbit indices must include 0");
  Orbit orbit;
  orbit.m_lo = static_cast<int>(rows.front().first);
  for (const auto& [m, x] : rows) {
    orbit.points.push_back(x);
    if (m == 0) orbit.x0 = x;
  }
  return orbit;
}

}  // namespace itermean
