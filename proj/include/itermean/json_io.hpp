#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "itermean/charspec.hpp"
#include "itermean/families.hpp"
#include "itermean/interval.hpp"
#include "itermean/meanframe.hpp"
#include "itermean/recurfit.hpp"
#include "itermean/verifier.hpp"

namespace itermean {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point number printed to 17 significant
/// digits; non-finite numbers become null. indent < 0 gives one line.
std::string dump_json(const Json& j, int indent = 2);

/// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

Json to_json(const Interval& iv);
/// Throws ParseError.
Interval interval_from_json(const Json& j);

Json to_json(const Generator& gen);

/// {"family", "params", "domain"}; round-trips through solution_from_json.
Json to_json(const SolutionSpec& s);
/// Throws ParseError for malformed documents; construction errors from the
/// families module propagate unchanged.
SolutionSpec solution_from_json(const Json& j);

Json to_json(const RootReport& r);
Json to_json(const VerifyReport& r);
Json to_json(const DualReport& r);
Json to_json(const ClosedForm& cf);
Json to_json(const FamilyDescriptor& d);

/// Header "m,x_m" followed by one row per orbit point.
void write_orbit_csv(std::ostream& out, const Orbit& orbit);
/// Accepts an optional header line and rows "index,value" with consecutive
/// indices that include 0. Throws ParseError.
Orbit read_orbit_csv(std::istream& in);

}  // namespace itermean
