#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pfpois/dist.hpp"
#include "pfpois/factorstats.hpp"
#include "pfpois/theorems.hpp"

namespace pfpois {

using Json = nlohmann::ordered_json;

Json to_json(const Pmf& pmf);
Json to_json(const TvResult& tv);
Json to_json(const JointPmf& pmf);
Json to_json(const JointCounts& counts);
Json to_json(const TheoremReport& report);

Pmf pmf_from_json(const Json& j);
TvResult tv_from_json(const Json& j);

/// Two columns: index,probability.
void write_pmf_csv(std::ostream& out, const Pmf& pmf);
Pmf read_pmf_csv(std::istream& in);

/// One row per tuple: k_1,...,k_m,count.
void write_counts_csv(std::ostream& out, const JointCounts& counts);
void write_partial_csv(std::ostream& out, const SegmentPartial& partial);

/// Flat rows for sweep aggregation: name,lhs,rhs,ratio,uncertainty,params...
void write_reports_csv(std::ostream& out, const std::vector<TheoremReport>& reports);

/// Shortest decimal text that round-trips a double.
std::string format_double(double v);

/// Regression bands: sweep name -> [lo, hi].
using BandMap = std::map<std::string, std::pair<double, double>>;
BandMap read_bands(std::istream& in);
void write_bands(std::ostream& out, const BandMap& bands);

}  // namespace pfpois
