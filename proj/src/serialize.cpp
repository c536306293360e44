#include "pfpois/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace pfpois {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

Json to_json(const Pmf& pmf) {
    return Json{{"probs", pmf.probs}, {"tail_bound", pmf.tail_bound}};
}

Json to_json(const TvResult& tv) {
    return Json{{"value", tv.value}, {"uncertainty", tv.uncertainty}};
}

Json to_json(const JointPmf& pmf) {
    Json entries = Json::array();
    for (const auto& [t, v] : pmf.entries) entries.push_back(Json{{"k", t}, {"p", v}});
    return Json{{"dims", pmf.dims}, {"entries", std::move(entries)}, {"tail_bound", pmf.tail_bound}};
}

Json to_json(const JointCounts& counts) {
    Json sets = Json::array();
    for (const auto& s : counts.specs) {
        sets.push_back(Json{{"label", s.set.label()},
                            {"mode", to_string(s.mode)},
                            {"size", s.set.size()}});
    }
    Json rows = Json::array();
    for (const auto& [t, c] : counts.counts) rows.push_back(Json{{"k", t}, {"count", c}});
    return Json{{"x", counts.x}, {"sets", std::move(sets)}, {"counts", std::move(rows)}};
}

namespace {

Json param_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

std::string param_text(const ParamValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
    return std::get<std::string>(v);
}

}  // namespace

Json to_json(const TheoremReport& report) {
    Json params = Json::object();
    for (const auto& [k, v] : report.params) params[k] = param_json(v);
    Json j;
    j["name"] = report.name;
    j["params"] = std::move(params);
    j["lhs"] = report.lhs;
    j["rhs"] = report.rhs;
    if (report.ratio) {
        j["ratio"] = *report.ratio;
    } else {
        j["ratio"] = "undefined";
    }
    j["uncertainty"] = report.uncertainty;
    return j;
}

Pmf pmf_from_json(const Json& j) {
    Pmf p;
    p.probs = j.at("probs").get<std::vector<double>>();
    p.tail_bound = j.at("tail_bound").get<double>();
    return p;
}

TvResult tv_from_json(const Json& j) {
    return {j.at("value").get<double>(), j.at("uncertainty").get<double>()};
}

void write_pmf_csv(std::ostream& out, const Pmf& pmf) {
    out << "index,probability\n";
    for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
        out << k << ',' << format_double(pmf.probs[k]) << '\n';
    }
}

Pmf read_pmf_csv(std::istream& in) {
    Pmf p;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.starts_with("index")) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("pmf csv: missing comma in '" + line + "'");
        const auto k = static_cast<std::size_t>(parse_exact_integer(line.substr(0, comma)));
        double v = 0.0;
        const char* first = line.data() + comma + 1;
        const char* last = line.data() + line.size();
        if (auto [ptr, ec] = std::from_chars(first, last, v); ec != std::errc{}) {
            throw DomainError("pmf csv: bad probability in '" + line + "'");
        }
        if (k >= p.probs.size()) p.probs.resize(k + 1, 0.0);
        p.probs[k] = v;
    }
    p.tail_bound = std::max(0.0, 1.0 - p.mass());
    return p;
}

namespace {

void write_tuple_rows(std::ostream& out, std::size_t m, const std::map<Tuple, std::uint64_t>& counts) {
    for (std::size_t j = 0; j < m; ++j) out << 'k' << (j + 1) << ',';
    out << "count\n";
    for (const auto& [t, c] : counts) {
        for (auto v : t) out << v << ',';
        out << c << '\n';
    }
}

}  // namespace

void write_counts_csv(std::ostream& out, const JointCounts& counts) {
    write_tuple_rows(out, counts.dims(), counts.counts);
}

void write_partial_csv(std::ostream& out, const SegmentPartial& partial) {
    const std::size_t m = partial.counts.empty() ? 0 : partial.counts.begin()->first.size();
    out << "# segment " << partial.lo << ".." << partial.hi << '\n';
    write_tuple_rows(out, m, partial.counts);
}

void write_reports_csv(std::ostream& out, const std::vector<TheoremReport>& reports) {
    std::vector<std::string> keys;
    for (const auto& r : reports) {
        for (const auto& [k, v] : r.params) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        }
    }
    out << "name,lhs,rhs,ratio,uncertainty";
    for (const auto& k : keys) out << ',' << k;
    out << '\n';
    for (const auto& r : reports) {
        out << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
            << (r.ratio ? format_double(*r.ratio) : std::string("undefined")) << ','
            << format_double(r.uncertainty);
        for (const auto& k : keys) {
            out << ',';
            if (const ParamValue* v = r.find(k)) out << param_text(*v);
        }
        out << '\n';
    }
}

BandMap read_bands(std::istream& in) {
    const Json j = Json::parse(in);
    BandMap bands;
    for (const auto& [name, v] : j.items()) {
        if (!v.is_array() || v.size() != 2) throw DomainError("band '" + name + "' must be [lo, hi]");
        bands[name] = {v[0].get<double>(), v[1].get<double>()};
    }
    return bands;
}

void write_bands(std::ostream& out, const BandMap& bands) {
    Json j = Json::object();
    for (const auto& [name, b] : bands) j[name] = Json::array({b.first, b.second});
    out << j.dump(2) << '\n';
}

}  // namespace pfpois
