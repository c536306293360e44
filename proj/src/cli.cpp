#include "pfpois/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pfpois/kubilius.hpp"
#include "pfpois/serialize.hpp"
#include "pfpois/setspec.hpp"
#include "pfpois/theorems.hpp"

namespace pfpois::cli {

namespace {

struct Options {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string segment_size = std::to_string(kDefaultSegmentSize);
    std::string out_dir;
    std::string band_file;
    std::string band_name;
    bool freeze_bands = false;
    double band_margin = 0.05;

    std::string limit;
    std::string lo;
    std::string hi;
    bool print = false;
    std::vector<std::string> sets;
    std::string x;
    std::string y;
    bool oracle = false;
    std::string stream_partials;
    double tail_eps = kDefaultTailEps;
    std::string sample;
    std::string seed = "0";
    std::string sample_rows;
    std::string ks;
    double a = 3.0;
    double psi = 0.0;
    std::string k_lo;
    std::string k_hi;
    double fit_exponent = 1.0 / 3.0;
    std::string grid;
    std::string name;
};

struct Table {
    std::string file;
    std::string content;
};

struct CommandResult {
    std::string command;
    std::vector<TheoremReport> reports;
    bool has_reports = false;
    Json document;  // written as <command>.json
    std::vector<Table> tables;
    std::string text;
    int row_errors = 0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t to_u64(const std::string& text, const char* what) {
    if (text.empty()) throw UsageError(std::string("missing required option --") + what);
    const auto v = parse_exact_integer(text);
    if (v < 0) throw UsageError(std::string("--") + what + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

void build_app(CLI::App& app, Options& o) {
    app.description("Exact prime-factor count distributions, the independent-exponent model and Poisson bounds");
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "TOML/INI config file; flags override it");
    app.add_option("--threads", o.threads, "Worker pool size")->check(CLI::PositiveNumber);
    app.add_option("--segment-size", o.segment_size, "Sieve segment length");
    app.add_option("--out", o.out_dir, "Directory for JSON/CSV reports and the manifest");
    app.add_option("--band-file", o.band_file, "JSON map name -> [lo, hi] of regression bands");
    app.add_option("--band-name", o.band_name, "Band key (defaults to the command name)");
    app.add_flag("--freeze-bands", o.freeze_bands, "Record the observed max ratio into --band-file");
    app.add_option("--band-margin", o.band_margin, "Relative widening when freezing a band");
    app.set_version_flag("--version", kVersion);

    auto* sieve = app.add_subcommand("sieve", "List primes <= limit or in (lo, hi]");
    sieve->add_option("--limit", o.limit);
    sieve->add_option("--lo", o.lo);
    sieve->add_option("--hi", o.hi);
    sieve->add_flag("--print", o.print, "Print the primes");

    auto* harmonic = app.add_subcommand("harmonic", "Harmonic sums H, H', H'' of prime sets");
    harmonic->add_option("--set", o.sets)->required();

    auto* counts = app.add_subcommand("counts", "Exact joint prime-factor counts of n <= x");
    counts->add_option("--x", o.x)->required();
    counts->add_option("--set", o.sets)->required();
    counts->add_flag("--oracle", o.oracle, "Use per-integer trial division (x <= 10^6)");
    counts->add_option("--stream-partials", o.stream_partials, "CSV file for per-segment partials");

    auto* model = app.add_subcommand("model", "Model law of U_T / W_T, or model samples");
    model->add_option("--set", o.sets);
    model->add_option("--tail-eps", o.tail_eps);
    model->add_option("--y", o.y);
    model->add_option("--sample", o.sample, "Number of model vectors to sample");
    model->add_option("--seed", o.seed);
    model->add_option("--sample-rows", o.sample_rows, "CSV file for (sample_id, p, exponent) rows");

    auto* model_tv = app.add_subcommand("model-tv", "Exact d_TV between model and true exponent vectors");
    model_tv->add_option("--x", o.x)->required();
    model_tv->add_option("--y", o.y)->required();

    auto* thm1 = app.add_subcommand("thm1", "Joint Poisson approximation for sets of primes <= y");
    thm1->add_option("--x", o.x)->required();
    thm1->add_option("--y", o.y)->required();
    thm1->add_option("--set", o.sets)->required();

    auto* thm2 = app.add_subcommand("thm2", "Uniform upper bound for P(omega(n;T_j) = k_j)");
    thm2->add_option("--x", o.x)->required();
    thm2->add_option("--set", o.sets)->required();
    thm2->add_option("--k", o.ks, "Comma-separated k_j")->required();

    auto* thm3 = app.add_subcommand("thm3", "Conditional tail of omega(n,T) given omega(n) = k");
    thm3->add_option("--x", o.x)->required();
    thm3->add_option("--set", o.sets)->required();
    thm3->add_option("--k", o.ks)->required();
    thm3->add_option("--A", o.a);
    thm3->add_option("--psi", o.psi);

    auto* halasz = app.add_subcommand("halasz", "Local law of Omega(n,T) against Poisson(H), Poisson(H')");
    halasz->add_option("--x", o.x)->required();
    halasz->add_option("--set", o.sets)->required();
    halasz->add_option("--k-lo", o.k_lo);
    halasz->add_option("--k-hi", o.k_hi);

    auto* thm4 = app.add_subcommand("thm4", "Pointwise model-vs-Poisson bound");
    thm4->add_option("--set", o.sets)->required();

    auto* cor1 = app.add_subcommand("cor1", "Doubly-exponential blocks against Poisson(1)");
    cor1->add_option("--x", o.x)->required();
    cor1->add_option("--k-lo", o.k_lo)->required();
    cor1->add_option("--k-hi", o.k_hi)->required();
    cor1->add_option("--fit-exponent", o.fit_exponent);

    auto* cor32 = app.add_subcommand("cor32", "Model law against Poisson in total variation");
    cor32->add_option("--set", o.sets)->required();

    auto* sweep = app.add_subcommand("sweep", "Run a grid of sub-commands and aggregate reports");
    sweep->add_option("--grid", o.grid, "One sub-command per line")->required();
    sweep->add_option("--name", o.name, "Sweep name (band key)");
}

std::vector<SetSpec> parse_sets(const Options& o) {
    std::vector<SetSpec> specs;
    for (const auto& s : o.sets) specs.push_back(parse_set_spec(s));
    return specs;
}

const SetSpec& single_set(const std::vector<SetSpec>& specs, const char* command) {
    if (specs.size() != 1) throw UsageError(std::string(command) + " takes exactly one --set");
    return specs.front();
}

SieveOptions sieve_options(const Options& o) {
    SieveOptions s;
    s.threads = o.threads;
    const auto seg = to_u64(o.segment_size, "segment-size");
    if (seg == 0) throw UsageError("--segment-size must be positive");
    s.segment_size = seg;
    return s;
}

Json reports_json(const std::vector<TheoremReport>& reports) {
    if (reports.size() == 1) return to_json(reports.front());
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

void finish_reports(CommandResult& res, std::vector<TheoremReport> reports) {
    res.reports = std::move(reports);
    res.has_reports = true;
    res.document = reports_json(res.reports);
    res.text = res.document.dump(2) + "\n";
    std::ostringstream csv;
    write_reports_csv(csv, res.reports);
    res.tables.push_back({res.command + ".csv", csv.str()});
}

std::string ratio_table(const std::vector<TheoremReport>& reports) {
    std::ostringstream t;
    t << "k,ratio\n";
    for (const auto& r : reports) {
        t << static_cast<std::int64_t>(r.number("k")) << ','
          << (r.ratio ? format_double(*r.ratio) : std::string("undefined")) << '\n';
    }
    return t.str();
}

CommandResult execute(const std::vector<std::string>& args, const Options* inherited);

CommandResult dispatch(const std::string& cmd, const Options& o) {
    CommandResult res;
    res.command = cmd;
    const SieveOptions sopts = sieve_options(o);

    if (cmd == "sieve") {
        PrimeSet set;
        if (!o.limit.empty()) {
            set = sieve_primes(to_u64(o.limit, "limit"), sopts.segment_size);
        } else if (!o.hi.empty()) {
            set = primes_in_interval(o.lo.empty() ? 1 : to_u64(o.lo, "lo"), to_u64(o.hi, "hi"),
                                     sopts.segment_size);
        } else {
            throw UsageError("sieve needs --limit or --hi");
        }
        std::ostringstream listing;
        write_prime_set(listing, set);
        res.text = "count=" + std::to_string(set.size()) + "\n";
        if (o.print) res.text += listing.str();
        res.document = Json{{"label", set.label()}, {"count", set.size()}};
        res.tables.push_back({"primes.txt", listing.str()});
        return res;
    }
    if (cmd == "harmonic") {
        Json arr = Json::array();
        for (const auto& spec : parse_sets(o)) {
            const auto s = harmonic_sums(spec.set);
            res.text += spec.set.label() + ": h=" + format_double(s.h) + " h1=" + format_double(s.h1) +
                        " h2=" + format_double(s.h2) + "\n";
            arr.push_back(Json{{"set", spec.set.label()},
                               {"size", spec.set.size()},
                               {"h", s.h},
                               {"h1", s.h1},
                               {"h2", s.h2}});
        }
        res.document = std::move(arr);
        return res;
    }
    if (cmd == "counts") {
        const auto x = to_u64(o.x, "x");
        JointCounts counts;
        if (o.oracle) {
            counts = oracle_factor_counts(x, parse_sets(o));
        } else {
            SieveOptions s = sopts;
            std::ofstream partials;
            if (!o.stream_partials.empty()) {
                partials.open(o.stream_partials);
                if (!partials) throw UsageError("cannot write " + o.stream_partials);
                s.on_segment = [&](const SegmentPartial& p) { write_partial_csv(partials, p); };
            }
            counts = joint_factor_counts(x, parse_sets(o), s);
        }
        std::ostringstream csv;
        write_counts_csv(csv, counts);
        res.text = csv.str();
        res.document = to_json(counts);
        res.tables.push_back({"counts.csv", csv.str()});
        return res;
    }
    if (cmd == "model") {
        if (!o.sample.empty()) {
            const auto y = to_u64(o.y, "y");
            const auto n = to_u64(o.sample, "sample");
            const auto seed = to_u64(o.seed, "seed");
            std::ofstream rows;
            if (!o.sample_rows.empty()) {
                rows.open(o.sample_rows);
                if (!rows) throw UsageError("cannot write " + o.sample_rows);
                rows << "sample_id,p,exponent\n";
            }
            const PrimeSet primes = sieve_primes(y);
            std::map<std::pair<Prime, std::uint32_t>, std::uint64_t> agg;
            model_sample_vector(y, seed, n, [&](std::uint64_t id, std::span<const std::uint32_t> v) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Prime p = primes.primes()[i];
                    ++agg[{p, v[i]}];
                    if (rows.is_open()) rows << id << ',' << p << ',' << v[i] << '\n';
                }
            });
            std::ostringstream csv;
            csv << "p,exponent,count\n";
            Json arr = Json::array();
            for (const auto& [key, c] : agg) {
                csv << key.first << ',' << key.second << ',' << c << '\n';
                arr.push_back(Json{{"p", key.first}, {"exponent", key.second}, {"count", c}});
            }
            res.text = csv.str();
            res.document = Json{{"y", y}, {"seed", seed}, {"samples", n}, {"counts", std::move(arr)}};
            res.tables.push_back({"model_samples.csv", csv.str()});
            return res;
        }
        const auto specs = parse_sets(o);
        const auto& spec = single_set(specs, "model");
        const Pmf pmf = model_exact_pmf({spec.set, spec.mode, o.tail_eps});
        std::ostringstream csv;
        write_pmf_csv(csv, pmf);
        res.text = csv.str();
        res.document = to_json(pmf);
        res.tables.push_back({"model.csv", csv.str()});
        return res;
    }
    if (cmd == "model-tv") {
        const auto tv = model_tv_exact(to_u64(o.x, "x"), to_u64(o.y, "y"), sopts);
        res.text = "value=" + format_double(tv.value) + " uncertainty=" + format_double(tv.uncertainty) + "\n";
        res.document = to_json(tv);
        return res;
    }
    if (cmd == "thm1") {
        finish_reports(res, {check_thm1({to_u64(o.x, "x"), to_u64(o.y, "y"), parse_sets(o)}, sopts)});
        return res;
    }
    if (cmd == "thm2") {
        Thm2Config cfg;
        cfg.x = to_u64(o.x, "x");
        for (auto& s : parse_sets(o)) cfg.sets.push_back(std::move(s.set));
        for (auto k : parse_integer_list(o.ks)) {
            if (k < 0) throw UsageError("--k values must be nonnegative");
            cfg.ks.push_back(static_cast<std::uint32_t>(k));
        }
        finish_reports(res, {check_thm2(cfg, sopts)});
        return res;
    }
    if (cmd == "thm3") {
        const auto specs = parse_sets(o);
        Thm3Config cfg;
        cfg.x = to_u64(o.x, "x");
        cfg.t = single_set(specs, "thm3").set;
        cfg.k = static_cast<std::uint32_t>(to_u64(o.ks, "k"));
        cfg.a = o.a;
        cfg.psi = o.psi;
        finish_reports(res, {check_thm3(cfg, sopts)});
        return res;
    }
    if (cmd == "halasz") {
        const auto specs = parse_sets(o);
        std::optional<KRange> range;
        if (!o.k_lo.empty() || !o.k_hi.empty()) {
            range = KRange{static_cast<std::uint32_t>(to_u64(o.k_lo, "k-lo")),
                           static_cast<std::uint32_t>(to_u64(o.k_hi, "k-hi"))};
        }
        finish_reports(res, check_halasz(to_u64(o.x, "x"), single_set(specs, "halasz").set, range, sopts));
        res.tables.push_back({"halasz_ratio.csv", ratio_table(res.reports)});
        return res;
    }
    if (cmd == "thm4") {
        const auto specs = parse_sets(o);
        const auto& spec = single_set(specs, "thm4");
        finish_reports(res, check_thm4_local(spec.set, spec.mode));
        res.tables.push_back({"thm4_ratio.csv", ratio_table(res.reports)});
        return res;
    }
    if (cmd == "cor1") {
        Corollary1Config cfg;
        cfg.x = to_u64(o.x, "x");
        cfg.k_lo = static_cast<int>(to_u64(o.k_lo, "k-lo"));
        cfg.k_hi = static_cast<int>(to_u64(o.k_hi, "k-hi"));
        cfg.fit_exponent = o.fit_exponent;
        finish_reports(res, {check_corollary1(cfg, sopts)});
        return res;
    }
    if (cmd == "cor32") {
        std::vector<TheoremReport> reports;
        for (const auto& spec : parse_sets(o)) reports.push_back(check_cor32(spec.set, spec.mode));
        finish_reports(res, std::move(reports));
        return res;
    }
    if (cmd == "sweep") {
        std::ifstream grid(o.grid);
        if (!grid) throw UsageError("cannot read grid file " + o.grid);
        std::vector<TheoremReport> rows;
        std::string line;
        std::int64_t row = 0;
        while (std::getline(grid, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            ++row;
            std::istringstream words(line);
            std::vector<std::string> sub_args;
            for (std::string w; words >> w;) sub_args.push_back(w);
            try {
                auto sub = execute(sub_args, &o);
                if (!sub.has_reports) throw UsageError("grid row is not a report-producing check");
                for (auto& r : sub.reports) {
                    r.set("row", row);
                    r.set("status", std::string("ok"));
                    rows.push_back(std::move(r));
                }
            } catch (const std::exception& e) {
                TheoremReport r;
                r.name = sub_args.empty() ? "error" : sub_args.front();
                r.set("row", row);
                r.set("status", std::string(dynamic_cast<const CapRefusal*>(&e) ? "refused" : "error"));
                r.set("error", std::string(e.what()));
                rows.push_back(std::move(r));
                ++res.row_errors;
            }
        }
        res.reports = std::move(rows);
        res.has_reports = true;
        Json arr = Json::array();
        for (const auto& r : res.reports) arr.push_back(to_json(r));
        res.document = std::move(arr);
        std::ostringstream csv;
        if (!res.reports.empty()) write_reports_csv(csv, res.reports);
        res.tables.push_back({"sweep.csv", csv.str()});
        return res;
    }
    throw UsageError("unknown command " + cmd);
}

struct Parsed {
    std::string command;
    Options options;
    std::string config_echo;
};

// Throws CLI::ParseError subclasses on bad syntax.
Parsed parse(const std::vector<std::string>& args, const Options* inherited) {
    Parsed p;
    if (inherited) {
        p.options.threads = inherited->threads;
        p.options.segment_size = inherited->segment_size;
    }
    CLI::App app{"pfpois"};
    build_app(app, p.options);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    p.command = app.get_subcommands().front()->get_name();
    p.config_echo = app.config_to_str(true, false);
    return p;
}

CommandResult execute(const std::vector<std::string>& args, const Options* inherited) {
    Parsed p;
    try {
        p = parse(args, inherited);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    return dispatch(p.command, p.options);
}

std::optional<double> max_ratio(const std::vector<TheoremReport>& reports) {
    std::optional<double> best;
    for (const auto& r : reports) {
        if (r.ratio && (!best || *r.ratio > *best)) best = r.ratio;
    }
    return best;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path.string());
    f << content;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Parsed parsed;
    {
        CLI::App app{"pfpois"};
        build_app(app, parsed.options);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitPass;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitPass;
        } catch (const CLI::CallForVersion&) {
            out << kVersion << '\n';
            return kExitPass;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
            return kExitUsage;
        }
        parsed.command = app.get_subcommands().front()->get_name();
        parsed.config_echo = app.config_to_str(true, false);
    }
    const Options& o = parsed.options;

    const auto started = std::chrono::steady_clock::now();
    CommandResult res;
    try {
        res = dispatch(parsed.command, o);
    } catch (const CapRefusal& e) {
        err << "refused: " << e.what() << '\n';
        return kExitCapRefusal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    // Regression band for the max ratio.
    std::string verdict = "recorded";
    Json band_json = nullptr;
    const std::string band_key =
        !o.band_name.empty() ? o.band_name : (!o.name.empty() ? o.name : parsed.command);
    const auto top = res.has_reports ? max_ratio(res.reports) : std::nullopt;
    try {
        if (top && !o.band_file.empty()) {
            BandMap bands;
            if (std::ifstream in(o.band_file); in) bands = read_bands(in);
            if (o.freeze_bands) {
                bands[band_key] = {*top / (1.0 + o.band_margin), *top * (1.0 + o.band_margin)};
                std::ofstream bf(o.band_file);
                write_bands(bf, bands);
                verdict = "recorded";
            } else if (auto it = bands.find(band_key); it != bands.end()) {
                verdict = (*top >= it->second.first && *top <= it->second.second) ? "pass" : "fail";
            }
            if (auto it = bands.find(band_key); it != bands.end()) {
                band_json = Json::array({it->second.first, it->second.second});
            }
        }
    } catch (const std::exception& e) {
        err << "error: band file: " << e.what() << '\n';
        return kExitUsage;
    }

    out << res.text;
    if (parsed.command == "sweep") {
        out << "rows=" << res.reports.size() << " errors=" << res.row_errors
            << " max_ratio=" << (top ? format_double(*top) : std::string("undefined"))
            << " verdict=" << verdict << '\n';
    }

    if (!o.out_dir.empty()) {
        try {
            const std::filesystem::path dir(o.out_dir);
            std::filesystem::create_directories(dir);
            std::string stem = parsed.command;
            std::replace(stem.begin(), stem.end(), '-', '_');
            write_file(dir / (stem + ".json"), res.document.dump(2) + "\n");
            for (const auto& t : res.tables) write_file(dir / t.file, t.content);

            Json manifest;
            manifest["command"] = parsed.command;
            manifest["args"] = args;
            manifest["config"] = parsed.config_echo;
            manifest["software"] = Json{{"name", "pfpois"}, {"version", kVersion}};
            manifest["timestamp"] = utc_timestamp();
            manifest["stages"] = Json::array({Json{{"name", "compute"}, {"seconds", seconds}}});
            Json verdicts = Json::array();
            if (top) {
                verdicts.push_back(Json{{"name", band_key},
                                        {"max_ratio", *top},
                                        {"band", band_json},
                                        {"verdict", verdict}});
            }
            manifest["verdicts"] = std::move(verdicts);
            write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        }
    }
    return verdict == "fail" ? kExitBandFailure : kExitPass;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace pfpois::cli
