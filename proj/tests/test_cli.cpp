#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfpois/cli.hpp"
#include "pfpois/serialize.hpp"

namespace fs = std::filesystem;
using pfpois::Json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = pfpois::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pfpois_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

}  // namespace

TEST_CASE("harmonic prints the three sums") {
    const Run r = run({"harmonic", "--set", "list:2,3,5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("h=1.0333333333333") != std::string::npos);
    CHECK(r.out.find("h1=1.75 ") != std::string::npos);
    CHECK(r.out.find("h2=0.40111111111") != std::string::npos);
}

TEST_CASE("counts prints CSV rows") {
    const Run r = run({"counts", "--x", "100", "--set", "list:2,3:distinct"});
    CHECK(r.code == 0);
    CHECK(r.out == "k1,count\n0,33\n1,51\n2,16\n");
    const Run o = run({"counts", "--x", "100", "--set", "list:2,3:distinct", "--oracle"});
    CHECK(o.out == r.out);
}

TEST_CASE("thm1 end to end writes a report and a manifest") {
    const fs::path dir = scratch("thm1");
    const Run r = run({"thm1", "--x", "1e6", "--y", "31", "--set", "interval:2..31:distinct", "--out",
                       dir.string()});
    REQUIRE(r.code == 0);
    const Json report = Json::parse(slurp(dir / "thm1.json"));
    CHECK(report["name"] == "thm1");
    CHECK(report["params"]["x"] == 1000000);
    CHECK(report["lhs"].get<double>() > 0.0);
    CHECK(report["ratio"].is_number());
    const Json manifest = Json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["software"]["version"] == pfpois::cli::kVersion);
    CHECK(manifest["timestamp"].is_string());
    CHECK(manifest["verdicts"][0]["verdict"] == "recorded");
    CHECK(fs::exists(dir / "thm1.csv"));
}

TEST_CASE("identical configs give byte-identical reports across worker counts") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    const std::vector<std::string> base{"thm1", "--x", "200000", "--y", "100", "--set", "interval:2..13",
                                        "--set", "interval:17..100:multiplicity"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--threads", "1", "--out", a.string()});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--threads", "6", "--segment-size", "5000", "--out", b.string()});
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    CHECK(slurp(a / "thm1.json") == slurp(b / "thm1.json"));
    CHECK(slurp(a / "thm1.csv") == slurp(b / "thm1.csv"));

    const fs::path c = scratch("det_c");
    const fs::path d = scratch("det_d");
    REQUIRE(run({"model", "--y", "50", "--sample", "2000", "--seed", "7", "--out", c.string()}).code == 0);
    REQUIRE(run({"model", "--y", "50", "--sample", "2000", "--seed", "7", "--out", d.string()}).code == 0);
    CHECK(slurp(c / "model.json") == slurp(d / "model.json"));
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == pfpois::cli::kExitUsage);
    CHECK(run({"nonsense"}).code == pfpois::cli::kExitUsage);
    CHECK(run({"counts", "--x", "100"}).code == pfpois::cli::kExitUsage);
    CHECK(run({"counts", "--x", "1.5", "--set", "list:2"}).code == pfpois::cli::kExitUsage);
    CHECK(run({"counts", "--x", "100", "--set", "list:4"}).code == pfpois::cli::kExitUsage);
    const Run cap = run({"counts", "--x", "2e12", "--set", "list:2"});
    CHECK(cap.code == pfpois::cli::kExitCapRefusal);
    CHECK(cap.err.find("2^40") != std::string::npos);
    CHECK(run({"--version"}).out == std::string(pfpois::cli::kVersion) + "\n");
}

TEST_CASE("sweep with an empty grid") {
    const fs::path dir = scratch("sweep_empty");
    write(dir / "grid.txt", "# nothing\n\n");
    const Run r = run({"sweep", "--grid", (dir / "grid.txt").string(), "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("rows=0 errors=0") != std::string::npos);
    CHECK(slurp(dir / "out" / "sweep.csv").empty());
}

TEST_CASE("sweep isolates a cap-violating row") {
    const fs::path dir = scratch("sweep_cap");
    write(dir / "grid.txt",
          "cor32 --set list:11:multiplicity\n"
          "thm2 --x 2e12 --set list:2 --k 1\n"
          "cor32 --set list:13:multiplicity\n");
    const Run r = run({"sweep", "--grid", (dir / "grid.txt").string(), "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("rows=3 errors=1") != std::string::npos);
    const Json rows = Json::parse(slurp(dir / "out" / "sweep.json"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["params"]["status"] == "ok");
    CHECK(rows[1]["params"]["status"] == "refused");
    CHECK(rows[1]["ratio"] == "undefined");
    CHECK(rows[2]["params"]["status"] == "ok");
}

TEST_CASE("band files freeze and gate sweeps") {
    const fs::path dir = scratch("bands");
    std::ostringstream grid;
    for (int p : {11, 13, 17, 19, 23}) grid << "cor32 --set list:" << p << ":multiplicity\n";
    write(dir / "grid.txt", grid.str());
    const std::string bands = (dir / "bands.json").string();
    const std::vector<std::string> base{"sweep", "--grid", (dir / "grid.txt").string(), "--name",
                                        "singletons", "--band-file", bands};

    auto freeze = base;
    freeze.push_back("--freeze-bands");
    const Run f = run(freeze);
    CHECK(f.code == 0);
    CHECK(f.out.find("verdict=recorded") != std::string::npos);

    const Run again = run(base);
    CHECK(again.code == 0);
    CHECK(again.out.find("verdict=pass") != std::string::npos);

    write(dir / "bands.json", R"({"singletons": [100.0, 200.0]})");
    const Run fail = run(base);
    CHECK(fail.code == pfpois::cli::kExitBandFailure);
    CHECK(fail.out.find("verdict=fail") != std::string::npos);
}

TEST_CASE("plot tables") {
    const fs::path dir = scratch("tables");
    REQUIRE(run({"halasz", "--x", "1e5", "--set", "interval:2..1000:multiplicity", "--out", dir.string()})
                .code == 0);
    const std::string t = slurp(dir / "halasz_ratio.csv");
    CHECK(t.starts_with("k,ratio\n0,"));
    REQUIRE(run({"model", "--set", "list:2,3", "--out", dir.string()}).code == 0);
    CHECK(slurp(dir / "model.csv").starts_with("index,probability\n0,0.33333333333333"));
}

TEST_CASE("the installed binary runs the documented examples") {
    const char* bin = std::getenv("PFPOIS_BIN");
    REQUIRE(bin != nullptr);
    const fs::path dir = scratch("binary");
    const std::string out = (dir / "stdout.txt").string();
    const std::string cmd = std::string("\"") + bin + "\" counts --x 100 --set list:2,3:distinct > \"" + out + "\"";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(out) == "k1,count\n0,33\n1,51\n2,16\n");

    const std::string cap = std::string("\"") + bin + "\" counts --x 2e12 --set list:2 2> /dev/null";
    const int status = std::system(cap.c_str());
    CHECK(WEXITSTATUS(status) == pfpois::cli::kExitCapRefusal);
}
