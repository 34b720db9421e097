#include <forksim/cli/cli.hpp>
#include <forksim/scenario/builtins.hpp>
#include <forksim/scenario/json_io.hpp>

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace forksim;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "forksim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("forksim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("difficulty ranges double") {
    CHECK(cli::parse_difficulties("0x2000..0x10000") ==
          std::vector<std::uint64_t>{0x2000, 0x4000, 0x8000, 0x10000});
    CHECK(cli::parse_difficulties("1024,4096") == std::vector<std::uint64_t>{1024, 4096});
    CHECK(cli::parse_difficulties("0x400") == std::vector<std::uint64_t>{0x400});
    CHECK_FALSE(cli::parse_difficulties("0x10000..0x2000").has_value());
    CHECK_FALSE(cli::parse_difficulties("abc").has_value());
    CHECK_FALSE(cli::parse_difficulties("").has_value());
}

TEST_CASE("run writes the report files") {
    const auto dir = scratch("run");
    auto r = invoke({"run", "--builtin", "fig4", "--seed", "7", "--out", dir.string(), "--trace"});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "metrics.csv"));
    CHECK(fs::exists(dir / "trace.log"));
    CHECK(r.out.find("SWAP") != std::string::npos);
    const auto first = slurp(dir / "report.json");
    CHECK(invoke({"run", "--builtin", "fig4", "--seed", "7", "--out", dir.string()}).code == cli::kOk);
    CHECK(slurp(dir / "report.json") == first);
}

TEST_CASE("scenario files and overrides") {
    const auto dir = scratch("file");
    const auto file = dir / "s.json";
    std::ofstream(file) << scenario::dump(scenario::builtin_fig4());
    CHECK(invoke({"validate", file.string()}).code == cli::kOk);
    auto r = invoke({"run", "--scenario", file.string(), "--k", "6", "--difficulty", "0x800", "--out",
                  (dir / "o").string()});
    CHECK(r.code == cli::kOk);
    CHECK(slurp(dir / "o" / "report.json").find("\"k\": 6") != std::string::npos);
}

TEST_CASE("invalid input exits with 1") {
    CHECK(invoke({"run", "--builtin", "nope"}).code == cli::kInvalid);
    CHECK(invoke({"run"}).code == cli::kInvalid);
    CHECK(invoke({"run", "--builtin", "fig4", "--bogus"}).code == cli::kInvalid);
    CHECK(invoke({"sweep", "--builtin", "fig4-racy", "--difficulty", "zz"}).code == cli::kInvalid);
    CHECK(invoke({}).code == cli::kInvalid);
    const auto dir = scratch("bad");
    std::ofstream(dir / "bad.json") << "{\"name\": 3}";
    auto r = invoke({"validate", (dir / "bad.json").string()});
    CHECK(r.code == cli::kInvalid);
    CHECK(r.err.find("name") != std::string::npos);
    CHECK(invoke({"validate", (dir / "missing.json").string()}).code == cli::kInvalid);
}

TEST_CASE("sweep writes per-run and per-difficulty tables") {
    const auto dir = scratch("sweep");
    auto r = invoke({"sweep", "--builtin", "fig4-racy", "--difficulty", "0x2000..0x4000", "--runs", "2",
                  "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const auto per_run = slurp(dir / "metrics.csv");
    CHECK(std::count(per_run.begin(), per_run.end(), '\n') == 5);
    const auto serial_dir = scratch("sweep_serial");
    invoke({"sweep", "--builtin", "fig4-racy", "--difficulty", "0x2000..0x4000", "--runs", "2", "--out",
         serial_dir.string(), "--serial"});
    CHECK(slurp(serial_dir / "metrics.csv") == per_run);
    CHECK(slurp(serial_dir / "sweep.csv") == slurp(dir / "sweep.csv"));
}

TEST_CASE("builtin lists and prints scenarios") {
    auto r = invoke({"builtin"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("fig4-racy") != std::string::npos);
    auto one = invoke({"builtin", "fig4"});
    CHECK(one.out == scenario::dump(scenario::builtin_fig4()));
    CHECK(invoke({"builtin", "nope"}).code == cli::kInvalid);
}
