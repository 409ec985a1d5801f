#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "confdim/cli.hpp"
#include "doctest.h"
#include "support.hpp"

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "confdim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = confdim::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

}  // namespace

TEST_CASE("every gallery config validates") {
    for (const char* name : test_support::kGallery) {
        auto r = run({"validate", "--config", test_support::gallery(name)});
        CHECK_MESSAGE(r.code == 0, name);
        CHECK(field(r.out, "status") == "ok");
    }
}

TEST_CASE("trivial system exits with a validation error record") {
    auto r = run({"validate", "--config", test_support::fixture("trivial.ifs")});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error=TrivialSystem", 0) == 0);
}

TEST_CASE("usage errors") {
    CHECK(run({"validate"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"dimension", "--config", test_support::gallery("cantor3"), "--method", "fourier"}).code == 2);
    auto missing = run({"validate", "--config", "/nonexistent.ifs"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("error=ParseError") == 0);
}

TEST_CASE("report on the Cantor set") {
    auto r = run({"report", "--config", test_support::gallery("cantor3"), "--format", "record"});
    CHECK(r.code == 0);
    CHECK(field(r.out, "branch") == "AGREE");
    CHECK(field(r.out, "verdict") == "WSP_CONSISTENT");
}

TEST_CASE("budget exhaustion and the environment fallback") {
    auto r = run({"separation", "--config", test_support::gallery("overlap_pi"), "--budget", "50"});
    CHECK(r.code == 3);
    CHECK(r.err.rfind("error=BudgetExceeded", 0) == 0);
    setenv("CONFORMAL_DIM_BUDGET", "50", 1);
    CHECK(run({"separation", "--config", test_support::gallery("overlap_pi")}).code == 3);
    setenv("CONFORMAL_DIM_BUDGET", "lots", 1);
    CHECK(run({"separation", "--config", test_support::gallery("overlap_pi")}).code == 2);
    unsetenv("CONFORMAL_DIM_BUDGET");
    CHECK(run({"separation", "--config", test_support::gallery("overlap_pi"), "--depth", "6"}).code == 0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    auto a = run({"separation", "--config", test_support::gallery("overlap_golden"), "--depth", "8"});
    auto b = run({"separation", "--config", test_support::gallery("overlap_golden"), "--depth", "8"});
    auto c = run({"separation", "--config", test_support::gallery("overlap_golden"), "--depth", "8", "--threads", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.rfind("b,multiplicity,witness_x,min_ilc_distance,pair_v,pair_w\n", 0) == 0);
}

TEST_CASE("tangent run on the overlap family") {
    auto r = run({"tangent", "--config", test_support::gallery("overlap_pi"), "--i", "5"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,k,m,point,increment");
    int rows = 0;
    while (std::getline(in, line) && !line.empty()) ++rows;
    CHECK(rows <= 20);
    CHECK(std::stod(field(r.out, "left_gap")) <= 0.2);
}

TEST_CASE("cylinders and dimension subcommands") {
    auto cyl = run({"cylinders", "--config", test_support::gallery("cantor3"), "--depth", "2"});
    CHECK(cyl.code == 0);
    CHECK(cyl.out.rfind("word,lo,hi,diam,deriv_lo,deriv_hi\n00,0,", 0) == 0);
    CHECK(field(cyl.out, "cylinders") == "4");
    auto dim = run({"dimension", "--config", test_support::gallery("cantor3"), "--method", "bowen", "--format", "record"});
    CHECK(dim.code == 0);
    CHECK(std::stod(field(dim.out, "bowen")) == doctest::Approx(0.6309297536).epsilon(1e-9));
}

TEST_CASE("--output writes the result file") {
    auto path = std::filesystem::temp_directory_path() / "confdim_cli_output.txt";
    auto r = run({"validate", "--config", test_support::gallery("full_interval"), "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("status=ok") != std::string::npos);
    std::filesystem::remove(path);
}
