#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pxl/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "pxl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = pxl::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    const Run missing = run({"converge"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--config") != std::string::npos);
    CHECK(run({"converge", "--config", "/no/such/file.cfg"}).code == 2);
    CHECK(run({"solve-p", "--config", "cone_square"}).code == 2);
    CHECK(run({"converge", "--config", "cone_square", "--format", "xml"}).code == 2);
    CHECK(run({"converge", "--config", "cone_square", "--grid-n", "2"}).code == 2);
}

TEST_CASE("help exits with 0") {
    const Run r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("converge") != std::string::npos);
}

TEST_CASE("presets are listed") {
    const Run r = run({"presets"});
    CHECK(r.code == 0);
    for (const char* name : {"affine_sanity", "cone_square", "aronsson_shifted", "paper_1d_unbounded", "bump_2d_unbounded"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("solve-p and solve-inf") {
    const Run p = run({"solve-p", "--config", "paper_1d_unbounded", "--j", "2", "--grid-n", "65"});
    CHECK(p.code == 0);
    CHECK(p.out.find("converged = true") != std::string::npos);
    const Run inf = run({"solve-inf", "--config", "cone_square", "--grid-n", "17"});
    CHECK(inf.code == 0);
    CHECK(inf.out.find("converged = true") != std::string::npos);
}

TEST_CASE("converge writes reports") {
    const fs::path dir = fs::temp_directory_path() / "pxl_cli_converge";
    fs::remove_all(dir);
    const Run r = run({"converge", "--config", "cone_preset", "--out", dir.string(), "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "convergence_plot.csv"));
    CHECK(r.out.find("wrote") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("verify passes") {
    const Run r = run({"verify", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
