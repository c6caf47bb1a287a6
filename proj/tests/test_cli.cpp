#include "etc/io/cli.hpp"
#include "etc/io/scenario_file.hpp"
#include "etc/io/writers.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using etc::io::cli_main;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("run writes three artifacts") {
    const auto dir = fresh_dir("etc_cli_run");
    const auto r = run({"run", "flexible-link-paper", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::file_size(dir / "trajectory.csv") > 0);
    CHECK(fs::file_size(dir / "trajectory.svg") > 0);
    CHECK(fs::file_size(dir / "report.txt") > 0);
    CHECK(r.out.find("u1:") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("compare report has both tables") {
    const auto dir = fresh_dir("etc_cli_compare");
    const auto r = run({"compare", "flexible-link-paper", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto text = etc::io::read_file((dir / "report-compare.txt").string());
    CHECK(text.find("event_triggered.y1: count=") != std::string::npos);
    CHECK(text.find("periodic.y1: count=301") != std::string::npos);
    CHECK(text.find("fewer_transmissions") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("certify and validate") {
    const auto dir = fresh_dir("etc_cli_cert");
    CHECK(run({"certify", "flexible-link-paper", "--out", dir.string()}).code == 0);
    const auto cert = etc::io::read_file((dir / "report-certificate.txt").string());
    CHECK(cert.find("sigma_prime: ") != std::string::npos);
    CHECK(cert.find("relative_threshold.u1: ") != std::string::npos);

    const auto v = run({"validate", "flexible-link-paper", "--out", dir.string()});
    CHECK(v.code == 0);
    CHECK(etc::io::read_file((dir / "report-validate.txt").string()).find("violations: 0") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("scenario file and dt override") {
    const auto dir = fresh_dir("etc_cli_file");
    const auto scn = dir / "s.scn";
    {
        std::ostringstream doc;
        doc << "[scenario]\nname = file-test\n[model]\nname = scalar-linear\n[gains]\nK = -2\nL = 1\n"
               "[initial]\nx0 = 1\n[sim]\nt_end = 1\n[triggers]\nu1 = periodic delta=0.1\n"
               "y1 = periodic delta=0.1\n";
        etc::io::atomic_write(scn.string(), doc.str());
    }
    CHECK(run({"run", scn.string(), "--dt", "0.01", "--out", dir.string()}).code == 0);
    const auto csv = etc::io::read_file((dir / "trajectory.csv").string());
    CHECK(csv.find("\n0.01,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("failures map to exit codes") {
    const auto missing = run({"run", "nonexistent.scn"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("IoError") != std::string::npos);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"run", "flexible-link-paper", "--dt", "-1"}).code == 1);

    const auto dir = fresh_dir("etc_cli_diverge");
    const auto scn = dir / "d.scn";
    etc::io::atomic_write(scn.string(),
                          "[scenario]\nname = diverge\n[model]\nname = scalar-linear\n[gains]\nK = 50\nL = 1\n"
                          "feedback = positive\n[initial]\nx0 = 1\n[sim]\nt_end = 100\ndt = 0.01\n[triggers]\n"
                          "u1 = periodic delta=0.01\ny1 = periodic delta=0.01\n");
    CHECK(run({"run", scn.string(), "--out", dir.string()}).code == 2);
    fs::remove_all(dir);
}
