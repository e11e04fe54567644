#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qshape/cli.hpp"
#include "qshape/eigenshape.hpp"
#include "qshape/point_io.hpp"

using namespace qshape;
namespace fs = std::filesystem;
using njson = nlohmann::json;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
    njson doc; // parsed stdout when it is JSON
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = cli_dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    if (!r.out.empty() && (r.out.front() == '{' || r.out.front() == '[')) {
        r.doc = njson::parse(r.out);
    }
    return r;
}

// Scratch directory shared by the suite; recreated per process run.
const fs::path& scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "qshape_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string fixture(const std::string& name, const std::string& bytes) {
    const fs::path p = scratch() / name;
    write_file(p.string(), bytes);
    return p.string();
}

std::string triangle_csv() {
    static const std::string path =
        fixture("tri.csv", "0,0\n1,0\n0.5,0.86602540378443865\n");
    return path;
}

std::string reflected_csv() {
    static const std::string path =
        fixture("tri_reflected.csv", "0,0\n1,0\n0.5,-0.86602540378443865\n");
    return path;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("dist produces a complete result document") {
    const CliRun self = run_cli({"dist", triangle_csv(), triangle_csv()});
    REQUIRE(self.code == 0);
    CHECK(self.doc["tool"] == "qshape");
    CHECK(self.doc["version"].is_string());
    REQUIRE(self.doc["command"].is_array());
    CHECK(self.doc["command"][0] == "dist");
    CHECK(self.doc["result"]["theta"].get<double>() < 1e-7);
    CHECK(self.doc["result"]["transition_probability"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));

    REQUIRE(self.doc["inputs"].size() == 2);
    const std::string digest = self.doc["inputs"][0]["digest"].get<std::string>();
    char expect[32];
    std::snprintf(expect, sizeof expect, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(read_file(triangle_csv()))));
    CHECK(digest == expect);

    // Opposite orientations sit at the far pole of the three-point sphere.
    const CliRun far = run_cli({"dist", triangle_csv(), reflected_csv()});
    REQUIRE(far.code == 0);
    CHECK(far.doc["result"]["theta"].get<double>() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("unlabeled distance sees the reflection as a relabelling") {
    const CliRun r = run_cli({"unlabeled-dist", triangle_csv(), reflected_csv()});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["theta"].get<double>() < 1e-7);
    CHECK(r.doc["result"]["labeled_theta"].get<double>() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("normalize writes full-precision amplitudes and an SVG") {
    const fs::path dir = scratch() / "normalize_svg";
    const CliRun r =
        run_cli({"normalize", triangle_csv(), "--svg", dir.string()});
    REQUIRE(r.code == 0);
    // 1/sqrt(3) to 17 significant digits proves the serializer precision.
    CHECK(r.out.find("0.5773502691896257") != std::string::npos);
    REQUIRE(r.doc["svg_files"].size() == 1);
    const std::string svg_path = r.doc["svg_files"][0].get<std::string>();
    CHECK(fs::exists(svg_path));
    CHECK(r.doc["result"]["amplitudes"].size() == 3);
    CHECK(r.doc["seed"] == 0);
}

TEST_CASE("domain failures exit 1 with a typed error document") {
    const std::string degenerate =
        fixture("degenerate.csv", "2,2\n2,2\n2,2\n");
    const CliRun r = run_cli({"normalize", degenerate});
    CHECK(r.code == 1);
    CHECK(r.doc["error"]["type"] == "DegenerateConfig");
    CHECK(!r.doc["error"]["message"].get<std::string>().empty());
    CHECK(!r.doc.contains("result"));

    const CliRun missing = run_cli({"normalize", (scratch() / "nope.csv").string()});
    CHECK(missing.code == 1);
    CHECK(missing.doc["error"]["type"] == "IoError");

    const CliRun coarse = run_cli({"diffuse", triangle_csv(), "--energies", "0,1",
                                   "--dt", "0.1", "--trials", "4"});
    CHECK(coarse.code == 1);
    CHECK(coarse.doc["error"]["type"] == "InvalidParams");
}

TEST_CASE("usage failures exit 2 and help exits 0") {
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"evolve", triangle_csv(), "--t", "1"}).code == 2);
    CHECK(run_cli({"basis", "2"}).code == 2);
    CHECK(run_cli({"dist", "only_one.csv"}).code == 2);
    CHECK(run_cli({"diffuse", triangle_csv(), "--energies", "0,1",
                   "--threads", "9999"}).code == 2);

    const CliRun help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("normalize") != std::string::npos);
}

TEST_CASE("basis reports the hexagon degeneracy table and five SVG files") {
    const fs::path dir = scratch() / "basis_svg";
    const CliRun r = run_cli({"basis", "6", "--svg", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["degeneracy_counts"] == njson({6, 3, 2, 3, 6}));
    REQUIRE(r.doc["result"]["eigenshapes"].size() == 5);
    CHECK(r.doc["result"]["eigenshapes"][2]["multiplicity"] == 3);
    REQUIRE(r.doc["svg_files"].size() == 5);
    for (const auto& f : r.doc["svg_files"]) {
        CHECK(fs::exists(f.get<std::string>()));
    }
}

TEST_CASE("decompose and synth are inverse document operations") {
    const CliRun dec = run_cli({"decompose", triangle_csv()});
    REQUIRE(dec.code == 0);
    CHECK(dec.doc["result"]["norm"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
    // The equilateral triangle is the first eigenshape.
    CHECK(dec.doc["result"]["populations"][0].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));

    const std::string coeffs = fixture("coeffs.csv", "1,0\n0,0\n");
    const CliRun syn = run_cli({"synth", coeffs});
    REQUIRE(syn.code == 0);
    const auto amp = syn.doc["result"]["amplitudes"];
    REQUIRE(amp.size() == 3);
    const cvector_t expect = eigenshape(3, 1).amplitudes();
    for (int i = 0; i < 3; ++i) {
        CHECK(amp[i][0].get<double>() ==
              doctest::Approx(expect[static_cast<std::size_t>(i)].real())
                  .epsilon(1e-12));
    }
}

TEST_CASE("evolve returns the rotated state and an optional trajectory") {
    const CliRun r = run_cli({"evolve", triangle_csv(), "--energies", "0,1",
                              "--t", "2.5", "--samples", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["t"] == 2.5);
    REQUIRE(r.doc["result"]["trajectory"]["times"].size() == 5);
    CHECK(r.doc["result"]["trajectory"]["times"][0] == 0.0);
    CHECK(r.doc["result"]["trajectory"]["times"][4].get<double>() ==
          doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.doc["result"]["trajectory"]["states"].size() == 5);

    const CliRun bare = run_cli({"evolve", triangle_csv(), "--energies", "0,1",
                                 "--t", "2.5"});
    REQUIRE(bare.code == 0);
    CHECK(!bare.doc["result"].contains("trajectory"));
}

TEST_CASE("phase reports stationary input as null period") {
    const CliRun st = run_cli({"phase", triangle_csv(), "--energies", "0,1"});
    REQUIRE(st.code == 0);
    CHECK(st.doc["result"]["stationary"] == true);
    CHECK(st.doc["result"]["period"].is_null());
    CHECK(st.doc["result"]["geometric"] == 0.0);

    // Equal superposition of the two triangle eigenshapes: collinear points,
    // polar angle pi/2, geometric phase pi over one period.
    const std::string equator = fixture("equator.csv", "2,0\n-1,0\n-1,0\n");
    const CliRun r = run_cli({"phase", equator, "--energies", "0,1"});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["stationary"] == false);
    CHECK(r.doc["result"]["period"].get<double>() ==
          doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
    CHECK(r.doc["result"]["geometric"].get<double>() ==
          doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("combine and schmidt agree on a maximally entangled fixture") {
    // Points whose five-point shape has coefficients (1,0,0,1)/sqrt(2):
    // the first eigenshape plus its conjugate collapses onto the real axis.
    cvector_t amps(5);
    for (int j = 0; j < 5; ++j) {
        const complex_t w1 = std::polar(1.0, 2.0 * std::numbers::pi * j / 5.0);
        amps[static_cast<std::size_t>(j)] = (w1 + std::conj(w1)) / std::sqrt(10.0);
    }
    const std::string bell =
        fixture("bell.csv", serialize_points_csv(PointConfig(amps)));

    const CliRun r = run_cli({"schmidt", bell, "--factors", "2,2"});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["values"][0].get<double>() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.doc["result"]["values"][1].get<double>() ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.doc["result"]["entropy"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(r.doc["result"]["product"] == false);

    const CliRun bad = run_cli({"schmidt", bell, "--factors", "2,3"});
    CHECK(bad.code == 1);
    CHECK(bad.doc["error"]["type"] == "DimensionMismatch");

    // A product of two triangles has entropy zero whichever convention.
    for (const std::string conv : {"row", "column"}) {
        const CliRun c = run_cli({"combine", triangle_csv(), triangle_csv(),
                                  "--convention", conv});
        REQUIRE(c.code == 0);
        CHECK(c.doc["result"]["combined_n_points"] == 5);
        CHECK(c.doc["result"]["coefficients"].size() == 4);
    }
}

TEST_CASE("collinear counts three points of four on a line") {
    const std::string file = fixture("mostly_line.csv", "0,0\n1,0\n2,0\n0,1\n");
    const CliRun r = run_cli({"collinear", file});
    REQUIRE(r.code == 0);
    CHECK(r.doc["result"]["max_collinear"] == 3);
    CHECK(r.doc["result"]["tol"] == 1e-6);
    CHECK(r.doc["result"]["n_points"] == 4);
}

TEST_CASE("diffuse is reproducible and thread-count independent") {
    const std::vector<std::string> base = {
        "diffuse", triangle_csv(), "--energies", "0,1", "--trials", "128",
        "--tmax",  "200",          "--seed",     "11"};
    const CliRun a = run_cli(base);
    const CliRun b = run_cli(base);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    std::vector<std::string> threaded = base;
    threaded.push_back("--threads");
    threaded.push_back("4");
    const CliRun c = run_cli(threaded);
    REQUIRE(c.code == 0);
    CHECK(c.doc["result"]["terminal_counts"] == a.doc["result"]["terminal_counts"]);
    CHECK(c.doc["result"]["frequencies"] == a.doc["result"]["frequencies"]);
    CHECK(c.doc["result"]["undecided"] == a.doc["result"]["undecided"]);
    CHECK(c.doc["result"]["mean_energy"] == a.doc["result"]["mean_energy"]);
    CHECK(c.doc["result"]["std_energy"] == a.doc["result"]["std_energy"]);

    // The triangle is an eigenstate, so every trial collapses instantly.
    long total = 0;
    for (const auto& [k, v] : a.doc["result"]["terminal_counts"].items()) {
        total += v.get<long>();
    }
    CHECK(total + a.doc["result"]["undecided"].get<long>() == 128);
    CHECK(a.doc["result"]["terminal_counts"]["1"] == 128);
    CHECK(a.doc["result"]["params"]["seed"] == 11);
}

TEST_CASE("render writes one SVG per input with stem deduplication") {
    const fs::path dir = scratch() / "render_out";
    const CliRun r = run_cli({"render", triangle_csv(), triangle_csv(),
                              reflected_csv(), "--svg", dir.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.doc["result"]["rendered"].size() == 3);
    const std::string p0 = r.doc["result"]["rendered"][0]["svg"].get<std::string>();
    const std::string p1 = r.doc["result"]["rendered"][1]["svg"].get<std::string>();
    CHECK(p0 != p1);
    CHECK(p1.find("tri_2") != std::string::npos);
    for (const auto& row : r.doc["result"]["rendered"]) {
        CHECK(fs::exists(row["svg"].get<std::string>()));
    }
    // Re-rendering produces byte-identical files.
    const std::string before = read_file(p0);
    const CliRun again = run_cli({"render", triangle_csv(), triangle_csv(),
                                  reflected_csv(), "--svg", dir.string()});
    REQUIRE(again.code == 0);
    CHECK(read_file(p0) == before);
}

} // TEST_SUITE
