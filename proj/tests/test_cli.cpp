// Black-box tests of the command-line tool: exit codes, artifact
// layout, and byte-level determinism of the emitted reports.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

fs::path unique_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("vortexctl_" + tag + "_" +
                                                    std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void spit(const fs::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary);
    f << text;
}

std::string slurp(const fs::path& file) {
    std::ifstream f(file, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(VORTEXCTL_PATH) + " " + args + " > /dev/null 2> /dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kCp2Flow = R"({
  "action": {"weights": [[1], [1], [1]], "tau": [1.0]},
  "bands": [[-1, 2], [-1, 2], [-1, 2]],
  "r": 0.0,
  "flow": {"s_max": 2.0, "record_ds": 0.1, "initial": {"scale": 0.4}}
})";

} // namespace

TEST_CASE("regularity command reports the exact verdict") {
    const fs::path dir = unique_dir("reg");
    spit(dir / "config.json",
         R"({"action": {"weights": [[1], [1], [1]], "tau_rational": [[1, 1]]}})");
    const int rc = run_tool("regularity --config " + (dir / "config.json").string() + " --out " +
                            dir.string());
    CHECK(rc == 0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"status\": \"Regular\"") != std::string::npos);
    CHECK(report.find("\"proper\": true") != std::string::npos);
    CHECK(report.find("\"approximate\": false") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("flow command writes deterministic artifacts") {
    const fs::path dir = unique_dir("flow");
    spit(dir / "config.json", kCp2Flow);
    const std::string base =
        "flow --config " + (dir / "config.json").string() + " --seed 5 --out ";

    const fs::path out1 = dir / "a", out2 = dir / "b", out3 = dir / "c";
    CHECK(run_tool(base + out1.string()) == 0);
    CHECK(run_tool(base + out2.string()) == 0);
    CHECK(run_tool(base + out3.string() + " --threads 2") == 0);

    for (const char* name : {"report.json", "trajectory.csv", "fields/modes.csv"}) {
        CAPTURE(name);
        const std::string first = slurp(out1 / name);
        CHECK(first.size() > 0);
        CHECK(first == slurp(out2 / name));
        CHECK(first == slurp(out3 / name));
    }

    // a different seed moves the random start
    const fs::path out4 = dir / "d";
    CHECK(run_tool("flow --config " + (dir / "config.json").string() + " --seed 6 --out " +
                   out4.string()) == 0);
    CHECK(slurp(out1 / "report.json") != slurp(out4 / "report.json"));
    fs::remove_all(dir);
}

TEST_CASE("conley command is thread-count invariant") {
    const fs::path dir = unique_dir("conley");
    spit(dir / "config.json", R"({
  "action": {"weights": [[1], [1], [1]], "tau": [1.0]},
  "bands": [[0, 1], [0, 1], [0, 1]],
  "conley": {"samples": 12, "pipeline": "both"}
})");
    const std::string base = "conley --config " + (dir / "config.json").string() + " --out ";
    CHECK(run_tool(base + (dir / "a").string()) == 0);
    CHECK(run_tool(base + (dir / "b").string() + " --threads 3") == 0);
    const std::string report = slurp(dir / "a" / "report.json");
    CHECK(report == slurp(dir / "b" / "report.json"));
    CHECK(report.find("\"critical_dim\": 11") != std::string::npos);
    CHECK(report.find("\"pipelines_agree\": true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("energy audit confirms the identity on a flow segment") {
    const fs::path dir = unique_dir("audit");
    spit(dir / "config.json", kCp2Flow);
    CHECK(run_tool("energy-audit --config " + (dir / "config.json").string() + " --seed 2 --out " +
                   dir.string()) == 0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"identity_holds\": true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("band command prints the mode window") {
    const fs::path dir = unique_dir("band");
    spit(dir / "config.json", R"({
  "action": {"weights": [[1], [1], [1]], "tau": [1.0]},
  "band": {"eta_minus": [0.0], "eta_plus": [0.0]}
})");
    CHECK(run_tool("band --config " + (dir / "config.json").string() + " --out " + dir.string()) ==
          0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"m_minus\": 0") != std::string::npos);
    CHECK(report.find("\"m_plus\": 0") != std::string::npos);
    CHECK(report.find("\"forced_zero\": false") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("neumann test command solves the manufactured cases") {
    const fs::path dir = unique_dir("neumann");
    spit(dir / "config.json", R"({"neumann": {"case": "interior", "half_length": 2.0}})");
    CHECK(run_tool("neumann-test --config " + (dir / "config.json").string() + " --out " +
                   dir.string()) == 0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"max_error\":") != std::string::npos);
    CHECK(report.find("\"estimate_ratio\":") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("error taxonomy maps to exit codes") {
    const fs::path dir = unique_dir("err");

    SUBCASE("malformed JSON is a validation error") {
        spit(dir / "bad.json", "{ this is not json");
        CHECK(run_tool("regularity --config " + (dir / "bad.json").string() + " --out " +
                       dir.string()) == 2);
    }
    SUBCASE("wrong band count is a validation error with a diagnostic") {
        spit(dir / "config.json", R"({
  "action": {"weights": [[1], [1], [1]], "tau": [1.0]},
  "bands": [[0, 1], [0, 1]],
  "flow": {"s_max": 1.0}
})");
        CHECK(run_tool("flow --config " + (dir / "config.json").string() + " --out " +
                       dir.string()) == 2);
        CHECK(slurp(dir / "report.json").find("\"type\": \"validation\"") != std::string::npos);
    }
    SUBCASE("an exhausted step budget is a numerical error") {
        spit(dir / "config.json", R"({
  "action": {"weights": [[1], [1], [1]], "tau": [1.0]},
  "bands": [[-1, 2], [-1, 2], [-1, 2]],
  "flow": {"s_max": 5.0, "max_steps": 3}
})");
        CHECK(run_tool("flow --config " + (dir / "config.json").string() + " --out " +
                       dir.string()) == 3);
        CHECK(slurp(dir / "report.json").find("\"type\": \"numerical\"") != std::string::npos);
    }
    SUBCASE("an unknown command is rejected") {
        spit(dir / "config.json", R"({"action": {"weights": [[1]], "tau": [1.0]}})");
        CHECK(run_tool("frobnicate --config " + (dir / "config.json").string() + " --out " +
                       dir.string()) == 2);
    }
    SUBCASE("a missing config flag is rejected") {
        CHECK(run_tool("regularity") == 2);
    }
    fs::remove_all(dir);
}
