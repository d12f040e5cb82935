#include "tbmo/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace tbmo;

namespace {

const std::filesystem::path kCli = TBMO_CLI_PATH;

int run(const std::string& args, const std::filesystem::path& dir)
{
    const std::string cmd = "cd '" + dir.string() + "' && '" + kCli.string() + "' " + args + " > out.txt 2> err.txt";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path fresh(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("tbmo_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("simulate writes a conserving trajectory")
{
    const auto dir = fresh("simulate");
    REQUIRE(run("simulate --u1 0.3 -N 40000", dir) == 0);
    const CsvTable t = read_csv(dir / "trajectory.csv");
    REQUIRE(t.rows.size() == 241);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double sum = t.number(r, "S") + t.number(r, "L1") + t.number(r, "I") + t.number(r, "L2") +
                           t.number(r, "R");
        CHECK(std::abs(sum - 40000) <= 1e-10 * 40000);
        CHECK(t.number(r, "u1") == 0.3);
    }
}

TEST_CASE("front honours --levels and the output directory variable")
{
    const auto dir = fresh("front");
    REQUIRE(run("front --levels 5", dir) == 0);
    const auto rows = read_front_csv(dir / "front_epsilon-constraint.csv");
    CHECK(rows.size() == 5);
    CHECK(rows.front().eps == 0.0);
    CHECK(rows.back().eps == 10.0);

    REQUIRE(run("hv front_epsilon-constraint.csv --ref 40000,11", dir) == 0);
    const double hv = std::stod(slurp(dir / "out.txt"));
    std::vector<ObjectivePoint> pts;
    for (const auto& r : rows) {
        pts.push_back(r.objectives);
    }
    CHECK(hv == doctest::Approx(hypervolume_2d(pts, {40000, 11})).epsilon(1e-12));

    const auto env_dir = fresh("front_env");
    REQUIRE(run("simulate --name t.csv", env_dir) == 0);
    const std::string cmd = "cd '" + env_dir.string() + "' && TBMO_OUTPUT_DIR=sub '" + kCli.string() +
                            "' simulate --name t.csv > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(std::filesystem::exists(env_dir / "sub" / "t.csv"));
}

TEST_CASE("config file and per-field overrides")
{
    const auto dir = fresh("config");
    std::ofstream(dir / "run.json") << R"({"model": {"beta": 150}, "output_dir": "res"})";
    REQUIRE(run("simulate --config run.json --eps1 0.25", dir) == 0);
    const CsvTable t = read_csv(dir / "res" / "trajectory.csv");
    std::string config;
    for (const auto& [k, v] : t.provenance) {
        if (k == "config") {
            config = v;
        }
    }
    const RunConfig cfg = parse_config(config);
    CHECK(cfg.model.beta == 150);
    CHECK(cfg.model.eps1 == 0.25);
    CHECK(cfg.output_dir == "res");
}

TEST_CASE("usage errors exit 2 and runtime errors exit 1")
{
    const auto dir = fresh("errors");
    CHECK(run("", dir) == 2);
    CHECK(run("explode", dir) == 2);
    CHECK(run("simulate --betta 3", dir) == 2);
    CHECK(run("sweep --axis gamma", dir) == 2);
    CHECK(run("hv", dir) == 2);
    CHECK(run("simulate --eps1 1.5", dir) == 1);
    CHECK(slurp(dir / "err.txt").find("eps1") != std::string::npos);
    std::ofstream(dir / "bad.json") << R"({"model": {"betta": 1}})";
    CHECK(run("front --config bad.json", dir) == 1);
    CHECK(slurp(dir / "err.txt").find("model.betta") != std::string::npos);
    CHECK(run("hv missing.csv --ref 1,1", dir) == 1);
}

TEST_CASE("compare prints a three-row table")
{
    const auto dir = fresh("compare");
    REQUIRE(run("compare --weights 3 --levels 3", dir) == 0);
    const std::string out = slurp(dir / "out.txt");
    CHECK(out.find("epsilon-constraint") != std::string::npos);
    CHECK(out.find("Goal attainment") != std::string::npos);
    CHECK(out.find("Chebyshev") != std::string::npos);
    CHECK(std::count(out.begin(), out.end(), '\n') == 4);
    const CsvTable t = read_csv(dir / "compare_hypervolume.csv");
    CHECK(t.rows.size() == 3);
}
