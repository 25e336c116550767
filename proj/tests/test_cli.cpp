#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = jumpforge::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("jumpforge_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

void check_identical_trees(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), a);
        REQUIRE(fs::exists(b / rel));
        CHECK(slurp(entry.path()) == slurp(b / rel));
        ++files;
    }
    std::size_t other = 0;
    for (const auto& entry : fs::recursive_directory_iterator(b)) other += entry.is_regular_file();
    CHECK(files == other);
    CHECK(files > 0);
}

}  // namespace

TEST_CASE("teleport: basis input, 100 trajectories, all exact") {
    const auto dir = scratch("tele");
    const auto r = invoke({"teleport", "--alpha-re", "1", "--beta-re", "0", "--trajectories", "100", "--seed", "7",
                           "--out", dir.string()});
    CHECK(r.code == 0);
    const auto rows = csv_rows(dir / "summary.csv");
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == std::vector<std::string>{"trajectory", "clicks", "correction", "fidelity"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][0] == std::to_string(i - 1));
        CHECK(std::stod(rows[i][3]) >= 1.0 - 1e-10);
    }
    CHECK(fs::exists(dir / "events" / "traj_000099.csv"));
    const std::string head = slurp(dir / "summary.csv").substr(0, slurp(dir / "summary.csv").find('\n'));
    CHECK(head.rfind("# jumpforge ", 0) == 0);
    CHECK(head.find("--seed=7") != std::string::npos);
    CHECK(head.find("--trajectories=100") != std::string::npos);
    CHECK(slurp(dir / "events" / "traj_000000.csv").find("time,detector,kind,sign,qubits\n") != std::string::npos);
}

TEST_CASE("teleport: the flip stage lasts --stage-b") {
    const auto dir = scratch("stageb");
    REQUIRE(invoke({"teleport", "--stage-b", "1.0", "--trajectories", "5", "--out", dir.string()}).code == 0);
    const auto rows = csv_rows(dir / "stages.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][1] != "2") continue;
        const double c_start = std::stod(rows[i][3]), b_start = std::stod(rows[i - 1][3]);
        CHECK(c_start - b_start == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("teleport: errors map to exit codes") {
    auto r = invoke({"teleport", "--alpha-re", "1", "--beta-re", "1", "--out", scratch("bad").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("normalized") != std::string::npos);

    const auto blocker = scratch("blocker");
    std::ofstream(blocker) << "a file, not a directory";
    r = invoke({"teleport", "--out", (blocker / "sub").string()});
    CHECK(r.code == 3);

    CHECK(invoke({"teleport"}).code == 2);
    CHECK(invoke({"teleport", "--bogus", "1", "--out", "x"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("determinism: identical flags give byte-identical files") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> flags{"--alpha-re", "0.6", "--beta-im", "0.8", "--trajectories", "40",
                                         "--seed", "11", "--plot"};
    auto args_a = flags, args_b = flags;
    args_a.insert(args_a.begin(), "teleport");
    args_b.insert(args_b.begin(), "teleport");
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string()});
    CHECK(invoke(args_a).code == 0);
    CHECK(invoke(args_b).code == 0);
    check_identical_trees(a, b);

    const auto c = scratch("det_c"), d = scratch("det_d");
    CHECK(invoke({"graph", "--rows", "2", "--cols", "3", "--trajectories", "10", "--out", c.string()}).code == 0);
    CHECK(invoke({"graph", "--rows", "2", "--cols", "3", "--trajectories", "10", "--out", d.string()}).code == 0);
    check_identical_trees(c, d);
}

TEST_CASE("teleport --plot draws one diamond per click") {
    const auto dir = scratch("plot");
    REQUIRE(invoke({"teleport", "--plot", "--seed", "3", "--out", dir.string()}).code == 0);
    const std::string svg = slurp(dir / "timeline_traj_000000.svg");
    std::size_t diamonds = 0;
    for (auto p = svg.find("<polygon"); p != std::string::npos; p = svg.find("<polygon", p + 1)) ++diamonds;
    CHECK(diamonds == csv_rows(dir / "events" / "traj_000000.csv").size() - 1);
}

TEST_CASE("graph command") {
    const auto dir = scratch("graph");
    fs::create_directories(dir);
    std::ofstream(dir / "path.txt") << "# 3-path\n0 1\n1 2\n";
    auto r = invoke({"graph", "--graph", (dir / "path.txt").string(), "--trajectories", "20", "--out",
                     (dir / "sv").string()});
    CHECK(r.code == 0);
    const auto rows = csv_rows(dir / "sv" / "summary.csv");
    REQUIRE(rows.size() == 21);
    CHECK(rows[0] == std::vector<std::string>{"trajectory", "clicks", "completion_time", "fidelity"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) >= 1.0 - 1e-10);

    r = invoke({"graph", "--rows", "6", "--cols", "6", "--backend", "stabilizer", "--trajectories", "3", "--out",
                (dir / "tab").string()});
    CHECK(r.code == 0);
    for (const auto& row : csv_rows(dir / "tab" / "summary.csv"))
        if (row[0] != "trajectory") CHECK(row[3] == "true");

    r = invoke({"graph", "--rows", "3", "--cols", "5", "--out", (dir / "big").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("at most 14") != std::string::npos);

    std::ofstream(dir / "bad.txt") << "0 1\n1 two\n";
    r = invoke({"graph", "--graph", (dir / "bad.txt").string(), "--out", (dir / "bad").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    r = invoke({"graph", "--graph", (dir / "missing.txt").string(), "--out", (dir / "m").string()});
    CHECK(r.code == 3);
}

TEST_CASE("timing command") {
    const auto dir = scratch("timing");
    auto r = invoke({"timing", "--edges", "3", "--samples", "100000", "--seed", "5", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto rows = csv_rows(dir / "timing.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][2]) / (11.0 / 6.0) - 1.0) < 0.02);

    r = invoke({"timing", "--edges", "1", "--samples", "100000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("analytic H_N / rate: 1 ") != std::string::npos);

    r = invoke({"timing", "--rows", "100", "--cols", "100", "--samples", "200"});
    CHECK(r.code == 0);
    CHECK(r.out.find("edges: 19800") != std::string::npos);
    CHECK(r.out.find("analytic H_N / rate: 10.47") != std::string::npos);
    CHECK(r.out.find("about 12") != std::string::npos);

    CHECK(invoke({"timing", "--edges", "0"}).code == 2);
    CHECK(invoke({"timing", "--rows", "1", "--cols", "1"}).code == 2);
    CHECK(invoke({"timing"}).code == 2);
}

TEST_CASE("verify command") {
    const auto dir = scratch("verify");
    auto r = invoke({"verify", "--trajectories", "4000", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto rows = csv_rows(dir / "verify.csv");
    CHECK(rows[1][0] == "trace_distance");
    CHECK(rows[1][3] == "true");

    fs::create_directories(dir);
    std::ofstream(dir / "decay.layout") << "qubits = 1\nmode[0] = se\n";
    r = invoke({"verify", "--layout", (dir / "decay.layout").string(), "--initial", "1", "--trajectories", "4000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("no-jump fidelity") == std::string::npos);

    r = invoke({"verify", "--layout", (dir / "decay.layout").string(), "--initial", "10"});
    CHECK(r.code == 2);
    std::ofstream(dir / "triggered.layout") << "qubits = 2\nbs = x0 x1\n";
    r = invoke({"verify", "--layout", (dir / "triggered.layout").string(), "--initial", "00"});
    CHECK(r.code == 2);
}

TEST_CASE("config files") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "# teleport a basis state\ncommand = teleport\nalpha-re = 0\nbeta-re = 1\n"
                                      "trajectories = 3\nseed = 9\nout = "
                                   << (dir / "from_file").string() << "\n";
    auto r = invoke({"--config", (dir / "run.cfg").string()});
    CHECK(r.code == 0);
    CHECK(csv_rows(dir / "from_file" / "summary.csv").size() == 4);

    r = invoke({"teleport", "--config", (dir / "run.cfg").string(), "--trajectories", "5"});
    CHECK(r.code == 0);
    const std::string summary = slurp(dir / "from_file" / "summary.csv");
    CHECK(summary.find("--seed=9") != std::string::npos);
    CHECK(csv_rows(dir / "from_file" / "summary.csv").size() == 6);

    std::ofstream(dir / "broken.cfg") << "command = teleport\nthis line has no equals sign\n";
    r = invoke({"--config", (dir / "broken.cfg").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    CHECK(invoke({"teleport", "--config", (dir / "nope.cfg").string()}).code == 3);
}
