#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "jumpforge/ensemble.hpp"
#include "jumpforge/errors.hpp"
#include "jumpforge/graph.hpp"
#include "jumpforge/layout_file.hpp"
#include "jumpforge/protocols.hpp"
#include "jumpforge/trajectory.hpp"
#include "jumpforge/verify.hpp"

#ifndef JUMPFORGE_VERSION
#define JUMPFORGE_VERSION "0.0.0"
#endif

namespace jumpforge::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kMaxStatevectorVertices = 14;
constexpr double kFidelityTolerance = 1e-10;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string trajectory_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "traj_%06zu", i);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

class OutputDir {
public:
    explicit OutputDir(std::string root) : root_(std::move(root)) {
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec) throw IoError("cannot create output directory " + root_ + ": " + ec.message());
    }

    void write(const std::string& rel, const std::string& content) const {
        const fs::path path = fs::path(root_) / rel;
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << content;
        f.close();
        if (!f) throw IoError("cannot write " + path.string());
    }

private:
    std::string root_;
};

// ---------------------------------------------------------------- config files

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Splices the key=value lines of --config into the argument list. Flags given
// on the command line win over the file.
void expand_config(std::vector<std::string>& args, const std::vector<std::string>& commands) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty()) return;

    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value in " + path);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key in " + path);
        entries.emplace_back(key, value);
    }

    const bool has_command =
        std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return std::find(commands.begin(), commands.end(), a) != commands.end();
        });
    for (const auto& [key, value] : entries) {
        if (key == "command") {
            if (!has_command) args.insert(args.begin(), value);
            continue;
        }
        if (!has_flag(args, key)) args.push_back("--" + key + "=" + value);
    }
}

// Comment header: version, command and every option value, defaults
// included. The output location is left out so that runs written to
// different directories can be compared byte for byte.
std::string header(const CLI::App& sub) {
    std::string h = "# jumpforge " JUMPFORGE_VERSION " " + sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "out") continue;
        std::string value;
        if (opt->get_expected_max() == 0) {
            value = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
        } else if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        h += " --" + name + "=" + value;
    }
    return h + "\n";
}

// ---------------------------------------------------------------- shared output

std::string stages_rows(std::size_t traj, const TrajectoryLog& log) {
    std::string out;
    for (std::size_t s = 0; s < log.stage_marks.size(); ++s) {
        const auto& m = log.stage_marks[s];
        out += std::to_string(traj) + ',' + std::to_string(s) + ',' + m.label + ',' + num(m.time) + ',' +
               std::to_string(m.first_click) + '\n';
    }
    return out;
}

// Detector lanes against time, a diamond per click and a dashed line per
// stage start.
std::string timeline_svg(const TrajectoryLog& log, const std::string& title) {
    std::vector<std::string> lanes;
    for (const auto& c : log.clicks)
        if (std::find(lanes.begin(), lanes.end(), c.detector) == lanes.end()) lanes.push_back(c.detector);
    const double left = 110, right = 20, top = 40, lane_h = 26, plot_w = 700;
    const double height = top + lane_h * static_cast<double>(std::max<std::size_t>(lanes.size(), 1)) + 40;
    const double width = left + plot_w + right;
    double t_max = log.end_time;
    for (const auto& c : log.clicks) t_max = std::max(t_max, c.time);
    if (!(t_max > 0.0)) t_max = 1.0;
    auto x = [&](double t) { return left + plot_w * t / t_max; };
    auto lane_y = [&](std::size_t i) { return top + lane_h * (static_cast<double>(i) + 0.5); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(width) << "\" height=\""
       << fixed2(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<text x=\"" << fixed2(left) << "\" y=\"20\">" << title << "</text>\n";
    for (std::size_t i = 0; i < lanes.size(); ++i) {
        os << "<text x=\"5\" y=\"" << fixed2(lane_y(i) + 4) << "\">" << lanes[i] << "</text>\n";
        os << "<line x1=\"" << fixed2(left) << "\" y1=\"" << fixed2(lane_y(i)) << "\" x2=\""
           << fixed2(left + plot_w) << "\" y2=\"" << fixed2(lane_y(i)) << "\" stroke=\"#ccc\"/>\n";
    }
    const double bottom = height - 30;
    for (const auto& m : log.stage_marks) {
        os << "<line x1=\"" << fixed2(x(m.time)) << "\" y1=\"" << fixed2(top - 8) << "\" x2=\"" << fixed2(x(m.time))
           << "\" y2=\"" << fixed2(bottom) << "\" stroke=\"#888\" stroke-dasharray=\"4,3\"/>\n";
        os << "<text x=\"" << fixed2(x(m.time) + 3) << "\" y=\"" << fixed2(top - 10) << "\">" << m.label
           << "</text>\n";
    }
    for (const auto& c : log.clicks) {
        const auto lane = static_cast<std::size_t>(std::find(lanes.begin(), lanes.end(), c.detector) - lanes.begin());
        const double cx = x(c.time), cy = lane_y(lane), r = 6;
        os << "<polygon points=\"" << fixed2(cx) << ',' << fixed2(cy - r) << ' ' << fixed2(cx + r) << ','
           << fixed2(cy) << ' ' << fixed2(cx) << ',' << fixed2(cy + r) << ' ' << fixed2(cx - r) << ','
           << fixed2(cy) << "\" fill=\"" << (c.sign < 0 ? "#c33" : "#36c") << "\"/>\n";
    }
    os << "<text x=\"" << fixed2(left) << "\" y=\"" << fixed2(height - 10) << "\">0</text>\n";
    os << "<text x=\"" << fixed2(left + plot_w - 60) << "\" y=\"" << fixed2(height - 10) << "\">t = " << num(t_max)
       << " / gamma</text>\n";
    os << "</svg>\n";
    return os.str();
}

// "-Z", "+iY", ... from the "qubit op phase" line of format_corrections.
std::string correction_token(const CorrectionOp& op) {
    std::istringstream line(format_corrections({op}));
    std::string qubit, name, phase;
    line >> qubit >> name >> phase;
    if (phase == "+1") phase = "+";
    if (phase == "-1") phase = "-";
    return phase + name;
}

// ---------------------------------------------------------------- teleport

struct TeleportOptions {
    double alpha_re = 1.0, alpha_im = 0.0, beta_re = 0.0, beta_im = 0.0;
    double stage_b = 1.0, t_meas = 20.0;
    std::uint64_t seed = 1;
    std::size_t trajectories = 1;
    std::string out;
    bool plot = false;
};

int cmd_teleport(const TeleportOptions& o, const std::string& head, std::ostream& out) {
    const cplx alpha(o.alpha_re, o.alpha_im), beta(o.beta_re, o.beta_im);
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-10)
        throw ConfigError("amplitudes are not normalized: |alpha|^2 + |beta|^2 = " + num(norm));
    const auto script = teleport_script(alpha, beta, o.stage_b, o.t_meas);
    StateVector input(1);
    input[0] = alpha;
    input[1] = beta;

    struct Row {
        TrajectoryLog log;
        std::string correction;
        double fidelity = 0.0;
    };
    const auto rows = map_indexed(o.trajectories, [&](std::size_t i) {
        RngStream rng(o.seed, i);
        auto res = run(script, rng);
        const auto op = pauli_correction(res.log, script.roles);
        const auto bob = extract_qubit(apply_corrections(res.state, {op}), script.roles.at("B"));
        return Row{std::move(res.log), correction_token(op), fidelity(bob, input)};
    });

    const OutputDir dir(o.out);
    std::string summary = head + "trajectory,clicks,correction,fidelity\n";
    std::string stages = head + "trajectory,stage,label,time,first_click\n";
    std::string measurements = head + "trajectory,qubit,outcome,time\n";
    double worst = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        summary += std::to_string(i) + ',' + std::to_string(r.log.clicks.size()) + ',' + r.correction + ',' +
                   num(r.fidelity) + '\n';
        stages += stages_rows(i, r.log);
        for (const auto& m : r.log.measurements)
            measurements += std::to_string(i) + ',' + std::to_string(m.qubit) + ',' + std::to_string(m.outcome) +
                            ',' + num(m.time) + '\n';
        dir.write("events/" + trajectory_name(i) + ".csv", head + event_csv(r.log));
        worst = std::min(worst, r.fidelity);
    }
    dir.write("summary.csv", summary);
    dir.write("stages.csv", stages);
    dir.write("measurements.csv", measurements);
    if (o.plot && !rows.empty())
        dir.write("timeline_" + trajectory_name(0) + ".svg", timeline_svg(rows[0].log, "teleportation, trajectory 0"));

    const bool pass = worst >= 1.0 - kFidelityTolerance;
    out << "trajectories: " << rows.size() << "\nminimum fidelity: " << num(worst) << '\n'
        << (pass ? "PASS" : "FAIL") << ": Bob's corrected qubit matches the input in every trajectory\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- graph

struct GraphOptions {
    std::string graph;
    int rows = 0, cols = 0;
    std::string backend = "statevector";
    std::string wiring = "pairwise";
    std::uint64_t seed = 1;
    std::size_t trajectories = 1;
    std::string out;
    bool plot = false;
};

GraphSpec load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read edge list " + path);
    return parse_edge_list(in);
}

int cmd_graph(const GraphOptions& o, const std::string& head, std::ostream& out) {
    if (!o.graph.empty() && (o.rows > 0 || o.cols > 0))
        throw ConfigError("give either --graph or --rows/--cols, not both");
    GraphSpec graph;
    if (!o.graph.empty())
        graph = load_graph(o.graph);
    else if (o.rows > 0 && o.cols > 0)
        graph = grid_graph(o.rows, o.cols);
    else
        throw ConfigError("graph needs --graph <edge list> or --rows and --cols");
    if (graph.n_edges() == 0) throw ConfigError("graph has no edges");
    const bool tableau = o.backend == "stabilizer";
    if (!tableau && graph.n_vertices() > kMaxStatevectorVertices)
        throw ConfigError("statevector backend holds at most " + std::to_string(kMaxStatevectorVertices) +
                          " qubits but the graph has " + std::to_string(graph.n_vertices()) +
                          " vertices; use --backend stabilizer");
    const auto script =
        graph_script(graph, o.wiring == "sequential" ? Wiring::SEQUENTIAL_CHAIN : Wiring::PAIRWISE_SPLIT);

    struct Row {
        TrajectoryLog log;
        std::string corrections;
        double check = 0.0;
    };
    const StateVector target = tableau ? StateVector(1) : standard_graph_state(graph);
    const StabilizerTableau target_tab = tableau ? StabilizerTableau::from_graph(graph) : StabilizerTableau(1);
    const auto rows = map_indexed(o.trajectories, [&](std::size_t i) {
        RngStream rng(o.seed, i);
        if (tableau) {
            auto res = run_tableau(script, rng);
            const auto ops = graph_correction(res.log, graph);
            apply_corrections(res.tableau, ops);
            return Row{std::move(res.log), format_corrections(ops), states_equal(res.tableau, target_tab) ? 1.0 : 0.0};
        }
        auto res = run(script, rng);
        const auto ops = graph_correction(res.log, graph);
        return Row{std::move(res.log), format_corrections(ops), fidelity(apply_corrections(res.state, ops), target)};
    });

    const OutputDir dir(o.out);
    std::string summary =
        head + "trajectory,clicks,completion_time," + (tableau ? "states_equal" : "fidelity") + '\n';
    std::string stages = head + "trajectory,stage,label,time,first_click\n";
    bool pass = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        summary += std::to_string(i) + ',' + std::to_string(r.log.clicks.size()) + ',' + num(r.log.end_time) + ',' +
                   (tableau ? (r.check > 0.5 ? "true" : "false") : num(r.check)) + '\n';
        stages += stages_rows(i, r.log);
        dir.write("events/" + trajectory_name(i) + ".csv", head + event_csv(r.log));
        dir.write("corrections/" + trajectory_name(i) + ".txt", head + r.corrections);
        pass = pass && (tableau ? r.check > 0.5 : r.check >= 1.0 - kFidelityTolerance);
    }
    dir.write("summary.csv", summary);
    dir.write("stages.csv", stages);
    if (o.plot && !rows.empty())
        dir.write("timeline_" + trajectory_name(0) + ".svg", timeline_svg(rows[0].log, "graph state, trajectory 0"));

    out << "vertices: " << graph.n_vertices() << "\nedges: " << graph.n_edges() << "\ntrajectories: " << rows.size()
        << "\nbackend: " << o.backend << '\n'
        << (pass ? "PASS" : "FAIL") << ": corrected states equal the graph state in every trajectory\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- timing

struct TimingOptions {
    int rows = 0, cols = 0;
    std::size_t edges = 0;
    bool edges_given = false;
    double rate = 1.0;
    std::string wiring = "equal";
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_timing(const TimingOptions& o, const std::string& head, std::ostream& out) {
    const bool grid = o.rows > 0 || o.cols > 0;
    if (grid == o.edges_given) throw ConfigError("timing needs either --rows and --cols or --edges");
    if (grid && (o.rows < 1 || o.cols < 1)) throw ConfigError("--rows and --cols must both be positive");
    if (!(o.rate > 0.0)) throw ConfigError("--rate must be positive");

    TimingResult result;
    if (grid) {
        const auto g = grid_graph(o.rows, o.cols);
        if (g.n_edges() == 0) throw ConfigError("the grid has no edges");
        if (o.wiring == "pairwise") {
            const auto rates = pairwise_split_rates(g, o.rate);
            result = coupon_time_stats(rates, o.samples, o.seed);
        } else {
            result = coupon_time_stats(g.n_edges(), o.rate, o.samples, o.seed);
        }
    } else {
        if (o.edges == 0) throw ConfigError("--edges must be at least 1");
        if (o.wiring == "pairwise") throw ConfigError("--wiring pairwise needs a grid");
        result = coupon_time_stats(o.edges, o.rate, o.samples, o.seed);
    }

    if (!o.out.empty())
        OutputDir(o.out).write("timing.csv", head + kTimingCsvHeader + "\n" + timing_csv_row(result) + "\n");

    const double se = result.ci95 / 1.96;
    out << "edges: " << result.n_edges << "\nsamples: " << result.samples << "\nmean completion time: "
        << num(result.mean) << " +- " << num(result.ci95) << " (95% CI) in units of 1/gamma\n";
    if (o.wiring == "pairwise")
        out << "analytic (integrated, per-edge rates): " << num(result.analytic) << '\n';
    else
        out << "analytic H_N / rate: " << num(result.analytic) << " (H_N = " << num(harmonic_number(result.n_edges))
            << ")\n";
    out << "deviation: " << num(se > 0 ? (result.mean - result.analytic) / se : 0.0) << " standard errors\n";
    if (grid && o.rows == 100 && o.cols == 100)
        out << "published estimate: about 12 decay times; analytic / 12 = " << num(result.analytic / 12.0) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    std::string layout;
    std::string initial = "+0";
    double time = 1.0;
    std::size_t trajectories = 10000;
    double tolerance = 0.02;
    std::uint64_t seed = 1;
    std::string out;
};

StateVector product_state(const std::string& spec) {
    const int n = static_cast<int>(spec.size());
    if (n < 1) throw ConfigError("--initial is empty");
    std::vector<std::array<cplx, 2>> factors;
    const double h = 1.0 / std::sqrt(2.0);
    for (char c : spec) {
        switch (c) {
            case '0': factors.push_back({1.0, 0.0}); break;
            case '1': factors.push_back({0.0, 1.0}); break;
            case '+': factors.push_back({h, h}); break;
            case '-': factors.push_back({h, -h}); break;
            default: throw ConfigError(std::string("--initial accepts 0, 1, + and -, not '") + c + "'");
        }
    }
    StateVector psi(n);
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        cplx a = 1.0;
        for (int q = 0; q < n; ++q) a *= factors[static_cast<std::size_t>(q)][(i & qubit_mask(n, q)) ? 1 : 0];
        psi[i] = a;
    }
    return psi;
}

OpticalLayout default_verify_layout() {
    OpticalLayout l(2);
    l.add_flip_ports(0, 1.0);
    l.add_flip_ports(1, 1.0);
    l.combine("x0", "x1", false);
    return l;
}

int cmd_verify(const VerifyOptions& o, const std::string& head, std::ostream& out) {
    OpticalLayout layout;
    if (o.layout.empty()) {
        layout = default_verify_layout();
    } else {
        std::ifstream in(o.layout);
        if (!in) throw IoError("cannot read layout file " + o.layout);
        layout = parse_layout(in);
    }
    if (!layout.triggers().empty())
        throw ConfigError("the master-equation comparison needs a fixed channel set; remove bs and trigger lines");
    const StateVector init = product_state(o.initial);
    if (init.n_qubits() != layout.n_qubits())
        throw ConfigError("--initial has " + std::to_string(init.n_qubits()) + " qubits but the layout has " +
                          std::to_string(layout.n_qubits()));
    if (!(o.time > 0.0)) throw ConfigError("--time must be positive");

    ProtocolScript script;
    script.register_size = layout.n_qubits();
    script.initial = init;
    const auto active = layout.active_channels();
    script.stages.push_back({"fixed", layout, Termination::after(o.time)});

    double total_rate = 0.0;
    for (const auto& ch : active) total_rate += ch.rate;
    const double dt = 0.002 / std::max(1.0, total_rate);

    const auto averaged = trajectory_average(script, o.trajectories, o.time, o.seed);
    const auto exact = lindblad_evolve(DensityMatrix::pure(init), active, o.time, dt);
    const double distance = trace_distance(averaged, exact);
    const bool close = distance <= o.tolerance;

    const auto decay = total_decay(active);
    const bool uniform = decay.kind == DecayClass::UNIFORM;
    double no_jump = 1.0;
    if (uniform) no_jump = fidelity(no_jump_evolve(init, decay, o.time), init);
    const bool protected_ok = !uniform || no_jump >= 1.0 - 1e-12;

    std::string report = head + "metric,value,limit,pass\n";
    report += "trace_distance," + num(distance) + ',' + num(o.tolerance) + ',' + (close ? "true" : "false") + '\n';
    report += "unobserved_purity," + num(exact.purity()) + ",,\n";
    if (uniform)
        report += "no_jump_fidelity," + num(no_jump) + ",1e-12," + (protected_ok ? "true" : "false") + '\n';
    if (!o.out.empty()) {
        const OutputDir dir(o.out);
        dir.write("verify.csv", report);
        dir.write("rho_trajectories.csv", head + density_csv(averaged));
        dir.write("rho_lindblad.csv", head + density_csv(exact));
    }

    out << "channels: " << active.size() << "\ntrajectories: " << o.trajectories << "\ntime: " << num(o.time)
        << "\ntrace distance (trajectory average vs master equation): " << num(distance) << " (limit "
        << num(o.tolerance) << ")\nunobserved purity: " << num(exact.purity()) << '\n';
    if (uniform) out << "uniform decay: no-jump fidelity with the initial state " << num(no_jump) << '\n';
    const bool pass = close && protected_ok;
    out << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-jump protocol simulator: teleportation, graph states, timing and verification",
                 "jumpforge"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", JUMPFORGE_VERSION);
    app.footer("Exit codes: 0 success, 1 check failed, 2 usage or configuration error, 3 I/O error.\n"
               "--config <file> reads key = value lines (keys are flag names without dashes,\n"
               "'command' selects the subcommand); command-line flags take precedence.");

    TeleportOptions tel;
    auto* tele = app.add_subcommand("teleport", "teleport alpha|0> + beta|1> from Charlie to Bob");
    tele->add_option("--alpha-re", tel.alpha_re, "real part of alpha");
    tele->add_option("--alpha-im", tel.alpha_im, "imaginary part of alpha");
    tele->add_option("--beta-re", tel.beta_re, "real part of beta");
    tele->add_option("--beta-im", tel.beta_im, "imaginary part of beta");
    tele->add_option("--stage-b", tel.stage_b, "duration of the local-flip stage (1/gamma)");
    tele->add_option("--tmeas", tel.t_meas, "readout cutoff (1/gamma)");
    tele->add_option("--seed", tel.seed, "master seed");
    tele->add_option("--trajectories", tel.trajectories, "number of trajectories")->check(CLI::PositiveNumber);
    tele->add_option("--out", tel.out, "output directory")->required();
    tele->add_flag("--plot", tel.plot, "also write an SVG click timeline of trajectory 0");

    GraphOptions gra;
    auto* graph = app.add_subcommand("graph", "generate a graph state and check the corrected result");
    graph->add_option("--graph", gra.graph, "edge list file, one 'u v' pair per line");
    graph->add_option("--rows", gra.rows, "grid rows (instead of --graph)");
    graph->add_option("--cols", gra.cols, "grid columns (instead of --graph)");
    graph->add_option("--backend", gra.backend, "statevector or stabilizer")
        ->check(CLI::IsMember({"statevector", "stabilizer"}));
    graph->add_option("--wiring", gra.wiring, "pairwise (all edges at once) or sequential")
        ->check(CLI::IsMember({"pairwise", "sequential"}));
    graph->add_option("--seed", gra.seed, "master seed");
    graph->add_option("--trajectories", gra.trajectories, "number of trajectories")->check(CLI::PositiveNumber);
    graph->add_option("--out", gra.out, "output directory")->required();
    graph->add_flag("--plot", gra.plot, "also write an SVG click timeline of trajectory 0");

    TimingOptions tim;
    auto* timing = app.add_subcommand("timing", "completion time of the all-edges-clicked event");
    timing->add_option("--rows", tim.rows, "grid rows");
    timing->add_option("--cols", tim.cols, "grid columns");
    auto* edges_opt = timing->add_option("--edges", tim.edges, "number of independent edges");
    timing->add_option("--rate", tim.rate, "click rate of one edge (gamma)");
    timing->add_option("--wiring", tim.wiring, "equal (every edge at --rate) or pairwise (grid degree split)")
        ->check(CLI::IsMember({"equal", "pairwise"}));
    timing->add_option("--samples", tim.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    timing->add_option("--seed", tim.seed, "master seed");
    timing->add_option("--out", tim.out, "output directory (optional)");

    VerifyOptions ver;
    auto* verify = app.add_subcommand("verify", "compare trajectory averages with the master equation");
    verify->add_option("--layout", ver.layout, "layout file (default: two qubits, flips plus a fixed BS)");
    verify->add_option("--initial", ver.initial, "product initial state over 0, 1, +, -");
    verify->add_option("--time", ver.time, "evolution time (1/gamma)");
    verify->add_option("--trajectories", ver.trajectories, "number of trajectories")->check(CLI::PositiveNumber);
    verify->add_option("--tolerance", ver.tolerance, "largest accepted trace distance");
    verify->add_option("--seed", ver.seed, "master seed");
    verify->add_option("--out", ver.out, "output directory (optional)");

    try {
        expand_config(args, {"teleport", "graph", "timing", "verify"});
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*tele) return cmd_teleport(tel, header(*tele), out);
        if (*graph) return cmd_graph(gra, header(*graph), out);
        if (*timing) {
            tim.edges_given = edges_opt->count() > 0;
            return cmd_timing(tim, header(*timing), out);
        }
        return cmd_verify(ver, header(*verify), out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace jumpforge::cli
