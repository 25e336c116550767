#include "jumpforge/layout_file.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "jumpforge/errors.hpp"

namespace jumpforge {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
        if (const auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

double parse_double(const std::string& v, std::size_t line) {
    double d = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, d);
    if (ec != std::errc{} || p != end) throw ParseError(line, "expected a number, got '" + v + "'");
    return d;
}

int parse_int(const std::string& v, std::size_t line) {
    int i = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, i);
    if (ec != std::errc{} || p != end) throw ParseError(line, "expected an integer, got '" + v + "'");
    return i;
}

struct QubitSpec {
    std::optional<double> rate;
    std::string mode = "pbs";
    double theta = 0.0;
};

struct Action {
    std::size_t line;
    std::string key;
    std::string value;
};

}  // namespace

OpticalLayout parse_layout(std::istream& in) {
    std::optional<int> n;
    double rate = 1.0;
    std::map<int, QubitSpec> per_qubit;
    std::vector<Action> actions;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw.substr(0, raw.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");

        std::optional<int> index;
        if (const auto lb = key.find('['); lb != std::string::npos) {
            if (key.back() != ']') throw ParseError(line, "malformed key '" + key + "'");
            index = parse_int(key.substr(lb + 1, key.size() - lb - 2), line);
            key = key.substr(0, lb);
            if (!n) throw ParseError(line, "'qubits' must precede per-qubit keys");
            if (*index < 0 || *index >= *n) throw ParseError(line, "qubit index out of range");
        }

        if (key == "qubits" && !index) {
            if (n) throw ParseError(line, "'qubits' given twice");
            n = parse_int(value, line);
            if (*n < 1) throw ParseError(line, "qubit count must be positive");
        } else if (key == "rate") {
            const double r = parse_double(value, line);
            if (!(r > 0.0)) throw ParseError(line, "rate must be positive");
            if (index)
                per_qubit[*index].rate = r;
            else
                rate = r;
        } else if (key == "mode" && index) {
            if (value != "pbs" && value != "se" && value != "is" && value != "se+is" && value != "off")
                throw ParseError(line, "unknown mode '" + value + "'");
            per_qubit[*index].mode = value;
        } else if (key == "theta" && index) {
            per_qubit[*index].theta = parse_double(value, line);
        } else if ((key == "bs" || key == "bs_fixed" || key == "mix" || key == "trigger") && !index) {
            if (!n) throw ParseError(line, "'qubits' must precede '" + key + "'");
            actions.push_back({line, key, value});
        } else {
            throw ParseError(line, "unknown key '" + key + (index ? "[]" : "") + "'");
        }
    }
    if (!n) throw ParseError(line, "missing 'qubits'");

    OpticalLayout layout(*n);
    for (int q = 0; q < *n; ++q) {
        const QubitSpec spec = per_qubit.count(q) ? per_qubit[q] : QubitSpec{};
        const double g = spec.rate.value_or(rate);
        if (spec.mode == "pbs") {
            layout.add_flip_ports(q, g, spec.theta);
        } else if (spec.mode == "se") {
            layout.add(se_channel(*n, q, g));
        } else if (spec.mode == "is") {
            layout.add(is_channel(*n, q, g));
        } else if (spec.mode == "se+is") {
            layout.add(se_channel(*n, q, g));
            layout.add(is_channel(*n, q, g));
        }
    }

    for (const auto& a : actions) {
        try {
            if (a.key == "bs" || a.key == "bs_fixed") {
                const auto ids = words(a.value);
                if (ids.size() != 2) throw ParseError(a.line, "bs needs exactly two channel ids");
                layout.combine(ids[0], ids[1], a.key == "bs");
            } else if (a.key == "mix") {
                layout.mix(a.value);
            } else {
                ReconfigRule rule;
                rule.action = RuleAction::DEACTIVATE;
                for (const auto& w : words(a.value)) {
                    if (w == "repeat") {
                        rule.once = false;
                    } else if (w.rfind("watch:", 0) == 0) {
                        rule.watch = split(w.substr(6), ',');
                    } else if (w.rfind("deactivate:", 0) == 0) {
                        rule.deactivate = split(w.substr(11), ',');
                    } else if (w.rfind("activate:", 0) == 0) {
                        rule.activate = split(w.substr(9), ',');
                    } else {
                        throw ParseError(a.line, "unknown trigger field '" + w + "'");
                    }
                }
                if (rule.watch.empty()) throw ParseError(a.line, "trigger needs watch:<ids>");
                layout.add_rule(std::move(rule));
            }
        } catch (const ParseError&) {
            throw;
        } catch (const ConfigError& e) {
            throw ParseError(a.line, e.what());
        }
    }
    return layout;
}

OpticalLayout parse_layout_string(const std::string& text) {
    std::istringstream in(text);
    return parse_layout(in);
}

}  // namespace jumpforge
