#include "dcelab/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace dce::io {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

int parse_int(std::string_view text) {
    const double v = parse_real(text);
    if (v != static_cast<double>(static_cast<int>(v))) {
        throw std::invalid_argument(fmt::format("'{}' is not an integer", text));
    }
    return static_cast<int>(v);
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

double parse_real(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) {
        throw std::invalid_argument("empty number");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::invalid_argument(fmt::format("'{}' is not a number", s));
    }
    return v;
}

ModelConfig parse_config(std::istream& in, const std::string& source) {
    ModelConfig cfg;
    std::map<std::string, int> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
            throw ParseError(fmt::format("{}:{}: key '{}' already set on line {}", source, line_no, key, it->second));
        }
        try {
            if (key == "k_modes") {
                cfg.k_modes = parse_int(value);
            } else if (key == "n_order") {
                cfg.n_order = parse_int(value);
            } else if (key == "epsilon") {
                cfg.epsilon = parse_real(value);
            } else if (key == "omega1") {
                cfg.omega1 = parse_real(value);
            } else if (key == "kappa") {
                cfg.kappa.clear();
                for (const auto& part : split(value, ',')) {
                    cfg.kappa.push_back(parse_real(part));
                }
            } else if (key == "drive_omega") {
                if (value == "resonant") {
                    cfg.drive_omega.reset();
                } else {
                    cfg.drive_omega = parse_real(value);
                }
            } else {
                throw ParseError(fmt::format("{}:{}: unknown key '{}'", source, line_no, key));
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(fmt::format("{}:{}: key '{}': {}", source, line_no, key, e.what()));
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ParseError(fmt::format("{}: {}", source, e.what()));
    }
    return cfg;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open config file '{}'", path));
    }
    return parse_config(in, path);
}

std::string format_config(const ModelConfig& config) {
    std::string kappa;
    for (std::size_t i = 0; i < config.kappa.size(); ++i) {
        kappa += (i ? ", " : "") + format_real(config.kappa[i]);
    }
    return fmt::format(
        "k_modes = {}\nn_order = {}\nepsilon = {}\nomega1 = {}\nkappa = {}\ndrive_omega = {}\n", config.k_modes,
        config.n_order, format_real(config.epsilon), format_real(config.omega1), kappa,
        config.drive_omega ? format_real(*config.drive_omega) : std::string("resonant"));
}

namespace {

json config_to_json(const ModelConfig& cfg) {
    json j;
    j["k_modes"] = cfg.k_modes;
    j["n_order"] = cfg.n_order;
    j["epsilon"] = cfg.epsilon;
    j["omega1"] = cfg.omega1;
    j["kappa"] = cfg.kappa;
    if (cfg.drive_omega) {
        j["drive_omega"] = *cfg.drive_omega;
    } else {
        j["drive_omega"] = "resonant";
    }
    return j;
}

ModelConfig config_from_json(const json& j) {
    ModelConfig cfg;
    cfg.k_modes = j.at("k_modes").get<int>();
    cfg.n_order = j.at("n_order").get<int>();
    cfg.epsilon = j.at("epsilon").get<double>();
    cfg.omega1 = j.at("omega1").get<double>();
    cfg.kappa = j.at("kappa").get<std::vector<double>>();
    const auto& drive = j.at("drive_omega");
    if (drive.is_string()) {
        if (drive.get<std::string>() != "resonant") {
            throw ParseError("drive_omega must be a number or \"resonant\"");
        }
    } else {
        cfg.drive_omega = drive.get<double>();
    }
    return cfg;
}

}  // namespace

std::string terms_to_json(const TermSystem& system) {
    json doc;
    doc["config"] = config_to_json(system.config);
    doc["damping"] = system.damping;
    json terms = json::array();
    for (const auto& t : system.terms) {
        terms.push_back({{"target", t.target},
                         {"mode", t.source.mode},
                         {"dagger", t.source.dagger},
                         {"coeff_re", exact::to_string(t.coeff.value.re)},
                         {"coeff_im", exact::to_string(t.coeff.value.im)},
                         {"radical", t.coeff.radical},
                         {"scale", exact::to_string(t.coeff.scale)},
                         {"eps_power", t.eps_power},
                         {"harmonic_m", t.harmonic},
                         {"slow_p", t.slow_phase}});
    }
    doc["terms"] = std::move(terms);
    return doc.dump(2) + "\n";
}

TermSystem terms_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        TermSystem system;
        system.config = config_from_json(doc.at("config"));
        system.damping = doc.at("damping").get<std::vector<double>>();
        for (const auto& r : doc.at("terms")) {
            EomTerm t;
            t.target = r.at("target").get<int>();
            t.source = {r.at("mode").get<int>(), r.at("dagger").get<bool>()};
            t.coeff.value = {exact::parse_rational(r.at("coeff_re").get<std::string>()),
                             exact::parse_rational(r.at("coeff_im").get<std::string>())};
            t.coeff.radical = r.at("radical").get<std::int64_t>();
            t.coeff.scale = exact::parse_scale(r.at("scale").get<std::string>());
            t.eps_power = r.at("eps_power").get<int>();
            t.harmonic = r.at("harmonic_m").get<int>();
            t.slow_phase = r.at("slow_p").get<int>();
            system.terms.push_back(t);
        }
        return system;
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("malformed term document: {}", e.what()));
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const int k = trajectory.modes();
    std::string header = "t";
    for (int i = 1; i <= k; ++i) {
        header += fmt::format(",re_a{0},im_a{0}", i);
    }
    for (int i = 1; i <= k; ++i) {
        header += fmt::format(",n{}", i);
    }
    out << header << '\n';
    for (std::size_t s = 0; s < trajectory.size(); ++s) {
        std::string row = format_real(trajectory.times[s]);
        for (const auto& a : trajectory.amplitudes[s]) {
            row += ',' + format_real(a.real()) + ',' + format_real(a.imag());
        }
        for (double n : trajectory.photon_proxy[s]) {
            row += ',' + format_real(n);
        }
        out << row << '\n';
    }
}

TrajectoryTable read_trajectory_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(fmt::format("{}: empty file", source));
    }
    const auto header = split(line, ',');
    if (header.size() < 4 || header.front() != "t" || (header.size() - 1) % 3 != 0) {
        throw ParseError(fmt::format("{}: header does not match t,re_a1,im_a1,...,n1,...", source));
    }
    TrajectoryTable table;
    table.modes = static_cast<int>((header.size() - 1) / 3);
    for (int i = 1; i <= table.modes; ++i) {
        const auto base = static_cast<std::size_t>(2 * i - 1);
        if (header[base] != fmt::format("re_a{}", i) || header[base + 1] != fmt::format("im_a{}", i) ||
            header[static_cast<std::size_t>(2 * table.modes + i)] != fmt::format("n{}", i)) {
            throw ParseError(fmt::format("{}: unexpected column names in header", source));
        }
    }
    table.photons.assign(static_cast<std::size_t>(table.modes), {});
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw ParseError(fmt::format("{}:{}: expected {} columns, found {}", source, line_no, header.size(),
                                         cells.size()));
        }
        try {
            table.times.push_back(parse_real(cells[0]));
            for (int i = 0; i < table.modes; ++i) {
                table.photons[static_cast<std::size_t>(i)].push_back(
                    parse_real(cells[static_cast<std::size_t>(2 * table.modes + 1 + i)]));
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(fmt::format("{}:{}: {}", source, line_no, e.what()));
        }
    }
    return table;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "epsilon,ratio,lambda_max,unstable\n";
    for (const auto& c : cells) {
        out << format_real(c.epsilon) << ',' << format_real(c.ratio) << ',' << format_real(c.lambda_max) << ','
            << (c.unstable ? 1 : 0) << '\n';
    }
}

}  // namespace dce::io
