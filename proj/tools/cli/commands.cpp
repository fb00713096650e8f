#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcelab/expansion.hpp"
#include "dcelab/io.hpp"
#include "dcelab/stability.hpp"

namespace dce::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kFullIntegrationMaxOrder = 5;

struct ModelFlags {
    std::string config_path;
    std::optional<int> k;
    std::optional<int> n;
    std::optional<double> eps;
    std::optional<double> omega1;
    std::optional<double> kappa;
    std::optional<double> ratio;
    std::optional<double> drive;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "Key-value model configuration file");
        app.add_option("--k", k, "Number of cavity modes (default: n)");
        app.add_option("--n", n, "Expansion / resonance order");
        app.add_option("--eps", eps, "Modulation depth x_m/L0");
        app.add_option("--omega1", omega1, "Fundamental frequency (default 1)");
        app.add_option("--kappa", kappa, "Uniform damping rate");
        app.add_option("--ratio", ratio, "Quality ratio omega1/kappa1 (sets uniform damping)");
        app.add_option("--drive-omega", drive, "Mechanical frequency; default is the resonant value");
    }

    [[nodiscard]] ModelConfig resolve() const {
        ModelConfig cfg;
        const bool from_file = !config_path.empty();
        if (from_file) {
            cfg = io::load_config(config_path);
        }
        if (n) cfg.n_order = *n;
        if (k) {
            cfg.k_modes = *k;
        } else if (!from_file && n) {
            cfg.k_modes = *n;
        }
        if (eps) cfg.epsilon = *eps;
        if (omega1) cfg.omega1 = *omega1;
        if (kappa && ratio) {
            throw UsageError("--kappa and --ratio are mutually exclusive");
        }
        if (kappa) cfg.kappa.assign(1, *kappa);
        if (ratio) cfg.set_ratio(*ratio);
        if (drive) cfg.drive_omega = *drive;
        cfg.validate();
        return cfg;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot read '{}'", path));
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string manifest_path_for(const std::string& out_path) { return out_path + ".manifest.json"; }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json config_json(const ModelConfig& cfg) {
    json j = {{"k_modes", cfg.k_modes},
              {"n_order", cfg.n_order},
              {"epsilon", cfg.epsilon},
              {"omega1", cfg.omega1},
              {"kappa", cfg.kappa}};
    j["drive_omega"] = cfg.drive_omega ? json(*cfg.drive_omega) : json("resonant");
    return j;
}

ModelConfig config_from(const json& j) {
    ModelConfig cfg;
    cfg.k_modes = j.at("k_modes").get<int>();
    cfg.n_order = j.at("n_order").get<int>();
    cfg.epsilon = j.at("epsilon").get<double>();
    cfg.omega1 = j.at("omega1").get<double>();
    cfg.kappa = j.at("kappa").get<std::vector<double>>();
    if (!j.at("drive_omega").is_string()) {
        cfg.drive_omega = j.at("drive_omega").get<double>();
    }
    cfg.validate();
    return cfg;
}

json resonance_json(const ModelConfig& cfg) {
    return {{"omega1", cfg.omega1},
            {"omega1_shifted", cfg.shifted_omega1()},
            {"drive_omega", cfg.drive()},
            {"resonant", cfg.resonant_drive()}};
}

void write_manifest(const std::string& out_path, const std::string& command, const json& config, const json& resonance,
                    const json& options) {
    json m;
    m["command"] = command;
    m["tool_version"] = kToolVersion;
    m["timestamp"] = utc_timestamp();
    m["config"] = config;
    m["resonance"] = resonance;
    m["options"] = options;
    m["outputs"] = json::array({out_path});
    write_file(manifest_path_for(out_path), m.dump(2) + "\n");
}

void print_warnings(const ModelConfig& cfg, std::ostream& err) {
    for (const auto& w : cfg.warnings()) {
        err << "warning: " << w << '\n';
    }
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

std::string coefficient_text(const EomTerm& t) {
    std::string s = fmt::format("{} eps^{}", exact::to_string(t.coeff.value), t.eps_power);
    if (t.coeff.radical != 1) {
        s += fmt::format(" sqrt({})", t.coeff.radical);
    }
    if (t.coeff.scale == exact::Scale::Omega1) s += " w1";
    if (t.coeff.scale == exact::Scale::Drive) s += " W";
    return s;
}

std::string resonant_matrix_listing(const TermSystem& rwa) {
    const int k = rwa.modes();
    std::map<std::pair<int, int>, std::vector<std::string>> entries;
    for (int i = 0; i < k; ++i) {
        entries[{i, i}].push_back(fmt::format("-kappa{}/2", i + 1));
        entries[{k + i, k + i}].push_back(fmt::format("-kappa{}/2", i + 1));
    }
    auto col = [k](const OperatorRef& op) { return op.dagger ? k + op.mode - 1 : op.mode - 1; };
    for (const auto& t : rwa.terms) {
        entries[{t.target - 1, col(t.source)}].push_back(coefficient_text(t));
        const auto c = t.conjugate();
        entries[{k + t.target - 1, col(c.source)}].push_back(coefficient_text(c));
    }
    std::string labels;
    for (int i = 1; i <= k; ++i) labels += fmt::format("A{} ", i);
    for (int i = 1; i <= k; ++i) labels += fmt::format("A{}* ", i);
    std::string out = fmt::format("d/dt ( {}) = M ( {}), M =\n", labels, labels);
    for (int r = 0; r < 2 * k; ++r) {
        out += "  [";
        for (int c = 0; c < 2 * k; ++c) {
            const auto it = entries.find({r, c});
            std::string cell = "0";
            if (it != entries.end()) {
                cell.clear();
                for (std::size_t i = 0; i < it->second.size(); ++i) {
                    cell += (i ? " + " : "") + it->second[i];
                }
            }
            out += fmt::format(" {:>16}", cell);
        }
        out += " ]\n";
    }
    return out;
}

int cmd_derive(const ModelFlags& flags, bool rwa, const std::string& emit_terms, const std::string& listing_path,
               std::ostream& out, std::ostream& err) {
    const auto cfg = flags.resolve();
    print_warnings(cfg, err);
    TermSystem system = generate_eom(cfg);
    if (rwa) {
        system = rwa_filter(system, cfg.n_order);
    }
    std::string listing = format_equations(system);
    if (rwa) {
        listing += "\n" + resonant_matrix_listing(system);
    }
    if (!emit_terms.empty()) {
        write_file(emit_terms, io::terms_to_json(system));
    }
    if (listing_path.empty()) {
        out << listing;
    } else {
        write_file(listing_path, listing);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// stability
// ---------------------------------------------------------------------------

int cmd_stability(const ModelFlags& flags, bool as_json, std::ostream& out, std::ostream& err) {
    const auto cfg = flags.resolve();
    print_warnings(cfg, err);
    const auto ls = assemble_linear_system(rwa_filter(generate_eom(cfg), cfg.n_order));
    const auto result = max_real_eigenvalue(ls);
    const double closed = closed_form_lambda_max(cfg.n_order, cfg.epsilon, cfg.omega1, cfg.kappa_of(1));
    const double ratio = cfg.kappa_of(1) > 0.0 ? cfg.omega1 / cfg.kappa_of(1) : INFINITY;
    if (as_json) {
        json j;
        j["config"] = config_json(cfg);
        j["resonance"] = resonance_json(cfg);
        j["lambda_max"] = result.lambda_max;
        j["photon_growth_rate"] = 2.0 * result.lambda_max;
        j["closed_form_lambda_max"] = closed;
        j["boundary_ratio"] = result.boundary_ratio;
        j["ratio"] = ratio;
        j["unstable"] = result.unstable;
        json ev = json::array();
        for (const auto& z : result.eigenvalues) {
            ev.push_back({z.real(), z.imag()});
        }
        j["eigenvalues"] = ev;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << fmt::format("omega1             = {}\n", io::format_real(cfg.omega1));
    out << fmt::format("omega1_shifted     = {}\n", io::format_real(cfg.shifted_omega1()));
    out << fmt::format("drive_omega        = {}{}\n", io::format_real(cfg.drive()),
                       cfg.resonant_drive() ? " (resonant)" : "");
    out << fmt::format("lambda_max         = {}\n", io::format_real(result.lambda_max));
    out << fmt::format("photon_growth_rate = {}\n", io::format_real(2.0 * result.lambda_max));
    out << fmt::format("closed_form        = {}\n", io::format_real(closed));
    out << fmt::format("ratio              = {}\n", io::format_real(ratio));
    out << fmt::format("boundary_ratio     = {}\n", io::format_real(result.boundary_ratio));
    out << fmt::format("verdict            = {}\n", result.unstable ? "unstable" : "stable");
    out << "eigenvalues:\n";
    for (const auto& z : result.eigenvalues) {
        out << fmt::format("  {} {:+.17g}i\n", io::format_real(z.real()), z.imag());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRequest {
    int n_order = 3;
    int k_modes = 0;
    double omega1 = 1.0;
    std::vector<double> eps;
    std::vector<double> ratio;
    unsigned jobs = 1;
};

std::string sweep_csv(const SweepRequest& req, std::ostream& err) {
    SweepOptions opts;
    opts.k_modes = req.k_modes;
    opts.omega1 = req.omega1;
    opts.jobs = req.jobs;
    const auto cells = sweep_stability(req.n_order, req.eps, req.ratio, opts);
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            err << fmt::format("warning: cell (eps={}, ratio={}) failed: {}\n", c.epsilon, c.ratio, c.error);
        }
    }
    std::ostringstream csv;
    io::write_sweep_csv(csv, cells);
    return csv.str();
}

json sweep_options_json(const SweepRequest& req) {
    return {{"n_order", req.n_order},
            {"k_modes", req.k_modes > 0 ? req.k_modes : req.n_order},
            {"omega1", req.omega1},
            {"epsilon_grid", req.eps},
            {"ratio_grid", req.ratio}};
}

int emit_sweep(const SweepRequest& req, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto csv = sweep_csv(req, err);
    if (out_path.empty()) {
        out << csv;
        return kExitOk;
    }
    write_file(out_path, csv);
    ModelConfig snapshot;
    snapshot.n_order = req.n_order;
    snapshot.k_modes = req.k_modes > 0 ? req.k_modes : req.n_order;
    snapshot.omega1 = req.omega1;
    snapshot.epsilon = 0.0;
    write_manifest(out_path, "sweep", config_json(snapshot), json::object(), sweep_options_json(req));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

json simulate_options_json(const SimulateRequest& req) {
    json init = json::array();
    for (const auto& a : req.init.amplitudes) {
        init.push_back({a.real(), a.imag()});
    }
    return {{"mode", req.mode},
            {"t_end", req.t_end},
            {"samples", req.integration.samples},
            {"rtol", req.integration.rtol},
            {"atol", req.integration.atol},
            {"initial_amplitudes", init}};
}

SimulateRequest simulate_request_from(const json& manifest) {
    SimulateRequest req;
    req.config = config_from(manifest.at("config"));
    const auto& o = manifest.at("options");
    req.mode = o.at("mode").get<std::string>();
    req.t_end = o.at("t_end").get<double>();
    req.integration.samples = o.at("samples").get<std::size_t>();
    req.integration.rtol = o.at("rtol").get<double>();
    req.integration.atol = o.at("atol").get<double>();
    for (const auto& a : o.at("initial_amplitudes")) {
        req.init.amplitudes.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    }
    return req;
}

int emit_simulation(const SimulateRequest& req, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto traj = run_simulation(req);
    std::ostringstream csv;
    io::write_trajectory_csv(csv, traj);
    if (req.mode == "full") {
        err << fmt::format("integrator: {} steps, {} rejected, {} rhs evaluations, max local error {:.3g}\n",
                           traj.stats.steps, traj.stats.rejected, traj.stats.rhs_evaluations,
                           traj.stats.max_local_error);
    }
    if (out_path.empty()) {
        out << csv.str();
        return kExitOk;
    }
    write_file(out_path, csv.str());
    write_manifest(out_path, "simulate", config_json(req.config), resonance_json(req.config),
                   simulate_options_json(req));
    return kExitOk;
}

std::vector<std::complex<double>> parse_init(const std::string& text, int modes) {
    // "re[,im];re[,im];..." one entry per mode, missing modes start at rest
    std::vector<std::complex<double>> out(static_cast<std::size_t>(modes));
    std::size_t idx = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (idx >= out.size()) {
            throw UsageError(fmt::format("--init lists more than {} amplitudes", modes));
        }
        const auto comma = item.find(',');
        const double re = io::parse_real(item.substr(0, comma));
        const double im = comma == std::string::npos ? 0.0 : io::parse_real(item.substr(comma + 1));
        out[idx++] = {re, im};
    }
    return out;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const std::string& in_path, int mode, const std::string& window_text, std::ostream& out) {
    std::ifstream f(in_path);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot read '{}'", in_path));
    }
    const auto table = io::read_trajectory_csv(f, in_path);
    if (mode < 1 || mode > table.modes) {
        throw UsageError(fmt::format("--mode {} outside 1..{}", mode, table.modes));
    }
    if (table.times.size() < 2) {
        throw std::domain_error("trajectory has fewer than two samples");
    }
    FitWindow window{table.times.back() / 2.0, table.times.back()};
    if (!window_text.empty()) {
        const auto colon = window_text.find(':');
        if (colon == std::string::npos) {
            throw UsageError("--window expects begin:end");
        }
        window = {io::parse_real(window_text.substr(0, colon)), io::parse_real(window_text.substr(colon + 1))};
    }
    const double rate = fit_growth_rate(table.times, table.photons[static_cast<std::size_t>(mode - 1)], window);
    json j = {{"mode", mode}, {"window", {window.begin, window.end}}, {"rate", rate}};
    out << j.dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

int cmd_replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw io::ParseError(fmt::format("{}: {}", manifest_path, e.what()));
    }
    const auto command = manifest.at("command").get<std::string>();
    const auto outputs = manifest.at("outputs").get<std::vector<std::string>>();
    const std::string target = !out_override.empty() ? out_override : outputs.at(0);
    if (command == "simulate") {
        return emit_simulation(simulate_request_from(manifest), target, out, err);
    }
    if (command == "sweep") {
        const auto& o = manifest.at("options");
        SweepRequest req;
        req.n_order = o.at("n_order").get<int>();
        req.k_modes = o.at("k_modes").get<int>();
        req.omega1 = o.at("omega1").get<double>();
        req.eps = o.at("epsilon_grid").get<std::vector<double>>();
        req.ratio = o.at("ratio_grid").get<std::vector<double>>();
        req.jobs = resolve_jobs(0);
        return emit_sweep(req, target, out, err);
    }
    throw UsageError(fmt::format("manifest command '{}' cannot be replayed", command));
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (first == std::string::npos) {
        return {io::parse_real(text)};
    }
    if (second == std::string::npos) {
        throw UsageError(fmt::format("grid '{}' must be start:end:step", text));
    }
    const double start = io::parse_real(text.substr(0, first));
    const double end = io::parse_real(text.substr(first + 1, second - first - 1));
    const double step = io::parse_real(text.substr(second + 1));
    if (!(step > 0.0) || end < start) {
        throw UsageError(fmt::format("grid '{}' needs step > 0 and end >= start", text));
    }
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = start + static_cast<double>(i) * step;
    }
    return out;
}

unsigned resolve_jobs(int requested) {
    if (requested > 0) {
        return static_cast<unsigned>(requested);
    }
    if (const char* env = std::getenv("DCE_LAB_JOBS"); env && *env) {
        const int v = std::atoi(env);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Trajectory run_simulation(const SimulateRequest& request) {
    const auto& cfg = request.config;
    cfg.validate();
    TermSystem system = generate_eom(cfg);
    if (request.mode == "rwa") {
        return integrate_rwa(rwa_filter(system, cfg.n_order), request.init, request.t_end, request.integration.samples);
    }
    if (request.mode == "full") {
        return integrate_full(system, request.init, request.t_end, request.integration);
    }
    throw UsageError(fmt::format("unknown mode '{}' (expected full or rwa)", request.mode));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical Casimir effect lab: equations of motion, stability, and photon dynamics", "dce_lab"};
    app.require_subcommand(1);

    // derive
    auto* derive = app.add_subcommand("derive", "Generate and print the equations of motion");
    ModelFlags derive_flags;
    derive_flags.attach(*derive);
    bool derive_rwa = false;
    std::string emit_terms, listing_path;
    derive->add_flag("--rwa", derive_rwa, "Keep only resonant terms and print the constant matrix");
    derive->add_option("--emit-terms", emit_terms, "Write the term list as JSON");
    derive->add_option("--listing", listing_path, "Write the human-readable listing here instead of stdout");

    // stability
    auto* stability = app.add_subcommand("stability", "lambda_max and verdict of the resonant system");
    ModelFlags stability_flags;
    stability_flags.attach(*stability);
    bool stability_json = false;
    stability->add_flag("--json", stability_json, "Print a JSON document");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Stability map over (epsilon, omega1/kappa1)");
    int sweep_n = 0, sweep_k = 0, sweep_jobs = 0;
    double sweep_omega1 = 1.0;
    std::string eps_grid, ratio_grid, ratio_log_grid, sweep_out;
    sweep->add_option("--n", sweep_n, "Resonance order")->required();
    sweep->add_option("--k", sweep_k, "Number of modes (default: n)");
    sweep->add_option("--omega1", sweep_omega1, "Fundamental frequency");
    sweep->add_option("--eps", eps_grid, "epsilon grid start:end:step")->required();
    auto* ratio_opt = sweep->add_option("--ratio", ratio_grid, "omega1/kappa1 grid start:end:step");
    auto* ratio_log_opt = sweep->add_option("--ratio-log", ratio_log_grid, "log10(omega1/kappa1) grid start:end:step");
    ratio_opt->excludes(ratio_log_opt);
    sweep->add_option("--out", sweep_out, "CSV output path (a manifest is written alongside)");
    sweep->add_option("--jobs", sweep_jobs, "Worker threads (fallback: DCE_LAB_JOBS)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Integrate the first-moment dynamics");
    ModelFlags sim_flags;
    sim_flags.attach(*simulate);
    std::string sim_mode = "rwa", sim_out, sim_init;
    std::optional<double> sim_t_end;
    double sim_seed = kDefaultDeviation;
    IntegrationOptions sim_integration;
    bool force_full = false;
    simulate->add_option("--mode", sim_mode, "full or rwa")->check(CLI::IsMember({"full", "rwa"}));
    simulate->add_option("--t-end", sim_t_end, "End time (default 10/lambda_max of the resonant system)");
    simulate->add_option("--samples", sim_integration.samples, "Output samples on [0, t_end]");
    simulate->add_option("--rtol", sim_integration.rtol, "Relative local error target (full mode)");
    simulate->add_option("--atol", sim_integration.atol, "Absolute error floor (full mode)");
    simulate->add_option("--seed", sim_seed, "Initial <a_1> deviation");
    simulate->add_option("--init", sim_init, "Initial amplitudes re[,im];re[,im];... (overrides --seed)");
    simulate->add_option("--out", sim_out, "CSV output path (a manifest is written alongside)");
    simulate->add_flag("--force-full", force_full, "Allow full integration at n >= 6");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit the exponential growth rate of a trajectory CSV");
    std::string fit_in, fit_window;
    int fit_mode = 1;
    fit->add_option("--in", fit_in, "Trajectory CSV written by simulate")->required();
    fit->add_option("--mode", fit_mode, "Cavity mode index (1-based)");
    fit->add_option("--window", fit_window, "begin:end (default: second half of the run)");

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run a sweep or simulation from its manifest");
    std::string replay_manifest, replay_out;
    replay->add_option("manifest", replay_manifest, "Manifest JSON")->required();
    replay->add_option("--out", replay_out, "Output path (default: the recorded one)");

    std::vector<const char*> argv{"dce_lab"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (derive->parsed()) {
            return cmd_derive(derive_flags, derive_rwa, emit_terms, listing_path, out, err);
        }
        if (stability->parsed()) {
            return cmd_stability(stability_flags, stability_json, out, err);
        }
        if (sweep->parsed()) {
            SweepRequest req;
            req.n_order = sweep_n;
            req.k_modes = sweep_k;
            req.omega1 = sweep_omega1;
            req.eps = parse_grid(eps_grid);
            if (!ratio_log_grid.empty()) {
                for (double e : parse_grid(ratio_log_grid)) {
                    req.ratio.push_back(std::pow(10.0, e));
                }
            } else if (!ratio_grid.empty()) {
                req.ratio = parse_grid(ratio_grid);
            } else {
                throw UsageError("sweep needs --ratio or --ratio-log");
            }
            req.jobs = resolve_jobs(sweep_jobs);
            return emit_sweep(req, sweep_out, out, err);
        }
        if (simulate->parsed()) {
            SimulateRequest req;
            req.config = sim_flags.resolve();
            print_warnings(req.config, err);
            req.mode = sim_mode;
            req.integration = sim_integration;
            if (req.mode == "full" && req.config.n_order > kFullIntegrationMaxOrder && !force_full) {
                err << fmt::format("error: full integration at n = {} is numerically unreliable "
                                   "(extremely fast phases); use --mode rwa or pass --force-full\n",
                                   req.config.n_order);
                return kExitDomain;
            }
            req.init = sim_init.empty() ? InitialState::seeded(req.config.k_modes, sim_seed)
                                        : InitialState{parse_init(sim_init, req.config.k_modes)};
            if (sim_t_end) {
                req.t_end = *sim_t_end;
            } else {
                const auto lambda =
                    max_real_eigenvalue(assemble_linear_system(rwa_filter(generate_eom(req.config), req.config.n_order)))
                        .lambda_max;
                if (lambda == 0.0) {
                    throw UsageError("lambda_max is zero; pass --t-end explicitly");
                }
                req.t_end = 10.0 / std::abs(lambda);
            }
            return emit_simulation(req, sim_out, out, err);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_in, fit_mode, fit_window, out);
        }
        if (replay->parsed()) {
            return cmd_replay(replay_manifest, replay_out, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace dce::cli
