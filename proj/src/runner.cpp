#include "diamag/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "diamag/errors.hpp"
#include "diamag/io.hpp"

#ifndef DIAMAG_VERSION_STRING
#define DIAMAG_VERSION_STRING "unknown"
#endif

namespace diamag {

namespace {

struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::size_t> kPaperSites{40, 80, 160, 320};
const std::vector<double> kPaperDeltas{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};

std::string join(const auto& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ',';
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
            out += io::format_double(v);
        } else {
            out += std::to_string(v);
        }
    }
    return out;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name.empty()) return;
    if (name == "fig2") {
        cfg.sites = kPaperSites;
        cfg.deltas = {0.0};
        cfg.length_wavelengths = 10.0;
    } else if (name == "fig3") {
        cfg.sites = kPaperSites;
        cfg.deltas = kPaperDeltas;
        cfg.length_wavelengths = 10.0;
    } else if (name == "fig4b") {
        cfg.circuit = fig4_circuit();
        cfg.c_max = 10.0;
        cfg.c_points = 400;
        cfg.law = LawSource::Paper;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig2, fig3 or fig4b)");
    }
    cfg.preset = name;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        io::write_text(path, content);
        files_.push_back({name, content});
        paths_.push_back(path);
        return path;
    }

    const std::vector<std::filesystem::path>& paths() const { return paths_; }

    void describe(io::Record& manifest) const {
        for (const auto& [name, content] : files_) {
            manifest.set("output." + name + ".sha256", io::sha256_hex(content));
            manifest.set("output." + name + ".bytes", std::to_string(content.size()));
        }
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::vector<std::filesystem::path> paths_;
};

LatticeConfig lattice_for(const RunConfig& cfg, std::size_t sites, double delta) {
    LatticeConfig c;
    c.sites = sites;
    c.length = cfg.length();
    c.coupling = cfg.coupling;
    c.delta = delta;
    c.dipole = cfg.dipole;
    c.validate();
    return c;
}

SweepOptions sweep_options(const RunConfig& cfg, CouplingKind coupling) {
    SweepOptions o;
    o.deltas = cfg.deltas;
    o.sites = cfg.sites;
    o.coupling = coupling;
    o.length = cfg.length();
    o.window = cfg.window;
    o.dipole = cfg.dipole;
    o.execution = cfg.execution;
    return o;
}

void record_law(io::Record& rec, const std::string& prefix, const AlphaSweep& sweep) {
    rec.set(prefix + "coupling", std::string(to_string(sweep.coupling)));
    if (sweep.law) {
        rec.set(prefix + "status", std::string("ok"));
        rec.set(prefix + "a", sweep.law->a);
        rec.set(prefix + "b", sweep.law->b);
        rec.set(prefix + "residual", sweep.law->residual);
        rec.set(prefix + "points", std::to_string(sweep.law->points));
        rec.set(prefix + "delta_min", sweep.law->delta_min);
        rec.set(prefix + "delta_max", sweep.law->delta_max);
    } else {
        rec.set(prefix + "status", "failed: " + sweep.law_error);
    }
    rec.set(prefix + "excluded_deltas", join(sweep.excluded_deltas));
    if (sweep.finest_law) {
        rec.set(prefix + "finest_M", std::to_string(sweep.entries.empty() ? 0 : sweep.entries.back().sites));
        rec.set(prefix + "finest_a", sweep.finest_law->a);
        rec.set(prefix + "finest_b", sweep.finest_law->b);
        rec.set(prefix + "finest_residual", sweep.finest_law->residual);
    }
}

DecouplingLaw resolve_law(const RunConfig& cfg, io::Record& results, OutputSet& out) {
    if (cfg.law == LawSource::Paper) {
        results.set("law.source", std::string("paper"));
        return kPaperLaw;
    }
    const AlphaSweep sweep = sweep_delta(sweep_options(cfg, CouplingKind::Capacitive));
    io::Record rec;
    record_law(rec, "", sweep);
    out.write("law_fit.txt", rec.to_string());
    if (!sweep.law) throw FitError("own decoupling law unavailable: " + sweep.law_error);
    results.set("law.source", std::string("self"));
    return *sweep.law;
}

void run_dispersion(const RunConfig& cfg, OutputSet& out, io::Record& results) {
    if (cfg.deltas.size() != 1) throw ConfigError("dispersion takes a single --delta");
    std::vector<LatticeConfig> configs;
    for (std::size_t m : cfg.sites) configs.push_back(lattice_for(cfg, m, cfg.deltas.front()));
    const auto modes = diagonalize(configs, cfg.execution);

    io::CsvTable table{{"M", "n", "nu_n"}, {}};
    std::vector<std::pair<double, double>> lowest;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& ms = modes[k];
        const auto m = static_cast<double>(configs[k].sites);
        for (Eigen::Index n = 0; n < ms.size(); ++n) {
            table.add_row({m, static_cast<double>(n + 1), ms.frequencies(n)});
        }
        out.write("modes_M" + std::to_string(configs[k].sites) + ".csv", io::modes_table(ms).to_string());
        if (cfg.dump_model) {
            out.write("model_M" + std::to_string(configs[k].sites) + ".txt",
                      io::dump_model(build_chain(configs[k])));
        }
        results.set("lowest_frequency.M" + std::to_string(configs[k].sites), ms.frequencies(0));
        lowest.emplace_back(configs[k].spacing(), ms.frequencies(0));
    }
    out.write("dispersion.csv", table.to_string());
    results.set("lowest_frequency.continuum_expected", 2.0 * std::numbers::pi / cfg.length());
    if (lowest.size() >= 3) results.set("lowest_frequency.extrapolated", extrapolate_continuum(lowest));
}

double noise_check(std::uint64_t seed, FitWindow window) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.0, 0.01);
    CumulativeCurve curve;
    for (int i = 0; i < 200; ++i) {
        const double nu = 0.01 * (i + 1) * 2.0;
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        curve.nu_grid.push_back(nu);
        curve.d_values.push_back(nu * nu * (1.0 + sign * amp(rng)));
    }
    return fit_power_law(curve, window).exponent;
}

void run_spectral(const RunConfig& cfg, OutputSet& out, io::Record& results) {
    std::vector<LatticeConfig> configs;
    for (double delta : cfg.deltas)
        for (std::size_t m : cfg.sites) configs.push_back(lattice_for(cfg, m, delta));
    const auto fits = evaluate_grid(configs, cfg.window, cfg.execution);

    io::CsvTable fit_table{{"delta", "M", "prefactor", "exponent", "residual", "alpha"}, {}};
    for (const auto& r : fits) {
        fit_table.add_row({r.config.delta, static_cast<double>(r.config.sites), r.free.prefactor,
                           r.free.exponent, r.free.residual, r.alpha()});
    }
    out.write("spectral_fits.csv", fit_table.to_string());

    // J(nu) of the finest lattice per Delta, from the differentiated fit of D
    std::vector<LatticeConfig> finest;
    for (double delta : cfg.deltas) finest.push_back(lattice_for(cfg, *std::max_element(cfg.sites.begin(), cfg.sites.end()), delta));
    const auto modes = diagonalize(finest, cfg.execution);
    io::CsvTable table{{"delta", "nu", "J"}, {}};
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const CumulativeCurve curve = cumulative_coupling(modes[k], cfg.dipole);
        const SpectralFit fit = fit_power_law(curve, cfg.window);
        for (const auto& [nu, d] : curve.fit_samples()) {
            if (nu < cfg.window.lo || nu > cfg.window.hi) continue;
            table.add_row({finest[k].delta, nu, fit.spectral_density(nu)});
        }
    }
    out.write("spectral.csv", table.to_string());
    results.set("noise_check.seed", std::to_string(cfg.seed));
    results.set("noise_check.exponent", noise_check(cfg.seed, cfg.window));
}

void run_sweep(const RunConfig& cfg, OutputSet& out, io::Record& results) {
    const AlphaSweep sweep = sweep_delta(sweep_options(cfg, cfg.coupling));
    io::CsvTable alpha{{"delta", "M", "alpha", "alpha_extrapolated"}, {}};
    io::CsvTable ohmic{{"delta", "M", "exponent", "exponent_extrapolated"}, {}};
    for (const auto& e : sweep.entries) {
        const auto it = std::find_if(sweep.extrapolated.begin(), sweep.extrapolated.end(),
                                     [&](const ContinuumEntry& c) { return c.delta == e.delta; });
        alpha.add_row({e.delta, static_cast<double>(e.sites), e.alpha, it->alpha});
        ohmic.add_row({e.delta, static_cast<double>(e.sites), e.exponent, it->exponent});
    }
    out.write("alpha.csv", alpha.to_string());
    out.write("ohmicity.csv", ohmic.to_string());
    io::Record rec;
    record_law(rec, "", sweep);
    out.write("law_fit.txt", rec.to_string());
    record_law(results, "law.", sweep);
}

void run_emission(const RunConfig& cfg, OutputSet& out, io::Record& results) {
    const DecouplingLaw law = resolve_law(cfg, results, out);
    const auto grid = relative_capacitance_grid(cfg.c_max, cfg.c_points);
    const EmissionCurve curve = emission_curve(cfg.circuit, grid, law);

    io::CsvTable table{{"c", "ratio_with_A2", "ratio_without_A2"}, {}};
    for (std::size_t i = 0; i < curve.c_grid.size(); ++i) {
        table.add_row({curve.c_grid[i], curve.ratio_with_a2[i], curve.ratio_without_a2[i]});
    }
    out.write("emission.csv", table.to_string());
    if (cfg.height_scale > 0.0) {
        io::CsvTable height{{"z", "ratio_with_A2", "ratio_without_A2"}, {}};
        for (std::size_t i = curve.c_grid.size(); i-- > 0;) {
            height.add_row({cfg.height_scale / curve.c_grid[i], curve.ratio_with_a2[i], curve.ratio_without_a2[i]});
        }
        out.write("emission_height.csv", height.to_string());
    }

    const CircuitMapping at_one = map_circuit(cfg.circuit.with_relative_capacitance(1.0), law.a);
    io::Record summary;
    summary.set("kappa", curve.kappa);
    summary.set("delta_at_c1", at_one.delta);
    summary.set("dipole_at_c1", at_one.dipole);
    const auto peak = emission_peak(curve.kappa, law.b, cfg.c_max / static_cast<double>(cfg.c_points), cfg.c_max);
    summary.set("c_star", peak ? io::format_double(*peak) : std::string("none"));
    summary.set("law_a", law.a);
    summary.set("law_b", law.b);
    out.write("emission_summary.txt", summary.to_string());
    for (const auto& [k, v] : summary.items()) results.set("emission." + k, v);
}

void run_end_to_end(const RunConfig& cfg, OutputSet& out, io::Record& results) {
    const DecouplingLaw law = resolve_law(cfg, results, out);
    const auto grid = relative_capacitance_grid(cfg.c_max, cfg.c_points);
    const CircuitParams at_one = cfg.circuit.with_relative_capacitance(1.0);
    const double kappa = map_circuit(at_one, law.a).kappa;

    io::CsvTable table{{"c", "ratio_first_principles", "ratio_closed_form", "extrapolated"}, {}};
    double worst = 0.0;
    bool any_extrapolated = false;
    for (double c : grid) {
        const EndToEndRatio e = end_to_end_ratio(cfg.circuit.with_relative_capacitance(c), at_one, law);
        const double closed = emission_ratio(c, kappa, law.b);
        worst = std::max(worst, std::abs(e.ratio / closed - 1.0));
        any_extrapolated = any_extrapolated || e.extrapolated;
        table.add_row({c, e.ratio, closed, e.extrapolated ? 1.0 : 0.0});
    }
    out.write("end_to_end.csv", table.to_string());
    results.set("end_to_end.max_relative_deviation", worst);
    results.set("end_to_end.extrapolated", std::string(any_extrapolated ? "yes" : "no"));
}

void echo_config(const RunConfig& cfg, io::Record& m) {
    m.set("config.preset", cfg.preset);
    m.set("config.modes", join(cfg.sites));
    m.set("config.deltas", join(cfg.deltas));
    m.set("config.coupling", std::string(to_string(cfg.coupling)));
    m.set("config.length_wavelengths", cfg.length_wavelengths);
    m.set("config.dipole", cfg.dipole);
    m.set("config.fit_window", io::format_double(cfg.window.lo) + "," + io::format_double(cfg.window.hi));
    m.set("config.cj_ff", cfg.circuit.qubit_capacitance / units::kFemto);
    m.set("config.cc_ff", cfg.circuit.coupling_capacitance / units::kFemto);
    m.set("config.z0_ohm", cfg.circuit.impedance);
    m.set("config.f0_ghz", cfg.circuit.omega0 / (2.0 * std::numbers::pi * units::kGiga));
    m.set("config.nbar", cfg.circuit.n_bar);
    m.set("config.c_max", cfg.c_max);
    m.set("config.c_points", std::to_string(cfg.c_points));
    m.set("config.height_scale", cfg.height_scale);
    m.set("config.law", std::string(cfg.law == LawSource::Paper ? "paper" : "self"));
    m.set("config.seed", std::to_string(cfg.seed));
    m.set("config.execution", std::string(cfg.execution == Execution::Serial ? "serial" : "parallel"));
}

}  // namespace

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Dispersion: return "dispersion";
        case Command::Spectral: return "spectral";
        case Command::SweepDelta: return "sweep-delta";
        case Command::Emission: return "emission";
        case Command::EndToEnd: return "end-to-end";
    }
    return "unknown";
}

double RunConfig::length() const { return 2.0 * std::numbers::pi * length_wavelengths; }

void RunConfig::validate() const {
    if (sites.empty()) throw ConfigError("--modes list is empty");
    if (deltas.empty()) throw ConfigError("--deltas list is empty");
    if (!(length_wavelengths > 0.0)) throw ConfigError("--length must be positive");
    if (!(window.lo > 0.0) || !(window.hi > window.lo)) throw ConfigError("--fit-window needs 0 < lo < hi");
    if (!(c_max > 0.0) || c_points == 0) throw ConfigError("--c-max and --c-points must be positive");
    if (height_scale < 0.0) throw ConfigError("--height-scale must be >= 0");
    circuit.validate();
    for (std::size_t m : sites) lattice_for(*this, m, 0.0);
    for (double d : deltas) {
        if (!(d >= 0.0)) throw ConfigError("Delta must be >= 0");
    }
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    CLI::App app{"diamag: diamagnetic renormalization of a qubit-waveguide spectral function"};
    app.set_version_flag("--version", DIAMAG_VERSION_STRING);
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file (flags override it)");

    auto* dispersion = app.add_subcommand("dispersion", "normal-mode frequencies per lattice size");
    auto* spectral = app.add_subcommand("spectral", "spectral functions J(nu) per Delta");
    auto* sweep = app.add_subcommand("sweep-delta", "alpha(Delta) table and decoupling-law fit");
    auto* emission = app.add_subcommand("emission", "emission-rate ratio versus relative capacitance");
    auto* end_to_end = app.add_subcommand("end-to-end", "first-principles vs closed-form emission ratio");
    for (auto* sub : {dispersion, spectral, sweep, emission, end_to_end}) sub->fallthrough();

    std::vector<std::size_t> modes;
    std::vector<double> deltas;
    double delta = 0.0;
    std::string coupling;
    double length = 0.0;
    std::vector<double> window;
    std::string preset;
    std::string law;
    std::string output;
    double dipole = 0.0, cj = 0.0, cc = 0.0, z0 = 0.0, f0 = 0.0, nbar = 0.0, c_max = 0.0, height = 0.0;
    std::size_t c_points = 0;
    std::uint64_t seed = 0;
    bool dump = false, serial = false;

    auto* o_modes = app.add_option("--modes", modes, "lattice sizes M, comma separated")->delimiter(',');
    auto* o_deltas = app.add_option("--deltas", deltas, "Delta values, comma separated")->delimiter(',');
    auto* o_delta = app.add_option("--delta", delta, "single Delta value");
    auto* o_coupling = app.add_option("--coupling", coupling, "cq (capacitive) or fq (inductive)")
                           ->check(CLI::IsMember({"cq", "fq"}));
    auto* o_length = app.add_option("--length", length, "waveguide length in qubit wavelengths");
    auto* o_window = app.add_option("--fit-window", window, "fit window lo,hi")->delimiter(',')->expected(2);
    auto* o_preset = app.add_option("--preset", preset, "fig2, fig3 or fig4b");
    auto* o_law = app.add_option("--law", law, "decoupling law: paper or self")->check(CLI::IsMember({"paper", "self"}));
    auto* o_output = app.add_option("--output", output, "output directory")->envname(kOutputEnvVar);
    auto* o_dipole = app.add_option("--dipole", dipole, "dimensionless dipole d");
    auto* o_cj = app.add_option("--cj-ff", cj, "qubit capacitance C_J [fF]");
    auto* o_cc = app.add_option("--cc-ff", cc, "coupling capacitance C_c [fF]");
    auto* o_z0 = app.add_option("--z0-ohm", z0, "line impedance [ohm]");
    auto* o_f0 = app.add_option("--f0-ghz", f0, "qubit frequency omega0/2pi [GHz]");
    auto* o_nbar = app.add_option("--nbar", nbar, "transmon number matrix element");
    auto* o_cmax = app.add_option("--c-max", c_max, "largest relative capacitance C_c/C_J");
    auto* o_cpoints = app.add_option("--c-points", c_points, "number of capacitance samples");
    auto* o_height = app.add_option("--height-scale", height, "z0 for the z = z0/c axis (0 disables)");
    auto* o_seed = app.add_option("--seed", seed, "seed for the noise-robustness self-check");
    auto* o_dump = app.add_flag("--dump-model", dump, "write the lattice matrices (dispersion)");
    auto* o_serial = app.add_flag("--serial", serial, "use the serial reference kernels");
    o_delta->excludes(o_deltas);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested(DIAMAG_VERSION_STRING);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    if (dispersion->parsed()) {
        cfg.command = Command::Dispersion;
        cfg.deltas = {0.0};
    } else if (spectral->parsed()) {
        cfg.command = Command::Spectral;
    } else if (sweep->parsed()) {
        cfg.command = Command::SweepDelta;
    } else if (emission->parsed()) {
        cfg.command = Command::Emission;
    } else {
        cfg.command = Command::EndToEnd;
        cfg.law = LawSource::Self;
        cfg.c_max = 4.0;
        cfg.c_points = 16;
    }

    if (o_preset->count()) apply_preset(cfg, preset);
    if (o_modes->count()) cfg.sites = modes;
    if (o_deltas->count()) cfg.deltas = deltas;
    if (o_delta->count()) cfg.deltas = {delta};
    if (o_coupling->count()) cfg.coupling = parse_coupling(coupling);
    if (o_length->count()) cfg.length_wavelengths = length;
    if (o_window->count()) cfg.window = {window.at(0), window.at(1)};
    if (o_law->count()) cfg.law = law == "self" ? LawSource::Self : LawSource::Paper;
    if (o_output->count()) cfg.output_dir = output;
    if (o_dipole->count()) cfg.dipole = dipole;
    if (o_cj->count()) cfg.circuit.qubit_capacitance = cj * units::kFemto;
    if (o_cc->count()) cfg.circuit.coupling_capacitance = cc * units::kFemto;
    if (o_z0->count()) cfg.circuit.impedance = z0;
    if (o_f0->count()) cfg.circuit.omega0 = 2.0 * std::numbers::pi * f0 * units::kGiga;
    if (o_nbar->count()) cfg.circuit.n_bar = nbar;
    if (o_cmax->count()) cfg.c_max = c_max;
    if (o_cpoints->count()) cfg.c_points = c_points;
    if (o_height->count()) cfg.height_scale = height;
    if (o_seed->count()) cfg.seed = seed;
    if (o_dump->count()) cfg.dump_model = dump;
    if (o_serial->count()) cfg.execution = serial ? Execution::Serial : Execution::Parallel;
    cfg.validate();
    return cfg;
}

RunResult run(const RunConfig& config) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());

    RunResult result;
    for (std::size_t m : config.sites) {
        if (auto w = cutoff_warning(lattice_for(config, m, 0.0))) result.warnings.push_back(*w);
    }

    OutputSet out(config.output_dir);
    io::Record results;
    switch (config.command) {
        case Command::Dispersion: run_dispersion(config, out, results); break;
        case Command::Spectral: run_spectral(config, out, results); break;
        case Command::SweepDelta: run_sweep(config, out, results); break;
        case Command::Emission: run_emission(config, out, results); break;
        case Command::EndToEnd: run_end_to_end(config, out, results); break;
    }

    io::Record manifest;
    manifest.set("command", std::string(to_string(config.command)));
    manifest.set("version", std::string(DIAMAG_VERSION_STRING));
    manifest.set("timestamp_utc", utc_timestamp());
    echo_config(config, manifest);
    for (const auto& [k, v] : results.items()) manifest.set("result." + k, v);
    out.describe(manifest);
    result.outputs = out.paths();
    result.manifest = config.output_dir / "manifest.txt";
    io::write_text(result.manifest, manifest.to_string());
    return result;
}

int run_main(int argc, const char* const* argv) {
    try {
        const RunConfig cfg = parse_command_line(argc, argv);
        const RunResult result = run(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& p : result.outputs) std::cout << p.string() << '\n';
        std::cout << result.manifest.string() << '\n';
        return 0;
    } catch (const HelpRequested& h) {
        std::cout << h.what() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "diamag: error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace diamag
