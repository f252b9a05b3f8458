// Acceptance suite: one pass/fail line per criterion.
//
//   diamag_acceptance [--criterion N] [--cli path/to/diamag]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "diamag/circuit.hpp"
#include "diamag/io.hpp"
#include "diamag/normal_modes.hpp"
#include "diamag/runner.hpp"
#include "diamag/sweep.hpp"

using namespace diamag;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kDeltas{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
const std::vector<std::size_t> kSites{40, 80, 160, 320};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SweepCache {
    std::map<int, std::pair<AlphaSweep, double>> by_coupling;

    const std::pair<AlphaSweep, double>& get(CouplingKind kind) {
        const int key = static_cast<int>(kind);
        if (auto it = by_coupling.find(key); it != by_coupling.end()) return it->second;
        SweepOptions o;
        o.deltas = kDeltas;
        o.sites = kSites;
        o.coupling = kind;
        const auto t0 = std::chrono::steady_clock::now();
        AlphaSweep s = sweep_delta(o);
        return by_coupling.emplace(key, std::pair{std::move(s), seconds_since(t0)}).first->second;
    }
} cache;

Outcome ohmic_baseline() {
    SweepOptions o;
    o.deltas = {0.0};
    o.sites = kSites;
    const auto t0 = std::chrono::steady_clock::now();
    const AlphaSweep s = sweep_delta(o);
    const double elapsed = seconds_since(t0);
    const double value = kTwoPi * s.extrapolated.front().alpha;
    return {std::abs(value - 1.0) <= 0.02 && elapsed < 30.0,
            "2*pi*alpha(0) = " + fmt(value) + " (target 1.00 +- 0.02), " + fmt(elapsed, 3) + " s (< 30 s)"};
}

Outcome dispersion_convergence() {
    std::vector<std::pair<double, double>> lowest;
    std::vector<double> errors;
    const double length = kDefaultLength;
    for (std::size_t m : kSites) {
        LatticeConfig c;
        c.sites = m;
        const ModeSet modes = normal_modes(build_chain(c));
        lowest.emplace_back(c.spacing(), modes.frequencies(0));
        // first five distinct frequencies (each doubly degenerate) against 2 pi n / L
        double worst = 0.0;
        for (int n = 1; n <= 5; ++n) {
            const double nu = modes.frequencies(2 * n - 1);
            worst = std::max(worst, std::abs(nu - kTwoPi * n / length) / (kTwoPi * n / length));
        }
        errors.push_back(worst);
    }
    bool converging = true;
    std::string trail;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        trail += (i ? ", " : "") + fmt(errors[i], 3);
        // halving dx must at least halve the error (first order or better)
        if (i > 0 && !(errors[i] <= 0.5 * errors[i - 1] + 1e-15)) converging = false;
    }
    const double extrapolated = extrapolate_continuum(lowest);
    const double expected = kTwoPi / length;
    const double rel = std::abs(extrapolated / expected - 1.0);
    return {converging && rel <= 0.005,
            "relative errors of nu_1..5 for M=40..320: " + trail + "; extrapolated lowest nu = " +
                fmt(extrapolated, 8) + " vs 2pi/L = " + fmt(expected, 8) + " (rel " + fmt(rel, 3) + " <= 0.5%)"};
}

Outcome ohmicity() {
    bool pass = true;
    std::string detail;
    for (auto kind : {CouplingKind::Capacitive, CouplingKind::Inductive}) {
        const AlphaSweep& s = cache.get(kind).first;
        double lo = 1e9, hi = -1e9;
        for (const auto& e : s.extrapolated) {
            lo = std::min(lo, e.exponent);
            hi = std::max(hi, e.exponent);
        }
        pass = pass && lo >= 0.9 && hi <= 1.1;
        detail += std::string(to_string(kind)) + ": s in [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "]; ";
    }
    return {pass, detail + "continuum-extrapolated free exponents, target [0.9, 1.1]"};
}

Outcome decoupling_law() {
    const auto& [s, elapsed] = cache.get(CouplingKind::Capacitive);
    std::string detail;
    bool pass = elapsed < 300.0;
    if (s.law) {
        const double ra = s.law->a / 6.77 - 1.0;
        const double rb = s.law->b / 2.57 - 1.0;
        pass = pass && std::abs(ra) <= 0.15 && std::abs(rb) <= 0.15;
        detail = "a = " + fmt(s.law->a) + " (" + fmt(100 * ra, 3) + "%), b = " + fmt(s.law->b) + " (" +
                 fmt(100 * rb, 3) + "%), target 6.77 / 2.57 +- 15%";
    } else {
        pass = false;
        detail = "law fit failed: " + s.law_error;
    }
    detail += "; extrapolated 2*pi*alpha:";
    for (const auto& e : s.extrapolated) detail += " " + fmt(e.delta, 3) + ":" + fmt(kTwoPi * e.alpha, 4);
    if (!s.excluded_deltas.empty()) detail += "; nonpositive extrapolations excluded from the fit";
    if (s.finest_law) {
        detail += "; M=320 law a = " + fmt(s.finest_law->a, 4) + ", b = " + fmt(s.finest_law->b, 4);
    }
    detail += "; sweep " + fmt(elapsed, 3) + " s";
    return {pass, detail};
}

Outcome inductive_decoupling() {
    const AlphaSweep& s = cache.get(CouplingKind::Inductive).first;
    bool decreasing = true;
    std::string detail = "extrapolated 2*pi*alpha:";
    for (std::size_t i = 0; i < s.extrapolated.size(); ++i) {
        detail += " " + fmt(s.extrapolated[i].delta, 3) + ":" + fmt(kTwoPi * s.extrapolated[i].alpha, 4);
        if (i > 0 && !(s.extrapolated[i].alpha < s.extrapolated[i - 1].alpha)) decreasing = false;
    }
    // finite-resolution values, for the record
    bool finest_decreasing = true;
    for (std::size_t i = 1; i < kDeltas.size(); ++i) {
        const auto& prev = s.entries[(i - 1) * kSites.size() + kSites.size() - 1];
        const auto& cur = s.entries[i * kSites.size() + kSites.size() - 1];
        finest_decreasing = finest_decreasing && cur.alpha < prev.alpha;
    }
    detail += std::string("; at M=320 alpha is ") + (finest_decreasing ? "" : "not ") + "strictly decreasing";
    return {decreasing, detail};
}

Outcome emission_nonmonotonic() {
    const CircuitParams circuit = fig4_circuit();
    const auto grid = relative_capacitance_grid(10.0, 1000);
    const EmissionCurve curve = emission_curve(circuit, grid);
    bool bare_increasing = true;
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        bare_increasing = bare_increasing && curve.ratio_without_a2[i] > curve.ratio_without_a2[i - 1];
        if (curve.ratio_with_a2[i] > curve.ratio_with_a2[argmax]) argmax = i;
    }
    const bool interior = argmax > 0 && argmax + 1 < grid.size();
    const double at_one = std::abs(emission_ratio(1.0, curve.kappa, kPaperLaw.b) - emission_ratio_no_a2(1.0));
    const auto peak = emission_peak(curve.kappa, kPaperLaw.b);
    return {interior && bare_increasing && at_one <= 1e-14 && peak.has_value(),
            "kappa = " + fmt(curve.kappa, 4) + ", with-A2 maximum at c* = " + (peak ? fmt(*peak, 6) : "none") +
                ", without-A2 " + (bare_increasing ? "strictly increasing" : "NOT increasing") +
                ", |difference at c=1| = " + fmt(at_one, 3)};
}

Outcome internal_consistency() {
    const AlphaSweep& s = cache.get(CouplingKind::Capacitive).first;
    if (!s.law) return {false, "own law unavailable: " + s.law_error};
    const DecouplingLaw& law = *s.law;
    const CircuitParams base = fig4_circuit();
    const double kappa = map_circuit(base, law.a).kappa;
    double worst = 0.0;
    for (int i = 0; i <= 150; ++i) {
        const double c = 0.25 * std::pow(16.0, i / 150.0);
        const double first = end_to_end_ratio(base.with_relative_capacitance(c), base, law).ratio;
        worst = std::max(worst, std::abs(first / emission_ratio(c, kappa, law.b) - 1.0));
    }
    return {worst <= 0.05, "own law (a = " + fmt(law.a, 4) + ", b = " + fmt(law.b, 4) +
                               "), max relative deviation on c in [0.25, 4] = " + fmt(worst, 3) + " (<= 5%)"};
}

Outcome property_suites() {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> half(2, 16);
    std::uniform_real_distribution<double> length(std::numbers::pi, 40.0 * std::numbers::pi);
    std::uniform_real_distribution<double> delta(0.0, 5.0);
    std::bernoulli_distribution inductive(0.5);
    constexpr int kConfigs = 25;
    double sympl = 0.0, trip = 0.0, sum = 0.0;
    bool monotone = true, stable = true;
    for (int i = 0; i < kConfigs; ++i) {
        LatticeConfig c;
        c.sites = static_cast<std::size_t>(2 * half(rng));
        c.length = length(rng);
        c.delta = delta(rng);
        c.coupling = inductive(rng) ? CouplingKind::Inductive : CouplingKind::Capacitive;
        const QuadraticModel model = build_chain(c);
        ModeSet modes;
        try {
            modes = normal_modes(model);
        } catch (const std::exception&) {
            stable = false;
            continue;
        }
        stable = stable && modes.frequencies.minCoeff() > 0.0;
        sympl = std::max(sympl, symplectic_residual(modes));
        const QuadraticModel rebuilt = reconstruct_hamiltonian(modes);
        trip = std::max({trip, (rebuilt.charge_matrix - model.charge_matrix).norm() / model.charge_matrix.norm(),
                         (rebuilt.flux_matrix - model.flux_matrix).norm() / model.flux_matrix.norm()});
        sum = std::max(sum, std::abs(modes.frequencies.squaredNorm() / quadratic_trace(model) - 1.0));
        LatticeConfig bare_cfg = c;
        bare_cfg.delta = 0.0;
        const ModeSet bare = normal_modes(build_chain(bare_cfg));
        for (Eigen::Index n = 0; n < modes.size(); ++n) {
            monotone = monotone && modes.frequencies(n) >= bare.frequencies(n) * (1.0 - 1e-12);
        }
    }
    const bool pass = sympl <= 1e-10 && trip <= 1e-8 && sum <= 1e-10 && monotone && stable;
    return {pass, std::to_string(kConfigs) + " random configs (M <= 32): symplectic " + fmt(sympl, 3) +
                      " (<= 1e-10), round trip " + fmt(trip, 3) + " (<= 1e-8), spectral sum " + fmt(sum, 3) +
                      " (<= 1e-10), monotone in Delta: " + (monotone ? "yes" : "no") +
                      ", stable: " + (stable ? "yes" : "no")};
}

std::optional<std::string> cli_path;

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "diamag_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::string> files{"alpha.csv", "ohmicity.csv", "law_fit.txt"};
    for (const char* run_name : {"a", "b"}) {
        const fs::path out = root / run_name;
        if (cli_path) {
            const std::string cmd = "\"" + *cli_path + "\" sweep-delta --deltas 0,0.1,0.5,1,2 --modes 40,80,160,320 --output \"" +
                                    out.string() + "\" > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
        } else {
            RunConfig cfg;
            cfg.command = Command::SweepDelta;
            cfg.deltas = {0.0, 0.1, 0.5, 1.0, 2.0};
            cfg.output_dir = out;
            run(cfg);
        }
    }
    bool same = true;
    for (const auto& f : files) same = same && io::read_text(root / "a" / f) == io::read_text(root / "b" / f);
    return {same, std::string("two sweep-delta runs ") + (cli_path ? "through the CLI" : "in process") +
                      (same ? ": alpha.csv, ohmicity.csv, law_fit.txt byte-identical" : ": outputs differ")};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (arg == "--cli" && i + 1 < argc) {
            cli_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N] [--cli path]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Ohmic baseline at Delta=0", ohmic_baseline},
        {"dispersion convergence", dispersion_convergence},
        {"Ohmicity under Delta", ohmicity},
        {"capacitive decoupling law", decoupling_law},
        {"inductive decoupling", inductive_decoupling},
        {"emission non-monotonicity", emission_nonmonotonic},
        {"end-to-end consistency", internal_consistency},
        {"property suites", property_suites},
        {"determinism", determinism},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%s] AC%zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
