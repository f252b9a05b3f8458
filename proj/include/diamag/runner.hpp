// runner.hpp — experiment orchestration behind the diamag command line

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "diamag/circuit.hpp"
#include "diamag/lattice.hpp"
#include "diamag/spectral.hpp"
#include "diamag/sweep.hpp"

namespace diamag {

enum class Command { Dispersion, Spectral, SweepDelta, Emission, EndToEnd };
enum class LawSource { Paper, Self };

std::string_view to_string(Command command);

inline constexpr const char* kOutputEnvVar = "DIAMAG_OUTPUT_DIR";

struct RunConfig {
    Command command{Command::SweepDelta};
    std::string preset;  // empty, fig2, fig3 or fig4b
    std::vector<std::size_t> sites{40, 80, 160, 320};
    std::vector<double> deltas{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
    CouplingKind coupling{CouplingKind::Capacitive};
    double length_wavelengths{10.0};
    double dipole{1.0};
    FitWindow window{};
    CircuitParams circuit = fig4_circuit();
    double c_max{10.0};
    std::size_t c_points{400};
    double height_scale{0.0};  // z0 > 0 adds a z = z0 / c column set
    LawSource law{LawSource::Paper};
    std::filesystem::path output_dir{"."};
    std::uint64_t seed{20150101};
    bool dump_model{false};
    Execution execution{Execution::Parallel};

    double length() const;  // dimensionless, 2 pi * length_wavelengths

    void validate() const;
};

/// Parse argv (subcommand first, flags anywhere after). A `--config` file of
/// flat key=value lines is read first; explicit flags override it; preset
/// values sit underneath both. Throws ConfigError / CLI::ParseError.
RunConfig parse_command_line(int argc, const char* const* argv);

struct RunResult {
    std::vector<std::filesystem::path> outputs;  // excluding the manifest
    std::filesystem::path manifest;
    std::vector<std::string> warnings;
};

/// Execute the pipeline for config.command and write CSV outputs plus
/// manifest.txt into config.output_dir. Throws on any module error.
RunResult run(const RunConfig& config);

/// argv front end: parse, run, report. Returns the process exit status and
/// prints a one-line diagnostic to stderr on failure.
int run_main(int argc, const char* const* argv);

}  // namespace diamag
