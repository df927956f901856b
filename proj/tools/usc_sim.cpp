// usc-sim: ground-state, spectra, stability, calibration and oracle runs.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "usc/usc.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw usc::config_error("cannot read config file " + path, "", 0);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ultrastrong-coupling simulator: Gaussian ground states, output spectra and checks"};
    app.set_version_flag("--version", std::string(USC_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::string grid;
    std::string units;
    bool no_timestamp = false;
    bool force = false;

    const std::pair<const char*, const char*> modes[] = {
        {"ground-state", "ground-state squeezing sweep over G (closed system)"},
        {"spectra", "output noise spectra at one coupling"},
        {"sweep", "output noise spectra for a list of couplings"},
        {"stability", "drift-matrix stability margin over G"},
        {"calibrate", "pump configuration to effective parameters, RWA and feasibility checks"},
        {"oracle", "Gaussian ground state against the truncated Fock-space solver"},
        {"validate-rwa", "full three-wave-mixing dynamics against the effective Hamiltonian"},
    };
    for (const auto& [name, help] : modes) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("-o,--output", output, "CSV output path (default: stdout)");
        sub->add_option("--grid", grid, "grid override MIN:MAX:N");
        sub->add_option("--units", units, "unit convention of the config file")
            ->check(CLI::IsMember({"angular", "cyclic"}));
        sub->add_flag("--no-timestamp", no_timestamp, "omit the timestamp line");
        sub->add_flag("--force", force, "run outside the rotating-wave regime");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version exit 0; every other parse failure is a usage error
        return app.exit(e) == 0 ? usc::exit_ok : usc::exit_usage;
    }

    try {
        const std::string mode_name = app.get_subcommands().front()->get_name();
        const std::string text = config_path.empty() ? std::string() : slurp(config_path);
        std::optional<usc::Units> unit_override;
        if (!units.empty()) unit_override = units == "cyclic" ? usc::Units::cyclic : usc::Units::angular;

        usc::RunConfig cfg = usc::parse_config(text, usc::parse_mode(mode_name), unit_override);
        if (!output.empty()) cfg.output = output;
        if (!grid.empty()) cfg.grid = usc::parse_grid_flag(grid);
        if (force) cfg.force = true;
        return usc::run(cfg, usc::RunOptions{!no_timestamp});
    } catch (const usc::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usc::exit_usage;
    }
}
