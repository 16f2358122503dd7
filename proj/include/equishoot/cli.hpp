#ifndef EQUISHOOT_CLI_HPP
#define EQUISHOOT_CLI_HPP

#include <string>
#include <vector>

#include "equishoot/params.hpp"
#include "equishoot/sde_sim.hpp"

namespace equishoot {

enum class Command { Validate, Solve, Equilibrium, Classify, Simulate, Prieto, Sweep };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::Validate;
    RawParams raw;
    bool allow_delta_zero = false;

    // tolerances
    double xi_tol = 1e-14;
    double ode_tol = 1e-10;
    double eps0 = 1e-8;
    double eps1 = 1e-6;

    double anchor = 0.5;
    SimConfig sim;

    std::size_t grid_n = 1001;        // equilibrium tabulation points
    std::size_t sweep_gamma_n = 20;
    std::size_t sweep_delta_n = 20;

    std::string out_dir = ".";
    std::string format = "csv";      // csv | json (tabulation format)

    // canonical key=value dump used for the provenance hash
    std::string canonical() const;
    std::string config_hash() const;
};

// Parses argv-style arguments (without the program name). A config file
// given via --config supplies defaults; command-line flags override it.
// Unknown flags or config keys raise ParseError. Returns the RunConfig;
// when --help was requested, help_text is filled and help_requested set.
struct ParseResult {
    RunConfig config;
    bool help_requested = false;
    std::string help_text;
};

ParseResult parse_config(const std::vector<std::string>& args);

// Executes the command, writing outputs under cfg.out_dir.
// Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
int run(const RunConfig& cfg);

} // namespace equishoot

#endif
