#include "equishoot/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "equishoot/io_util.hpp"

namespace equishoot {

using nlohmann::json;
namespace fs = std::filesystem;

const char* command_name(Command c) {
    switch (c) {
        case Command::Validate:    return "validate";
        case Command::Solve:       return "solve";
        case Command::Equilibrium: return "equilibrium";
        case Command::Classify:    return "classify";
        case Command::Simulate:    return "simulate";
        case Command::Prieto:      return "prieto";
        case Command::Sweep:       return "sweep";
    }
    return "?";
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "command=" << command_name(command) << '\n'
       << "gamma=" << fmt_full(raw.gamma) << '\n'
       << "sigma_d=" << fmt_full(raw.sigma_d) << '\n'
       << "mu_d=" << fmt_full(raw.mu_d) << '\n'
       << "beta1=" << fmt_full(raw.beta1) << '\n'
       << "beta2=" << fmt_full(raw.beta2) << '\n'
       << "d0=" << fmt_full(raw.d0) << '\n'
       << "theta2=" << fmt_full(raw.theta2) << '\n'
       << "allow_delta_zero=" << (allow_delta_zero ? 1 : 0) << '\n'
       << "xi_tol=" << fmt_full(xi_tol) << '\n'
       << "ode_tol=" << fmt_full(ode_tol) << '\n'
       << "eps0=" << fmt_full(eps0) << '\n'
       << "eps1=" << fmt_full(eps1) << '\n'
       << "anchor=" << fmt_full(anchor) << '\n'
       << "y0=" << fmt_full(sim.y0) << '\n'
       << "dt=" << fmt_full(sim.dt) << '\n'
       << "horizon=" << fmt_full(sim.horizon) << '\n'
       << "paths=" << sim.n_paths << '\n'
       << "seed=" << sim.seed << '\n'
       << "clamp_eps=" << fmt_full(sim.clamp_eps) << '\n'
       << "scheme=" << scheme_name(sim.scheme) << '\n'
       << "burn_in=" << fmt_full(sim.burn_in) << '\n'
       << "bins=" << sim.n_bins << '\n'
       << "init_from_density=" << (sim.init_from_density ? 1 : 0) << '\n'
       << "grid_n=" << grid_n << '\n'
       << "sweep_gamma_n=" << sweep_gamma_n << '\n'
       << "sweep_delta_n=" << sweep_delta_n << '\n'
       << "format=" << format << '\n';
    return os.str();
}

std::string RunConfig::config_hash() const { return hex64(fnv1a64(canonical())); }

namespace {

Scheme parse_scheme(const std::string& s) {
    if (s == "euler" || s == "euler_maruyama" || s == "euler-maruyama")
        return Scheme::EulerMaruyama;
    if (s == "logit" || s == "logit_transform" || s == "logit-transform")
        return Scheme::LogitTransform;
    throw ParseError("unknown scheme '" + s + "' (expected euler or logit)");
}

std::string normalize_key(std::string k) {
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

// The staging area the CLI and config file both write into. `have` records
// which keys the command line supplied so they override file values.
struct Staging {
    RunConfig cfg;
    std::string scheme_str = "euler";
    std::string config_file;
};

// key -> setter; shared by the flag layer and the config-file layer.
bool apply_kv(RunConfig& cfg, std::string key, const std::string& value) {
    key = normalize_key(key);
    auto as_d = [&]() {
        try {
            std::size_t pos = 0;
            double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ParseError("value for '" + key + "' is not a number: '" + value + "'");
        }
    };
    auto as_u = [&]() {
        try {
            return static_cast<std::uint64_t>(std::stoull(value));
        } catch (const std::exception&) {
            throw ParseError("value for '" + key + "' is not an integer: '" + value + "'");
        }
    };
    auto as_b = [&]() {
        if (value == "1" || value == "true" || value == "yes") return true;
        if (value == "0" || value == "false" || value == "no") return false;
        throw ParseError("value for '" + key + "' is not a boolean: '" + value + "'");
    };

    if (key == "gamma") cfg.raw.gamma = as_d();
    else if (key == "sigma_d") cfg.raw.sigma_d = as_d();
    else if (key == "mu_d") cfg.raw.mu_d = as_d();
    else if (key == "beta1") cfg.raw.beta1 = as_d();
    else if (key == "beta2") cfg.raw.beta2 = as_d();
    else if (key == "d0") cfg.raw.d0 = as_d();
    else if (key == "theta2") cfg.raw.theta2 = as_d();
    else if (key == "allow_delta_zero") cfg.allow_delta_zero = as_b();
    else if (key == "xi_tol") cfg.xi_tol = as_d();
    else if (key == "ode_tol") cfg.ode_tol = as_d();
    else if (key == "eps0") cfg.eps0 = as_d();
    else if (key == "eps1") cfg.eps1 = as_d();
    else if (key == "anchor") cfg.anchor = as_d();
    else if (key == "y0") cfg.sim.y0 = as_d();
    else if (key == "dt") cfg.sim.dt = as_d();
    else if (key == "horizon") cfg.sim.horizon = as_d();
    else if (key == "paths") cfg.sim.n_paths = static_cast<std::size_t>(as_u());
    else if (key == "seed") cfg.sim.seed = as_u();
    else if (key == "clamp_eps") cfg.sim.clamp_eps = as_d();
    else if (key == "scheme") cfg.sim.scheme = parse_scheme(value);
    else if (key == "burn_in") cfg.sim.burn_in = as_d();
    else if (key == "bins") cfg.sim.n_bins = static_cast<std::size_t>(as_u());
    else if (key == "init_from_density") cfg.sim.init_from_density = as_b();
    else if (key == "grid_n") cfg.grid_n = static_cast<std::size_t>(as_u());
    else if (key == "sweep_gamma_n") cfg.sweep_gamma_n = static_cast<std::size_t>(as_u());
    else if (key == "sweep_delta_n") cfg.sweep_delta_n = static_cast<std::size_t>(as_u());
    else if (key == "out") cfg.out_dir = value;
    else if (key == "format") cfg.format = value;
    else return false;
    return true;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config line " + std::to_string(lineno)
                                 + ": malformed section header");
            continue;  // sections are organizational; keys are globally unique
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno)
                             + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (!apply_kv(cfg, key, value))
            throw ParseError("config line " + std::to_string(lineno)
                             + ": unknown key '" + key + "'");
    }
}

} // namespace

ParseResult parse_config(const std::vector<std::string>& args) {
    CLI::App app{"equishoot: equilibrium construction and survival analysis for the"
                 " two-trader limited-participation model"};
    app.require_subcommand(1);

    Staging st;
    // option holders (defaults mirror RunConfig)
    RunConfig& c = st.cfg;

    auto* o_gamma  = app.add_option("--gamma", c.raw.gamma, "relative risk aversion in (0,1)");
    auto* o_sigma  = app.add_option("--sigma-d", c.raw.sigma_d, "dividend volatility");
    auto* o_mu     = app.add_option("--mu-d", c.raw.mu_d, "dividend drift");
    auto* o_b1     = app.add_option("--beta1", c.raw.beta1, "trader 1 time preference");
    auto* o_b2     = app.add_option("--beta2", c.raw.beta2, "trader 2 time preference");
    auto* o_d0     = app.add_option("--d0", c.raw.d0, "initial dividend level");
    auto* o_th     = app.add_option("--theta2", c.raw.theta2, "trader 2 initial money-market shares");
    auto* o_adz    = app.add_flag("--allow-delta-zero", c.allow_delta_zero,
                                  "admit beta1 == beta2 (equal-preference regression case)");
    auto* o_xit    = app.add_option("--xi-tol", c.xi_tol, "relative bisection tolerance on xi");
    auto* o_odet   = app.add_option("--ode-tol", c.ode_tol, "relative ODE tolerance");
    auto* o_eps0   = app.add_option("--eps0", c.eps0, "launch offset at y = 0");
    auto* o_eps1   = app.add_option("--eps1", c.eps1, "integration cutoff 1 - y_end");
    auto* o_anchor = app.add_option("--anchor", c.anchor, "scale-function anchor in (0,1)");
    auto* o_paths  = app.add_option("--paths", c.sim.n_paths, "number of simulated paths");
    auto* o_dt     = app.add_option("--dt", c.sim.dt, "Euler step");
    auto* o_hor    = app.add_option("--horizon", c.sim.horizon, "simulation horizon");
    auto* o_seed   = app.add_option("--seed", c.sim.seed, "RNG seed");
    auto* o_y0     = app.add_option("--y0", c.sim.y0, "initial consumption share");
    auto* o_scheme = app.add_option("--scheme", st.scheme_str, "euler | logit");
    auto* o_clamp  = app.add_option("--clamp-eps", c.sim.clamp_eps, "boundary clamp distance");
    auto* o_burn   = app.add_option("--burn-in", c.sim.burn_in, "burn-in fraction of horizon");
    auto* o_bins   = app.add_option("--bins", c.sim.n_bins, "occupation histogram bins");
    auto* o_ifd    = app.add_flag("--init-from-density", c.sim.init_from_density,
                                  "draw path starts from the stationary density");
    auto* o_gridn  = app.add_option("--grid-n", c.grid_n, "equilibrium tabulation points");
    auto* o_sgn    = app.add_option("--sweep-gamma-n", c.sweep_gamma_n, "sweep grid size in gamma");
    auto* o_sdn    = app.add_option("--sweep-delta-n", c.sweep_delta_n, "sweep grid size in delta");
    auto* o_out    = app.add_option("--out", c.out_dir, "output directory");
    auto* o_fmt    = app.add_option("--format", c.format, "csv | json tabulation format");
    auto* o_cfg    = app.add_option("--config", st.config_file, "key = value config file");

    std::map<std::string, Command> cmd_map = {
        {"validate", Command::Validate},   {"solve", Command::Solve},
        {"equilibrium", Command::Equilibrium}, {"classify", Command::Classify},
        {"simulate", Command::Simulate},   {"prieto", Command::Prieto},
        {"sweep", Command::Sweep}};
    for (const auto& [name, cmd] : cmd_map) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " pipeline");
        sub->fallthrough();
    }

    ParseResult result;
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        result.help_requested = true;
        result.help_text = app.help();
        return result;
    } catch (const CLI::ParseError& e) {
        throw ParseError(e.what());
    }

    for (const auto& [name, cmd] : cmd_map)
        if (app.got_subcommand(name)) st.cfg.command = cmd;

    // config-file values fill in everything the command line did not set
    if (!st.config_file.empty()) {
        RunConfig file_cfg = RunConfig{};  // defaults
        file_cfg.command = st.cfg.command;
        apply_config_file(file_cfg, st.config_file);
        RunConfig merged = file_cfg;
        auto take = [&](const CLI::Option* o, auto member) {
            if (o->count() > 0) merged.*member = st.cfg.*member;
        };
        take(o_adz, &RunConfig::allow_delta_zero);
        take(o_xit, &RunConfig::xi_tol);
        take(o_odet, &RunConfig::ode_tol);
        take(o_eps0, &RunConfig::eps0);
        take(o_eps1, &RunConfig::eps1);
        take(o_anchor, &RunConfig::anchor);
        take(o_gridn, &RunConfig::grid_n);
        take(o_sgn, &RunConfig::sweep_gamma_n);
        take(o_sdn, &RunConfig::sweep_delta_n);
        take(o_out, &RunConfig::out_dir);
        take(o_fmt, &RunConfig::format);
        if (o_gamma->count()) merged.raw.gamma = st.cfg.raw.gamma;
        if (o_sigma->count()) merged.raw.sigma_d = st.cfg.raw.sigma_d;
        if (o_mu->count()) merged.raw.mu_d = st.cfg.raw.mu_d;
        if (o_b1->count()) merged.raw.beta1 = st.cfg.raw.beta1;
        if (o_b2->count()) merged.raw.beta2 = st.cfg.raw.beta2;
        if (o_d0->count()) merged.raw.d0 = st.cfg.raw.d0;
        if (o_th->count()) merged.raw.theta2 = st.cfg.raw.theta2;
        if (o_paths->count()) merged.sim.n_paths = st.cfg.sim.n_paths;
        if (o_dt->count()) merged.sim.dt = st.cfg.sim.dt;
        if (o_hor->count()) merged.sim.horizon = st.cfg.sim.horizon;
        if (o_seed->count()) merged.sim.seed = st.cfg.sim.seed;
        if (o_y0->count()) merged.sim.y0 = st.cfg.sim.y0;
        if (o_clamp->count()) merged.sim.clamp_eps = st.cfg.sim.clamp_eps;
        if (o_burn->count()) merged.sim.burn_in = st.cfg.sim.burn_in;
        if (o_bins->count()) merged.sim.n_bins = st.cfg.sim.n_bins;
        if (o_ifd->count()) merged.sim.init_from_density = st.cfg.sim.init_from_density;
        if (o_scheme->count()) merged.sim.scheme = parse_scheme(st.scheme_str);
        st.cfg = merged;
    } else {
        if (o_scheme->count()) st.cfg.sim.scheme = parse_scheme(st.scheme_str);
        (void)o_cfg;
    }

    result.config = st.cfg;
    return result;
}

namespace {

std::string csv_hash_line(const RunConfig& cfg) {
    return "# config_hash=" + cfg.config_hash() + "\n";
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
    fs::create_directories(cfg.out_dir);
    write_text_file((fs::path(cfg.out_dir) / name).string(), content);
}

json params_json(const RunConfig& cfg, const ModelParams& p) {
    json j;
    j["gamma"] = p.gamma;
    j["sigma_d"] = p.sigma_d;
    j["mu_d"] = p.mu_d;
    j["beta1"] = p.beta1;
    j["beta2"] = p.beta2;
    j["d0"] = p.d0;
    j["theta2"] = p.theta2;
    j["delta"] = p.delta;
    j["a_cap"] = p.a_cap;
    j["a_cap_floor"] = p.a_cap_floor();
    j["regime"] = regime_name(survival_regime(p));
    j["config_hash"] = cfg.config_hash();
    return j;
}

json certificate_json(const RunConfig& cfg, const CriticalSolution& cs,
                      const CertificateReport& cert) {
    json j;
    j["xi0"] = cert.xi0;
    j["h_end"] = cert.h_end;
    j["slope_end"] = cert.slope_end;
    j["slope_closed_form"] = cert.slope_closed_form;
    j["identity_lhs"] = cert.identity_lhs;
    j["identity_rhs"] = cert.identity_rhs;
    j["h_min"] = cert.h_min;
    j["h_max"] = cert.h_max;
    j["bracket_width"] = cs.bracket_width;
    j["alpha"] = cs.alpha;
    j["residuals"] = {
        {"h_end", cert.res_h_end},
        {"slope_rel", cert.res_slope_rel},
        {"identity_rel", cert.res_identity_rel},
        {"h_min", cert.res_h_min},
        {"h_max", cert.res_h_max},
        {"ode_max", cert.res_ode_max},
    };
    j["passed"] = cert.passed;
    j["config_hash"] = cfg.config_hash();
    return j;
}

std::string curve_csv(const RunConfig& cfg, const SolutionCurve& c) {
    return to_csv(c) + csv_hash_line(cfg);
}

json survival_json(const RunConfig& cfg, const SurvivalReport& r) {
    json j;
    j["anchor"] = r.anchor;
    j["exp0"] = r.exp0;
    j["exp1"] = r.exp1;
    j["speed_exp0"] = r.speed_exp0;
    j["speed_exp1"] = r.speed_exp1;
    j["s0_diverges"] = r.s0_diverges;
    j["s1_diverges"] = r.s1_diverges;
    j["s0_inconclusive"] = r.s0_inconclusive;
    j["s1_inconclusive"] = r.s1_inconclusive;
    j["mass_inconclusive"] = r.mass_inconclusive;
    j["speed_mass_finite"] = r.speed_mass_finite;
    j["speed_mass"] = r.speed_mass_finite ? json(r.speed_mass) : json();
    j["classification"] = survival_class_name(r.classification);
    j["provenance"] = provenance_name(r.provenance);
    j["config_hash"] = cfg.config_hash();
    return j;
}

struct Solved {
    ModelParams p;
    CriticalSolution cs;
    CertificateReport cert;
    EquilibriumFunctions eq;
};

Solved solve_pipeline(const RunConfig& cfg) {
    ModelParams p = derive_params(cfg.raw, cfg.allow_delta_zero);
    ShootOptions so;
    so.eps0 = cfg.eps0;
    so.eps1 = cfg.eps1;
    CriticalSolution cs = find_xi0(p, cfg.xi_tol, cfg.ode_tol, so);
    CertificateReport cert = certify(cs, p);
    EquilibriumFunctions eq(p, cs);
    return Solved{p, std::move(cs), cert, std::move(eq)};
}

int run_impl(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Validate: {
            ModelParams p = derive_params(cfg.raw, cfg.allow_delta_zero);
            const json j = params_json(cfg, p);
            std::cout << j.dump(2) << '\n';
            emit(cfg, "params.json", j.dump(2) + "\n");
            return 0;
        }
        case Command::Solve: {
            Solved s = solve_pipeline(cfg);
            emit(cfg, "solution.csv", curve_csv(cfg, s.cs.curve));
            emit(cfg, "certificate.json",
                 certificate_json(cfg, s.cs, s.cert).dump(2) + "\n");
            std::cout << "xi0 = " << fmt_full(s.cs.xi0)
                      << "  slope_end = " << fmt_full(s.cs.slope_end)
                      << "  (closed form " << fmt_full(s.cert.slope_closed_form) << ")\n"
                      << "certificate " << (s.cert.passed ? "passed" : "FAILED")
                      << "; files in " << cfg.out_dir << '\n';
            return s.cert.passed ? 0 : 2;
        }
        case Command::Equilibrium: {
            Solved s = solve_pipeline(cfg);
            const auto rows = tabulate(s.eq, cfg.grid_n, cfg.eps1);
            if (cfg.format == "json") {
                json arr = json::array();
                for (const auto& r : rows)
                    arr.push_back({{"y", r.y}, {"h", r.h}, {"r", r.r}, {"kappa", r.kappa},
                                   {"mu_y", r.mu_y}, {"sigma_y", r.sigma_y}, {"g", r.g}});
                json j = {{"rows", arr}, {"config_hash", cfg.config_hash()}};
                emit(cfg, "equilibrium.json", j.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "y,h,r,kappa,mu_y,sigma_y,g\n";
                for (const auto& r : rows)
                    os << fmt_full(r.y) << ',' << fmt_full(r.h) << ',' << fmt_full(r.r)
                       << ',' << fmt_full(r.kappa) << ',' << fmt_full(r.mu_y) << ','
                       << fmt_full(r.sigma_y) << ',' << fmt_full(r.g) << '\n';
                os << csv_hash_line(cfg);
                emit(cfg, "equilibrium.csv", os.str());
            }
            emit(cfg, "certificate.json",
                 certificate_json(cfg, s.cs, s.cert).dump(2) + "\n");
            std::cout << "tabulated " << rows.size() << " rows; files in "
                      << cfg.out_dir << '\n';
            return 0;
        }
        case Command::Classify: {
            Solved s = solve_pipeline(cfg);
            const SurvivalReport rep = classify(s.p, s.eq, cfg.anchor);
            const json j = survival_json(cfg, rep);
            emit(cfg, "survival.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        case Command::Simulate: {
            Solved s = solve_pipeline(cfg);
            SimConfig sim_cfg = cfg.sim;
            sim_cfg.anchor = cfg.anchor;
            const OccupationStats stats = simulate(s.eq, sim_cfg);

            std::vector<double> masses(stats.occupation.size(),
                                       std::numeric_limits<double>::quiet_NaN());
            bool normalizable = true;
            try {
                StationaryDistribution stat(s.eq, cfg.anchor);
                masses = stat.bin_masses(stats.bin_edges);
            } catch (const NumericalError&) {
                normalizable = false;
            }

            std::ostringstream occ;
            occ << "bin_left,bin_right,occupation,stationary_mass\n";
            for (std::size_t i = 0; i < stats.occupation.size(); ++i)
                occ << fmt_full(stats.bin_edges[i]) << ','
                    << fmt_full(stats.bin_edges[i + 1]) << ','
                    << fmt_full(stats.occupation[i]) << ','
                    << fmt_full(masses[i]) << '\n';
            occ << csv_hash_line(cfg);
            emit(cfg, "occupation.csv", occ.str());

            std::ostringstream term;
            term << "path,terminal_y\n";
            for (std::size_t i = 0; i < stats.terminal_values.size(); ++i)
                term << i << ',' << fmt_full(stats.terminal_values[i]) << '\n';
            term << csv_hash_line(cfg);
            emit(cfg, "terminal.csv", term.str());

            const json cert_j = certificate_json(cfg, s.cs, s.cert);
            json meta;
            meta["sim"] = {
                {"y0", sim_cfg.y0}, {"dt", sim_cfg.dt}, {"horizon", sim_cfg.horizon},
                {"paths", sim_cfg.n_paths}, {"seed", sim_cfg.seed},
                {"clamp_eps", sim_cfg.clamp_eps}, {"scheme", scheme_name(sim_cfg.scheme)},
                {"burn_in", sim_cfg.burn_in}, {"bins", sim_cfg.n_bins},
                {"init_from_density", sim_cfg.init_from_density}, {"anchor", sim_cfg.anchor}};
            meta["certificate_hash"] = hex64(fnv1a64(cert_j.dump()));
            meta["clamp_events"] = stats.clamp_events;
            meta["clamp_rate"] = stats.clamp_rate;
            meta["clamp_red_flag"] = stats.clamp_red_flag;
            meta["aborted_paths"] = stats.aborted_paths;
            meta["stationary_normalizable"] = normalizable;
            if (normalizable)
                meta["ergodic_tv"] = ergodic_distance(stats, masses);
            meta["config_hash"] = cfg.config_hash();
            emit(cfg, "metadata.json", meta.dump(2) + "\n");

            std::cout << "simulated " << cfg.sim.n_paths << " paths; clamp_rate = "
                      << stats.clamp_rate
                      << (stats.clamp_red_flag ? " (red flag)" : "") << '\n';
            if (normalizable)
                std::cout << "occupation vs stationary density TV = "
                          << ergodic_distance(stats, masses) << '\n';
            return 0;
        }
        case Command::Prieto: {
            const PrietoReport rep = prieto_classify(cfg.raw.gamma, cfg.raw.mu_d,
                                                     cfg.raw.sigma_d);
            json j;
            j["eta"] = rep.eta;
            j["classification"] = prieto_class_name(rep.classification);
            j["limit_at0"] = rep.limit_at0;
            j["limit_at1"] = rep.limit_at1;
            j["config_hash"] = cfg.config_hash();
            emit(cfg, "prieto.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        case Command::Sweep: {
            std::ostringstream os;
            os << "delta,gamma,exp0,exp1,s0_div,s1_div,speed_mass,classification,provenance\n";
            const std::size_t ng = cfg.sweep_gamma_n, nd = cfg.sweep_delta_n;
            for (std::size_t i = 0; i < ng; ++i) {
                const double gamma = 0.15 + 0.7 * (ng > 1 ? double(i) / double(ng - 1) : 0.5);
                for (std::size_t jx = 0; jx < nd; ++jx) {
                    const double frac = (double(jx) + 0.5) / double(nd);
                    const double delta = -gamma * frac;  // spans (-gamma, 0)
                    RawParams raw = cfg.raw;
                    raw.gamma = gamma;
                    raw.beta1 = raw.beta2 - 0.5 * delta * raw.sigma_d * raw.sigma_d;
                    ModelParams p;
                    try {
                        p = derive_params(raw);
                    } catch (const ValidationError&) {
                        continue;  // outside the admissible region
                    }
                    std::string cls = "error", prov = "error";
                    double e0 = std::nan(""), e1 = std::nan(""), sm = std::nan("");
                    bool s0 = false, s1 = false;
                    try {
                        ShootOptions so;
                        so.eps0 = cfg.eps0;
                        so.eps1 = cfg.eps1;
                        CriticalSolution cs = find_xi0(p, cfg.xi_tol, cfg.ode_tol, so);
                        EquilibriumFunctions eq(p, cs);
                        const SurvivalReport rep = classify(p, eq, cfg.anchor);
                        cls = survival_class_name(rep.classification);
                        prov = provenance_name(rep.provenance);
                        e0 = rep.exp0;
                        e1 = rep.exp1;
                        sm = rep.speed_mass;
                        s0 = rep.s0_diverges;
                        s1 = rep.s1_diverges;
                    } catch (const Error&) {
                        // leave the error markers in place
                    }
                    os << fmt_full(p.delta) << ',' << fmt_full(gamma) << ','
                       << fmt_full(e0) << ',' << fmt_full(e1) << ','
                       << (s0 ? 1 : 0) << ',' << (s1 ? 1 : 0) << ','
                       << fmt_full(sm) << ',' << cls << ',' << prov << '\n';
                }
            }
            os << csv_hash_line(cfg);
            emit(cfg, "sweep.csv", os.str());
            std::cout << "sweep written to " << cfg.out_dir << "/sweep.csv\n";
            return 0;
        }
    }
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    auto emit_error = [&](const std::string& kind, const std::string& msg) {
        json j;
        j["error"] = kind;
        j["message"] = msg;
        j["config_hash"] = cfg.config_hash();
        try {
            emit(cfg, "error.json", j.dump(2) + "\n");
        } catch (...) {
            // best effort only
        }
        std::cerr << kind << ": " << msg << '\n';
    };

    try {
        return run_impl(cfg);
    } catch (const ValidationError& e) {
        emit_error(ValidationError::name(e.code), e.what());
        return 1;
    } catch (const ConfigError& e) {
        emit_error("ConfigError", e.what());
        return 1;
    } catch (const NumericalError& e) {
        emit_error(NumericalError::name(e.kind), e.what());
        return 2;
    } catch (const DomainError& e) {
        emit_error("DomainError", e.what());
        return 2;
    } catch (const IoError& e) {
        emit_error("IoError", e.what());
        return 3;
    } catch (const fs::filesystem_error& e) {
        emit_error("IoError", e.what());
        return 3;
    }
}

} // namespace equishoot
