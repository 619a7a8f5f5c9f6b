// Command-line surface: design solving, Monte Carlo campaigns, figure-data CSV.

#include "wet/analytic.hpp"
#include "wet/designer.hpp"
#include "wet/orderstats.hpp"
#include "wet/protocol_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace wet;

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kConfigKeys = {
    "m",      "n_subbands", "bandwidth_hz",  "beta",          "path_loss_db",
    "p_f_w",  "p_f_dbm",    "n0_w_per_hz",   "n0_dbm_per_hz", "eta",
    "t_block_s", "sigma_rms_s", "trials",    "seed",          "mode",
};

struct ExperimentConfig {
    SystemParams p;
    double sigma_rms = 1e-6;
    ChannelMode mode = ChannelMode::Iid;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
};

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': not an integer: '" + value + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// key = value file, '#' comments
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

void apply_env_overrides(std::map<std::string, std::string>& kv) {
    for (const auto& key : kConfigKeys) {
        std::string env = "WET_" + key;
        std::transform(env.begin(), env.end(), env.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (const char* v = std::getenv(env.c_str())) kv[key] = v;
    }
}

void apply_set_overrides(std::map<std::string, std::string>& kv,
                         const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
            throw ConfigError("--set: unknown key '" + key + "'");
        kv[key] = trim(s.substr(eq + 1));
    }
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ExperimentConfig resolve_config(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    cfg.p = SystemParams{5, 100, 10e6, 1e-5, 1.0, 1e-15, 0.8, 0.5e-3};

    auto has = [&](const char* k) { return kv.count(k) > 0; };
    auto get = [&](const char* k) { return kv.at(k); };

    if (has("m")) cfg.p.m = static_cast<int>(parse_int("m", get("m")));
    if (has("n_subbands")) cfg.p.n_subbands = static_cast<int>(parse_int("n_subbands", get("n_subbands")));
    if (has("bandwidth_hz")) cfg.p.bandwidth_hz = parse_double("bandwidth_hz", get("bandwidth_hz"));
    if (has("beta") && has("path_loss_db"))
        throw ConfigError("config: give either 'beta' or 'path_loss_db', not both");
    if (has("beta")) cfg.p.beta = parse_double("beta", get("beta"));
    if (has("path_loss_db")) cfg.p.beta = std::pow(10.0, -parse_double("path_loss_db", get("path_loss_db")) / 10.0);
    if (has("p_f_w") && has("p_f_dbm"))
        throw ConfigError("config: give either 'p_f_w' or 'p_f_dbm', not both");
    if (has("p_f_w")) cfg.p.p_f = parse_double("p_f_w", get("p_f_w"));
    if (has("p_f_dbm")) cfg.p.p_f = dbm_to_watt(parse_double("p_f_dbm", get("p_f_dbm")));
    if (has("n0_w_per_hz") && has("n0_dbm_per_hz"))
        throw ConfigError("config: give either 'n0_w_per_hz' or 'n0_dbm_per_hz', not both");
    if (has("n0_w_per_hz")) cfg.p.n0 = parse_double("n0_w_per_hz", get("n0_w_per_hz"));
    if (has("n0_dbm_per_hz")) cfg.p.n0 = dbm_to_watt(parse_double("n0_dbm_per_hz", get("n0_dbm_per_hz")));
    if (has("eta")) cfg.p.eta = parse_double("eta", get("eta"));
    if (has("t_block_s")) cfg.p.t_block = parse_double("t_block_s", get("t_block_s"));
    if (has("sigma_rms_s")) cfg.sigma_rms = parse_double("sigma_rms_s", get("sigma_rms_s"));
    if (has("trials")) {
        const long long t = parse_int("trials", get("trials"));
        if (t < 1) throw ConfigError("config field 'trials': must be >= 1");
        cfg.trials = static_cast<std::uint64_t>(t);
    }
    if (has("seed")) cfg.seed = static_cast<std::uint64_t>(parse_int("seed", get("seed")));
    if (has("mode")) {
        const std::string& m = get("mode");
        if (m == "iid") cfg.mode = ChannelMode::Iid;
        else if (m == "pdp") cfg.mode = ChannelMode::Pdp;
        else throw ConfigError("config field 'mode': expected 'iid' or 'pdp', got '" + m + "'");
    }
    cfg.p.validate();
    if (!(cfg.sigma_rms > 0)) throw ConfigError("config field 'sigma_rms_s': must be > 0");
    return cfg;
}

// Shared flags: --config/--set plus the common named overrides.
struct ConfigCli {
    std::string config_path;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file");
        cmd->add_option("--set", sets, "override a config key, e.g. --set m=5")->allow_extra_args(false);
        cmd->add_option("--seed", [this](const std::vector<std::string>& v) {
            sets.push_back("seed=" + v.front());
            return true;
        }, "master RNG seed");
        cmd->add_option("--trials", [this](const std::vector<std::string>& v) {
            sets.push_back("trials=" + v.front());
            return true;
        }, "Monte Carlo trials per point");
        cmd->add_option("--mode", [this](const std::vector<std::string>& v) {
            sets.push_back("mode=" + v.front());
            return true;
        }, "channel mode: iid or pdp");
    }

    ExperimentConfig resolve() const {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) kv = read_config_file(config_path);
        apply_env_overrides(kv);
        apply_set_overrides(kv, sets);
        return resolve_config(kv);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json config_json(const ExperimentConfig& cfg) {
    return json{{"m", cfg.p.m},
                {"n_subbands", cfg.p.n_subbands},
                {"bandwidth_hz", cfg.p.bandwidth_hz},
                {"beta", cfg.p.beta},
                {"p_f_w", cfg.p.p_f},
                {"n0_w_per_hz", cfg.p.n0},
                {"eta", cfg.p.eta},
                {"t_block_s", cfg.p.t_block},
                {"sigma_rms_s", cfg.sigma_rms},
                {"mode", cfg.mode == ChannelMode::Iid ? "iid" : "pdp"},
                {"trials", cfg.trials},
                {"seed", cfg.seed}};
}

void write_output(const std::string& out_path, const std::string& body) {
    if (out_path.empty() || out_path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + out_path);
    out << body;
}

void emit_csv_meta(std::ostringstream& os, const std::string& command,
                   const ExperimentConfig& cfg) {
    os << "# wet " << kVersion << " csv\n";
    os << "# command: " << command << "\n";
    const json meta = config_json(cfg);
    for (const auto& [k, v] : meta.items())
        os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

const char* case_name(CaseLabel c) {
    switch (c) {
    case CaseLabel::Case1: return "case1";
    case CaseLabel::Case2: return "case2";
    case CaseLabel::Case3: return "case3";
    }
    return "?";
}

Scheme parse_scheme(const std::string& s) {
    if (s == "twophase") return Scheme::TwoPhase;
    if (s == "phase1only") return Scheme::PhaseIOnly;
    if (s == "phase2only") return Scheme::PhaseIIOnly;
    if (s == "perfectcsit") return Scheme::PerfectCsit;
    if (s == "nocsit") return Scheme::NoCsit;
    throw ConfigError("unknown scheme '" + s + "'");
}

std::vector<double> default_t_grid() {
    std::vector<double> out;
    for (int i = 0; i < 12; ++i)
        out.push_back(1e-4 * std::pow(2.0 / 1e-4, i / 11.0));
    return out;
}

// ---- subcommand bodies ----

int cmd_gfunc(const std::vector<int>& n1_list, const std::vector<int>& m_list,
              double tol, const std::string& format, const std::string& out_path) {
    std::ostringstream os;
    json rows = json::array();
    if (format == "csv") os << "n1,m,value,method,abs_error_bound\n";
    for (int n1 : n1_list) {
        for (int m : m_list) {
            GValue v = n1 <= kGSeriesLimit ? g_exact_series({n1, m}) : g_quadrature({n1, m}, tol);
            const char* method = v.method == GMethod::ExactSeries ? "exact_series" : "quadrature";
            if (format == "csv")
                os << n1 << ',' << m << ',' << fmt(v.value) << ',' << method << ','
                   << fmt(v.abs_error_bound) << "\n";
            else
                rows.push_back({{"n1", n1}, {"m", m}, {"value", v.value},
                                {"method", method}, {"abs_error_bound", v.abs_error_bound}});
        }
    }
    if (format == "json") os << rows.dump(2) << "\n";
    write_output(out_path, os.str());
    return 0;
}

int cmd_design(const ExperimentConfig& cfg, bool per_n1, bool print_config,
               const std::string& out_path) {
    json out;
    out["config"] = config_json(cfg);
    if (!print_config) {
        const DesignSolution sol = optimize_design(cfg.p);
        out["solution"] = {{"n1_star", sol.n1_star},
                           {"e1_star_j", sol.e1_star},
                           {"e2_star_j", sol.e2_star},
                           {"q_net_star_j", sol.q_net_star},
                           {"q_net_star_w", sol.q_net_star / cfg.p.t_block},
                           {"case", case_name(sol.case_label)},
                           {"candidates_evaluated", sol.candidates_evaluated}};
        if (per_n1) {
            json rows = json::array();
            for (int n1 = 1; n1 <= cfg.p.n_subbands; ++n1) {
                const E1Solution s = optimize_e1(n1, cfg.p);
                rows.push_back({{"n1", n1},
                                {"case", case_name(classify_case(n1, cfg.p))},
                                {"e1_j", s.e1},
                                {"e2_j", e2_star(r_h(n1, s.e1, cfg.p), cfg.p)},
                                {"q_net_j", s.q_net},
                                {"q_net_w", s.q_net / cfg.p.t_block}});
            }
            out["per_n1"] = rows;
        }
    }
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& scheme_str,
                 std::optional<int> n1, std::optional<double> e1, std::optional<double> e2,
                 const std::string& format, const std::string& out_path) {
    const Scheme scheme = parse_scheme(scheme_str);
    TrainingDesign d{1, 0.0, 0.0};
    switch (scheme) {
    case Scheme::TwoPhase: {
        const DesignSolution sol = optimize_design(cfg.p);
        d = TrainingDesign{sol.n1_star, sol.e1_star, sol.e2_star};
        break;
    }
    case Scheme::PhaseIOnly: {
        const Phase1OnlyDesign sol = optimize_phase1_only(cfg.p);
        d = TrainingDesign{sol.n1, sol.e1, 0.0};
        break;
    }
    case Scheme::PhaseIIOnly: {
        const Phase2OnlyDesign sol = optimize_phase2_only(cfg.p);
        d = TrainingDesign{1, 0.0, sol.e2};
        break;
    }
    default:
        break;
    }
    if (n1) d.n1 = *n1;
    if (e1) d.e1 = *e1;
    if (e2) d.e2 = *e2;

    const PdpProfile profile = PdpProfile::standard(cfg.sigma_rms, cfg.p.bandwidth_hz);
    const McSummary s = monte_carlo(scheme, d, cfg.mode, cfg.p,
                                    cfg.mode == ChannelMode::Pdp ? &profile : nullptr,
                                    cfg.trials, cfg.seed);
    std::ostringstream os;
    if (format == "csv") {
        emit_csv_meta(os, "simulate", cfg);
        os << "scheme,n1,e1_j,e2_j,trials,mean_q_net_w,std_error_w,mean_q_hat_w\n";
        os << scheme_name(scheme) << ',' << d.n1 << ',' << fmt(d.e1) << ',' << fmt(d.e2) << ','
           << s.trials << ',' << fmt(s.mean_q_net / cfg.p.t_block) << ','
           << fmt(s.std_error / cfg.p.t_block) << ',' << fmt(s.mean_q_hat / cfg.p.t_block) << "\n";
    } else {
        json out{{"config", config_json(cfg)},
                 {"scheme", std::string(scheme_name(scheme))},
                 {"design", {{"n1", d.n1}, {"e1_j", d.e1}, {"e2_j", d.e2}}},
                 {"trials", s.trials},
                 {"mean_q_net_j", s.mean_q_net},
                 {"std_error_j", s.std_error},
                 {"mean_q_hat_j", s.mean_q_hat},
                 {"mean_q_net_w", s.mean_q_net / cfg.p.t_block},
                 {"std_error_w", s.std_error / cfg.p.t_block}};
        os << out.dump(2) << "\n";
    }
    write_output(out_path, os.str());
    return 0;
}

int cmd_sweep_n1(ExperimentConfig cfg, std::vector<int> m_list, int n1_max,
                 const std::string& out_path) {
    if (m_list.empty()) m_list.push_back(cfg.p.m);
    if (n1_max <= 0) n1_max = cfg.p.n_subbands;
    std::ostringstream os;
    emit_csv_meta(os, "sweep-n1", cfg);
    os << "m,n1,case,e1_opt_j,e2_opt_j,analytic_qnet_w,sim_qnet_w,sim_stderr_w\n";
    const PdpProfile profile = PdpProfile::standard(cfg.sigma_rms, cfg.p.bandwidth_hz);
    for (int m : m_list) {
        cfg.p.m = m;
        cfg.p.validate();
        for (int n1 = 1; n1 <= n1_max; ++n1) {
            const E1Solution sol = optimize_e1(n1, cfg.p);
            const double e2 = e2_star(r_h(n1, sol.e1, cfg.p), cfg.p);
            const TrainingDesign d{n1, sol.e1, e2};
            const McSummary s = monte_carlo(Scheme::TwoPhase, d, cfg.mode, cfg.p,
                                            cfg.mode == ChannelMode::Pdp ? &profile : nullptr,
                                            cfg.trials, cfg.seed);
            os << m << ',' << n1 << ',' << case_name(classify_case(n1, cfg.p)) << ','
               << fmt(sol.e1) << ',' << fmt(e2) << ',' << fmt(sol.q_net / cfg.p.t_block) << ','
               << fmt(s.mean_q_net / cfg.p.t_block) << ',' << fmt(s.std_error / cfg.p.t_block)
               << "\n";
        }
    }
    write_output(out_path, os.str());
    return 0;
}

int cmd_sweep_t(ExperimentConfig cfg, std::vector<int> m_list, std::vector<double> t_list,
                const std::string& out_path) {
    if (m_list.empty()) m_list.push_back(cfg.p.m);
    if (t_list.empty()) t_list = default_t_grid();
    std::ostringstream os;
    emit_csv_meta(os, "sweep-t", cfg);
    os << "m,t_s,n1_opt,e1_opt_j,e2_opt_j,analytic_qnet_w,"
          "twophase_w,twophase_se_w,phase1only_w,phase1only_se_w,"
          "phase2only_w,phase2only_se_w,perfectcsit_w,perfectcsit_se_w,nocsit_w,nocsit_se_w\n";
    const PdpProfile profile = PdpProfile::standard(cfg.sigma_rms, cfg.p.bandwidth_hz);
    const PdpProfile* prof = cfg.mode == ChannelMode::Pdp ? &profile : nullptr;
    for (int m : m_list) {
        cfg.p.m = m;
        for (double t : t_list) {
            cfg.p.t_block = t;
            cfg.p.validate();
            const DesignSolution sol = optimize_design(cfg.p);
            const Phase1OnlyDesign p1 = optimize_phase1_only(cfg.p);
            const Phase2OnlyDesign p2 = optimize_phase2_only(cfg.p);
            auto run = [&](Scheme sch, const TrainingDesign& d) {
                return monte_carlo(sch, d, cfg.mode, cfg.p, prof, cfg.trials, cfg.seed);
            };
            const McSummary two = run(Scheme::TwoPhase, {sol.n1_star, sol.e1_star, sol.e2_star});
            const McSummary ph1 = run(Scheme::PhaseIOnly, {p1.n1, p1.e1, 0.0});
            const McSummary ph2 = run(Scheme::PhaseIIOnly, {1, 0.0, p2.e2});
            const McSummary pcs = run(Scheme::PerfectCsit, {1, 0.0, 0.0});
            const McSummary ncs = run(Scheme::NoCsit, {1, 0.0, 0.0});
            os << m << ',' << fmt(t) << ',' << sol.n1_star << ',' << fmt(sol.e1_star) << ','
               << fmt(sol.e2_star) << ',' << fmt(sol.q_net_star / t);
            for (const McSummary* s : {&two, &ph1, &ph2, &pcs, &ncs})
                os << ',' << fmt(s->mean_q_net / t) << ',' << fmt(s->std_error / t);
            os << "\n";
        }
    }
    write_output(out_path, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase training design for multi-antenna wireless energy transfer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // gfunc
    auto* gfunc = app.add_subcommand("gfunc", "Expected maximum of Erlang norms, G(N1, M)");
    std::vector<int> g_n1{1}, g_m{1};
    double g_tol = 1e-9;
    std::string g_format = "csv", g_out;
    gfunc->add_option("--n1", g_n1, "N1 values")->delimiter(',');
    gfunc->add_option("--m", g_m, "M values")->delimiter(',');
    gfunc->add_option("--tol", g_tol, "relative tolerance for the quadrature path");
    gfunc->add_option("--format", g_format)->check(CLI::IsMember({"csv", "json"}));
    gfunc->add_option("--out", g_out, "output path (default stdout)");

    // design
    auto* design = app.add_subcommand("design", "Solve for the optimal (N1, E1, E2)");
    ConfigCli design_cfg;
    design_cfg.attach(design);
    bool per_n1 = false, print_config = false;
    std::string design_out;
    design->add_flag("--per-n1", per_n1, "include the per-N1 optimum table");
    design->add_flag("--print-config", print_config, "emit the resolved config only");
    design->add_option("--out", design_out);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one scheme");
    ConfigCli sim_cfg;
    sim_cfg.attach(simulate);
    std::string sim_scheme = "twophase", sim_format = "json", sim_out;
    int sim_n1 = -1;
    double sim_e1 = -1.0, sim_e2 = -1.0;
    simulate->add_option("--scheme", sim_scheme)
        ->check(CLI::IsMember({"twophase", "phase1only", "phase2only", "perfectcsit", "nocsit"}));
    simulate->add_option("--n1", sim_n1, "override N1 (default: optimized)");
    simulate->add_option("--e1", sim_e1, "override E1 in joules (default: optimized)");
    simulate->add_option("--e2", sim_e2, "override E2 in joules (default: optimized)");
    simulate->add_option("--format", sim_format)->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", sim_out);

    // sweep-n1
    auto* sweep_n1 = app.add_subcommand("sweep-n1", "Net power vs trained sub-band count");
    ConfigCli sn_cfg;
    sn_cfg.attach(sweep_n1);
    std::vector<int> sn_m_list;
    int sn_n1_max = 0;
    std::string sn_out;
    sweep_n1->add_option("--m-list", sn_m_list, "antenna counts, e.g. 2,5")->delimiter(',');
    sweep_n1->add_option("--n1-max", sn_n1_max, "largest N1 (default: N)");
    sweep_n1->add_option("--out", sn_out);

    // sweep-t
    auto* sweep_t = app.add_subcommand("sweep-t", "Optimal design and per-scheme power vs T");
    ConfigCli st_cfg;
    st_cfg.attach(sweep_t);
    std::vector<int> st_m_list;
    std::vector<double> st_t_list;
    std::string st_out;
    sweep_t->add_option("--m-list", st_m_list)->delimiter(',');
    sweep_t->add_option("--t-list", st_t_list, "block lengths in seconds (default: 12 log-spaced, 0.1 ms .. 2 s)")
        ->delimiter(',');
    sweep_t->add_option("--out", st_out);

    try {
        app.parse(argc, argv);
        if (gfunc->parsed()) return cmd_gfunc(g_n1, g_m, g_tol, g_format, g_out);
        if (design->parsed()) return cmd_design(design_cfg.resolve(), per_n1, print_config, design_out);
        if (simulate->parsed()) {
            return cmd_simulate(sim_cfg.resolve(), sim_scheme,
                                sim_n1 >= 0 ? std::optional<int>(sim_n1) : std::nullopt,
                                sim_e1 >= 0 ? std::optional<double>(sim_e1) : std::nullopt,
                                sim_e2 >= 0 ? std::optional<double>(sim_e2) : std::nullopt,
                                sim_format, sim_out);
        }
        if (sweep_n1->parsed()) return cmd_sweep_n1(sn_cfg.resolve(), sn_m_list, sn_n1_max, sn_out);
        if (sweep_t->parsed()) return cmd_sweep_t(st_cfg.resolve(), st_m_list, st_t_list, st_out);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const RootFindingFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
