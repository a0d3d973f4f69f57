// xlsim command-line driver: run, converge, sweep, compare.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xlsim/config.hpp"
#include "xlsim/io.hpp"
#include "xlsim/presets.hpp"

namespace fs = std::filesystem;
using namespace xlsim;

namespace {

struct Common {
    std::string config_path;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON session config");
    cmd->add_option("--scenario", c.scenario, "built-in preset: static, dynamic, high_snr");
    cmd->add_option("--seed", c.seed, "seed override");
    cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
}

SessionConfig resolve(const Common& c, bool required = true) {
    if (!c.config_path.empty() && !c.scenario.empty())
        throw ConfigError("", "--config and --scenario are mutually exclusive");
    SessionConfig cfg;
    if (!c.config_path.empty())
        cfg = load_config(c.config_path);
    else if (!c.scenario.empty())
        cfg = preset_config(c.scenario);
    else if (required)
        throw ConfigError("", "give --config or --scenario");
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

SessionReport run_echoed(const SessionConfig& cfg, SessionLog* log = nullptr) {
    SessionReport rep = run_session(cfg, log);
    rep.config_echo = to_json(cfg).dump();
    return rep;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

void print_row(const std::string& label, const SessionReport& r) {
    std::printf("%-12s qoe %8.4f  bitrate %7.1f kbps  rebuffer %7.3f s  util %.3f (var %.4f)\n", label.c_str(),
                r.mean_qoe, r.mean_bitrate_kbps, r.total_rebuffer_s, r.mean_utilization, r.var_utilization);
}

/// Channel, ladder and session length must match for reports to be ranked.
void require_comparable(const std::vector<SessionConfig>& cfgs, const std::vector<std::string>& names) {
    const auto& a = cfgs.front();
    for (std::size_t i = 1; i < cfgs.size(); ++i) {
        const auto& b = cfgs[i];
        std::string what;
        if (!(to_json(a)["channel"] == to_json(b)["channel"])) what = "channel";
        else if (!(a.ladder == b.ladder)) what = "ladder";
        else if (a.n_chunks != b.n_chunks) what = "n_chunks";
        else if (a.slot_duration_s != b.slot_duration_s) what = "slot_duration_s";
        if (!what.empty())
            throw ConfigError(what, "incomparable configs '" + names.front() + "' and '" + names[i] + "'");
    }
}

int fail(const Error& e) {
    Json j;
    j["error"] = e.kind();
    j["message"] = e.what();
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e); ce && !ce->field().empty()) j["field"] = ce->field();
    std::cerr << j.dump() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xlsim: slot-level cross-layer video delivery simulator"};
    app.require_subcommand(1);

    Common run_o;
    bool slot_log = false;
    auto* run = app.add_subcommand("run", "simulate one streaming session");
    add_common(run, run_o);
    run->add_flag("--slot-log", slot_log, "also write slots.csv");

    Common conv_o;
    std::int64_t n_slots = 50000;
    double snr_db = 5.0;
    std::string mode = "soft";
    int runs = 0;
    auto* conv = app.add_subcommand("converge", "link-layer BLER convergence on a stationary channel");
    add_common(conv, conv_o);
    conv->add_option("--slots", n_slots, "slots to simulate")->capture_default_str();
    conv->add_option("--snr", snr_db, "constant SNR when no config is given")->capture_default_str();
    conv->add_option("--mode", mode, "link adaptation: 3gpp, olla, soft")->capture_default_str();
    conv->add_option("--runs", runs, "also average this many seeds for the mean transient");

    Common sweep_o;
    std::string axis, values;
    auto* sweep = app.add_subcommand("sweep", "vary one parameter");
    add_common(sweep, sweep_o);
    sweep->add_option("--axis", axis, "prediction_interval (ms), abr, link_mode, ra_policy, snr")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();

    Common cmp_o;
    std::string methods, configs;
    auto* cmp = app.add_subcommand("compare", "rank methods or configs on a shared channel");
    add_common(cmp, cmp_o);
    cmp->add_option("--methods", methods, "comma-separated subset of MPC-S,MPC-a,MPC-b,FESTIVE,BBA,HYB");
    cmp->add_option("--configs", configs, "comma-separated config files to compare instead of methods");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            const SessionConfig cfg = resolve(run_o);
            const fs::path out = prepare_out(run_o.out_dir);
            SessionLog log;
            log.keep_slots = slot_log;
            const SessionReport rep = run_echoed(cfg, &log);
            write_text(out / "chunks.csv", chunks_csv(rep.chunks));
            write_text(out / "decisions.csv", decisions_csv(log.decisions));
            if (slot_log) write_text(out / "slots.csv", slots_csv(log.slots));
            write_text(out / "summary.json", dump(summary_json(rep)));
            print_row("session", rep);
        } else if (*conv) {
            SessionConfig cfg = resolve(conv_o, false);
            if (conv_o.config_path.empty() && conv_o.scenario.empty()) {
                cfg.channel.kind = ChannelKind::Constant;
                cfg.channel.mean_snr_db = snr_db;
                cfg.link.mode = parse_link_mode(mode);
            }
            const fs::path out = prepare_out(conv_o.out_dir);
            const ConvergenceReport rep = run_convergence(cfg, n_slots);
            Json j = convergence_json(rep);
            if (runs > 0) {
                const std::int64_t span = std::min<std::int64_t>(n_slots, 3000);
                const auto ens = run_convergence_ensemble(cfg, span, runs, span / 2, ConvergenceOptions{}.tolerance);
                j["ensemble"] = {{"runs", ens.runs},
                                 {"slots", span},
                                 {"converged_bler", ens.converged_bler},
                                 {"slots_to_tolerance", ens.slots_to_tolerance}};
            }
            j["config"] = to_json(cfg);
            write_text(out / "convergence.csv", convergence_csv(rep));
            write_text(out / "summary.json", dump(j));
            std::printf("%s: converged BLER %.4f over the last %lld slots (olla fixed point %.4f", std::string(to_string(rep.mode)).c_str(),
                        rep.converged_bler, static_cast<long long>(std::min<std::int64_t>(n_slots, 10000)), rep.olla_fixed_point);
            if (rep.soft_fixed_point) std::printf(", soft fixed point %.4f", *rep.soft_fixed_point);
            std::printf(")\n");
        } else if (*sweep) {
            const SessionConfig base = resolve(sweep_o);
            const auto vals = split_csv(values);
            const fs::path out = prepare_out(sweep_o.out_dir);
            const auto reps = run_sweep(base, axis, vals);
            std::vector<SessionReport> echoed;
            Json all = Json::array();
            for (std::size_t i = 0; i < reps.size(); ++i) {
                SessionReport r = reps[i];
                r.config_echo = to_json(apply_axis(base, parse_sweep_axis(axis), vals[i])).dump();
                all.push_back(summary_json(r));
                print_row(axis + "=" + vals[i], r);
                echoed.push_back(std::move(r));
            }
            write_text(out / "sweep.csv", report_table_csv(vals, echoed, axis));
            write_text(out / "summary.json", dump(all));
        } else if (*cmp) {
            std::vector<std::string> names;
            std::vector<SessionConfig> cfgs;
            if (!configs.empty()) {
                if (!methods.empty()) throw ConfigError("", "--methods and --configs are mutually exclusive");
                for (const auto& path : split_csv(configs)) {
                    SessionConfig c = load_config(path);
                    if (cmp_o.seed) c.seed = *cmp_o.seed;
                    names.push_back(fs::path(path).stem().string());
                    cfgs.push_back(c);
                }
                if (cfgs.size() < 2) throw ConfigError("configs", "compare needs at least two configs");
            } else {
                const SessionConfig base = resolve(cmp_o);
                names = methods.empty() ? method_names() : split_csv(methods);
                if (names.empty()) throw ConfigError("methods", "empty method list");
                for (const auto& m : names) cfgs.push_back(apply_method(base, m));
            }
            require_comparable(cfgs, names);
            const fs::path out = prepare_out(cmp_o.out_dir);
            std::vector<SessionReport> reps;
            Json all = Json::object();
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                reps.push_back(run_echoed(cfgs[i]));
                all[names[i]] = summary_json(reps.back());
                print_row(names[i], reps.back());
            }
            write_text(out / "compare.csv", report_table_csv(names, reps, "method"));
            write_text(out / "summary.json", dump(all));
        }
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail(Error(e.what()));
    }
    return 0;
}
