// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xlsim/config.hpp"
#include "xlsim/engine.hpp"
#include "xlsim/presets.hpp"

using namespace xlsim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

SessionConfig constant_link(double snr_db, LinkAdaptMode mode) {
    SessionConfig c;
    c.channel.kind = ChannelKind::Constant;
    c.channel.mean_snr_db = snr_db;
    c.csi_noise_sigma_db = 1.0;
    c.report_delay_slots = 4;
    c.link.mode = mode;
    c.link.delta_up_db = 0.4;
    c.link.delta_down_db = 0.4 / 9.0;
    c.link.phi = 0.92;
    return c;
}

constexpr std::uint64_t kSeeds = 10;

struct Pooled {
    double qoe = 0.0, bitrate = 0.0, util = 0.0, var_util = 0.0;
    std::int64_t tx = 0, err = 0;
    std::vector<ChunkRecord> chunks;
};

Pooled run_seeds(SessionConfig c, std::uint64_t first, std::uint64_t count) {
    Pooled p;
    for (std::uint64_t s = first; s < first + count; ++s) {
        c.seed = s;
        const auto r = run_session(c);
        p.qoe += r.mean_qoe;
        p.bitrate += r.mean_bitrate_kbps;
        p.util += r.mean_utilization;
        p.var_util += r.var_utilization;
        for (const auto& [mode, b] : r.bler_by_mode) {
            p.tx += b.transmissions;
            p.err += b.errors;
        }
        p.chunks.insert(p.chunks.end(), r.chunks.begin(), r.chunks.end());
    }
    const double n = static_cast<double>(count);
    p.qoe /= n;
    p.bitrate /= n;
    p.util /= n;
    p.var_util /= n;
    return p;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// |delivered rate - chosen bitrate| / chosen bitrate, one value per chunk
double median_rate_deviation(const std::vector<ChunkRecord>& chunks) {
    std::vector<double> dev;
    for (const auto& c : chunks) {
        const double bps = c.bitrate_kbps * 1e3;
        dev.push_back(std::abs(c.size_bits / c.download_s - bps) / bps);
    }
    return median(dev);
}

void criterion1() {
    auto c = constant_link(5.0, LinkAdaptMode::Olla);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_convergence(c, 50000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = std::abs(r.converged_bler - 0.1) <= 0.02 && r.conditions.olla_ok() && secs < 5.0;
    report(1, ok,
           fmt("OLLA trailing BLER %.4f (target 0.1 +- 0.02), step condition %s, %.2f s", r.converged_bler,
               r.conditions.olla_ok() ? "met" : "violated", secs));
}

void criterion2() {
    auto c = constant_link(5.0, LinkAdaptMode::SoftAck);
    const auto soft = run_convergence(c, 50000);
    const double fp = soft.soft_fixed_point.value_or(std::numeric_limits<double>::quiet_NaN());
    const bool fixed_ok = soft.converged_bler < 0.1 && std::abs(soft.converged_bler - fp) <= 0.02;

    // mode ordering on the constant links and the high-SNR preset
    bool order_ok = true;
    std::string order;
    for (double snr : {5.0, 10.0}) {
        double b[3];
        const LinkAdaptMode modes[3] = {LinkAdaptMode::SoftAck, LinkAdaptMode::Olla, LinkAdaptMode::Lookup3gpp};
        for (int k = 0; k < 3; ++k) b[k] = run_convergence(constant_link(snr, modes[k]), 50000).converged_bler;
        order_ok = order_ok && b[0] <= b[1] && b[1] <= b[2];
        order += fmt(" | const %.0f dB soft %.4f olla %.4f 3gpp %.4f", snr, b[0], b[1], b[2]);
    }
    {
        double b[3];
        const char* modes[3] = {"soft", "olla", "3gpp"};
        for (int k = 0; k < 3; ++k) {
            auto s = apply_method(preset_config("high_snr"), "MPC-a");
            s.link.mode = parse_link_mode(modes[k]);
            const auto p = run_seeds(s, 1, kSeeds);
            b[k] = static_cast<double>(p.err) / static_cast<double>(p.tx);
        }
        order_ok = order_ok && b[0] <= b[1] && b[1] <= b[2];
        order += fmt(" | high_snr soft %.4f olla %.4f 3gpp %.4f", b[0], b[1], b[2]);
    }
    report(2, fixed_ok && order_ok,
           fmt("soft BLER %.4f, eta %.4f, fixed point %.4f", soft.converged_bler, soft.eta_phi.value_or(0.0), fp) +
               order);
}

void criterion3() {
    // mean transient over 2000 independent runs, tolerance 0.05 around the trailing mean
    const auto soft = run_convergence_ensemble(constant_link(5.0, LinkAdaptMode::SoftAck), 3000, 2000, 1000, 0.05);
    const auto olla = run_convergence_ensemble(constant_link(5.0, LinkAdaptMode::Olla), 3000, 2000, 1000, 0.05);
    const bool ok = soft.slots_to_tolerance <= 2000 && olla.slots_to_tolerance > soft.slots_to_tolerance;
    report(3, ok,
           fmt("slots to within 0.05: soft %lld (converged %.4f), OLLA %lld (converged %.4f); need soft <= 2000 "
               "and OLLA strictly longer",
               static_cast<long long>(soft.slots_to_tolerance), soft.converged_bler,
               static_cast<long long>(olla.slots_to_tolerance), olla.converged_bler));
}

void criteria4and5() {
    // static SNR profile at a 10 dB mean: capacity sits above the whole ladder
    const auto base = preset_config("high_snr");
    const auto vra = run_seeds(apply_method(base, "MPC-S"), 1, kSeeds);
    auto full_cfg = apply_method(base, "MPC-S");
    full_cfg.mac.policy = RaPolicy::FullGrid;
    const auto full = run_seeds(full_cfg, 1, kSeeds);

    const bool ok4 = vra.util >= 0.88 && vra.util <= 1.05 && vra.var_util < full.var_util && full.util <= 0.85;
    report(4, ok4,
           fmt("VRA utilization %.4f var %.4f; FullGrid utilization %.4f var %.4f", vra.util, vra.var_util,
               full.util, full.var_util));

    const double dv = median_rate_deviation(vra.chunks);
    const double df = median_rate_deviation(full.chunks);
    report(5, dv <= 0.15 && df >= 2.0 * dv,
           fmt("median rate deviation VRA %.4f (<= 0.15), FullGrid %.4f (>= 2x)", dv, df));
}

void criterion6() {
    bool ok = true;
    std::string detail;
    for (const auto& preset : preset_names()) {
        const auto base = preset_config(preset);
        const double s = run_seeds(apply_method(base, "MPC-S"), 1, kSeeds).qoe;
        detail += fmt("%s%s MPC-S %.3f", detail.empty() ? "" : " | ", preset.c_str(), s);
        for (const char* m : {"FESTIVE", "BBA", "HYB"}) {
            const double q = run_seeds(apply_method(base, m), 1, kSeeds).qoe;
            ok = ok && s >= q;
            detail += fmt(" %s %.3f", m, q);
        }
    }
    report(6, ok, detail);
}

void criterion7() {
    const auto base = load_config(std::string(XLSIM_SOURCE_DIR) + "/configs/markov.json");
    const std::vector<int> ms{150, 300, 450, 600, 750, 900};
    std::vector<double> qoe, rate;
    for (int ms_i : ms) {
        auto c = base;
        c.prediction_interval_s = ms_i * 1e-3;
        const auto p = run_seeds(c, 1, 40);
        qoe.push_back(p.qoe);
        rate.push_back(p.bitrate);
    }
    const auto best = std::max_element(qoe.begin(), qoe.end()) - qoe.begin();
    const bool ok = rate.front() > rate.back() && best != 0 && best != static_cast<long>(ms.size()) - 1;
    std::string detail;
    for (std::size_t i = 0; i < ms.size(); ++i) detail += fmt("%d ms: QoE %.3f rate %.0f; ", ms[i], qoe[i], rate[i]);
    report(7, ok, detail + fmt("QoE peak at %d ms", ms[static_cast<std::size_t>(best)]));
}

// Compact re-runs of the property oracles.
void criterion8() {
    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mpc_bad = 0, vra_bad = 0;

    for (int n = 0; n < 1000; ++n) {
        const int L = 1 + static_cast<int>(g() % 3);
        BitrateLadder lad;
        double r = 300.0 + 700.0 * u(g);
        for (int l = 0; l < L; ++l, r += 400.0 + 2000.0 * u(g)) lad.levels_kbps.push_back(r);
        lad.chunk_duration_s = 2.0;
        MpcConfig cfg;
        cfg.horizon_m = 1 + static_cast<int>(g() % 3);
        cfg.qoe_beta = 8.0 * u(g);
        PlayerState st;
        st.buffer_s = 20.0 * u(g);
        st.last_level = static_cast<int>(g() % static_cast<unsigned>(L + 1)) - 1;
        CapacityHistory h{0.6, {2e5 + 6e6 * u(g), 2e5 + 6e6 * u(g)}, 8};
        const double pred = harmonic_mean_predict(h);

        // brute force: every trace, constant prediction, first trace in order wins ties
        double best = -std::numeric_limits<double>::infinity();
        int best_first = 0, total = 1;
        for (int k = 0; k < cfg.horizon_m; ++k) total *= L;
        for (int code = 0; code < total; ++code) {
            std::vector<int> tr(static_cast<std::size_t>(cfg.horizon_m));
            for (int k = cfg.horizon_m - 1, c = code; k >= 0; --k, c /= L) tr[static_cast<std::size_t>(k)] = c % L;
            double b = st.buffer_s, q = 0.0;
            int prev = st.last_level;
            for (int l : tr) {
                const double kbps = lad.levels_kbps[static_cast<std::size_t>(l)];
                const double d = kbps * 1e3 * lad.chunk_duration_s / pred;
                const double pk = prev < 0 ? kbps : lad.levels_kbps[static_cast<std::size_t>(prev)];
                q += kbps / 1e3 - cfg.qoe_alpha * std::abs(kbps - pk) / 1e3 - cfg.qoe_beta * std::max(d - b, 0.0);
                b = std::min(std::max(b - d, 0.0) + lad.chunk_duration_s, st.buffer_max_s);
                prev = l;
            }
            if (q > best + kMpcTieTolerance) {
                best = q;
                best_first = tr[0];
            }
        }
        if (mpc_select(st, lad, h, cfg) != best_first) ++mpc_bad;
    }

    const auto table = McsTable::standard();
    for (int n = 0; n < 1000; ++n) {
        const int mcs = 1 + static_cast<int>(g() % 15);
        const int e_max = 1 + static_cast<int>(g() % 100);
        const double target = u(g) * 1.1 * static_cast<double>(tb_size(mcs, e_max, table));
        int best = 0;
        for (int e = 1; e <= e_max; ++e)
            if (std::abs(tb_size(mcs, e, table) - target) < std::abs(tb_size(mcs, best, table) - target)) best = e;
        if (vra_allocate(target, mcs, table, e_max) != best) ++vra_bad;
    }

    const bool fp_ok = std::abs(olla_fixed_point(0.4, 0.4 / 9.0) - 0.1) < 1e-12 &&
                       std::abs(soft_fixed_point(0.9, 0.1, 0.95) - 0.052631578947368474) < 1e-12 &&
                       std::abs(soft_fixed_point(0.4, 0.4 / 9.0, 1.0) - 0.1) < 1e-12;

    auto c = preset_config("dynamic");
    SessionLog log;
    log.keep_slots = true;
    run_session(c, &log);
    std::int64_t over = 0, delivered = 0;
    for (const auto& s : log.slots) {
        if (s.error || !s.transmitted()) continue;
        ++delivered;
        if (static_cast<double>(s.tb_bits) > slot_capacity_bits(s.rbs, s.true_snr_db, table.res_per_rb_per_slot()))
            ++over;
    }
    report(8, mpc_bad == 0 && vra_bad == 0 && fp_ok && over == 0 && delivered > 0,
           fmt("MPC mismatches %d/1000, VRA mismatches %d/1000, fixed points %s, ceiling violations %lld of %lld "
               "delivered slots",
               mpc_bad, vra_bad, fp_ok ? "ok" : "off", static_cast<long long>(over),
               static_cast<long long>(delivered)));
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion9() {
    const fs::path work = fs::temp_directory_path() / "xlsim_acceptance_determinism";
    fs::remove_all(work);
    const std::string cli = XLSIM_CLI;
    const std::string cfg = std::string(XLSIM_SOURCE_DIR) + "/configs/dynamic.json";
    const std::vector<std::string> cmds{
        "run --config " + cfg + " --seed 3 --slot-log",
        "run --scenario static --seed 5",
        "converge --snr 5 --mode soft --slots 20000 --runs 5",
        "sweep --scenario static --axis prediction_interval --values 150,600,900",
        "compare --scenario dynamic --methods MPC-S,MPC-b,BBA",
    };
    bool ok = true;
    int files = 0;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        std::vector<fs::path> outs;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = work / (std::to_string(i) + "_" + std::to_string(rep));
            const std::string line = "\"" + cli + "\" " + cmds[i] + " --out \"" + out.string() + "\" > /dev/null";
            if (std::system(line.c_str()) != 0) ok = false;
            outs.push_back(out);
        }
        if (!fs::exists(outs[0])) {
            ok = false;
            continue;
        }
        for (const auto& e : fs::directory_iterator(outs[0])) {
            ++files;
            const auto other = outs[1] / e.path().filename();
            if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ok = false;
        }
    }
    fs::remove_all(work);
    report(9, ok && files > 0, fmt("%d output files compared across %zu commands", files, cmds.size()));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> checks{criterion1, criterion2, criterion3, criteria4and5,
                                                    criterion6, criterion7, criterion8, criterion9};
    for (const auto& check : checks) {
        try {
            check();
        } catch (const std::exception& e) {
            std::printf("error: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
