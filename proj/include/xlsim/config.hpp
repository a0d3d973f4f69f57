#pragma once

// JSON session configs: strict loading (unknown keys rejected) and a
// canonical writer used for echoes and the reference files.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xlsim/engine.hpp"
#include "xlsim/error.hpp"

namespace xlsim {

using Json = nlohmann::ordered_json;

namespace config_detail {

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

/// Read-once view of a JSON object that remembers which keys were used so
/// leftovers can be reported.
class Obj {
public:
    Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(join(path_, key), "must be finite");
        return x;
    }

    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
        return v.get<int>();
    }

    std::int64_t int64(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
        return v.get<std::string>();
    }

    Obj child(const std::string& key) { return Obj(raw(key), join(path_, key)); }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
auto field(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

inline ChannelKind channel_kind(const std::string& s, const std::string& path) {
    if (s == "constant") return ChannelKind::Constant;
    if (s == "faded_ar1") return ChannelKind::FadedAr1;
    if (s == "markov") return ChannelKind::TwoStateMarkov;
    if (s == "trace") return ChannelKind::TraceReplay;
    throw ConfigError(path, "unknown channel kind '" + s + "'");
}

inline std::string channel_kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::Constant: return "constant";
        case ChannelKind::FadedAr1: return "faded_ar1";
        case ChannelKind::TwoStateMarkov: return "markov";
        case ChannelKind::TraceReplay: return "trace";
    }
    return "?";
}

inline CapacitySource capacity_source(const std::string& s, const std::string& path) {
    if (s == "phy_link") return CapacitySource::PhyLink;
    if (s == "phy_delivered") return CapacitySource::PhyDelivered;
    if (s == "chunk") return CapacitySource::Chunk;
    throw ConfigError(path, "unknown capacity source '" + s + "'");
}

/// Line and column of a byte offset, both 1-based.
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace config_detail

/// Parses a session config from JSON text. `origin` prefixes parse errors.
inline SessionConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
    using namespace config_detail;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("", origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": parse error: " +
                                  e.what());
    }
    SessionConfig c;
    Obj root(doc, "");

    c.seed = static_cast<std::uint64_t>(root.int64("seed", static_cast<std::int64_t>(c.seed)));
    c.slot_duration_s = root.number("slot_duration_s", c.slot_duration_s);
    c.n_chunks = root.integer("n_chunks", c.n_chunks);
    c.buffer_max_s = root.number("buffer_max_s", c.buffer_max_s);
    c.harq_max_retx = root.integer("harq_max_retx", c.harq_max_retx);
    c.max_slots_per_chunk = root.int64("max_slots_per_chunk", c.max_slots_per_chunk);

    if (root.has("channel")) {
        Obj ch = root.child("channel");
        c.channel.kind = channel_kind(ch.string("kind", channel_kind_name(c.channel.kind)), ch.path("kind"));
        c.channel.mean_snr_db = ch.number("mean_snr_db", c.channel.mean_snr_db);
        c.channel.swing_db = ch.number("swing_db", c.channel.swing_db);
        c.channel.swing_period_s = ch.number("swing_period_s", c.channel.swing_period_s);
        c.channel.doppler_hz = ch.number("doppler_hz", c.channel.doppler_hz);
        c.channel.ar1_sigma_db = ch.number("ar1_sigma_db", c.channel.ar1_sigma_db);
        if (ch.has("trace_path")) c.channel.trace_path = ch.string("trace_path", "");
        if (ch.has("markov")) {
            Obj mk = ch.child("markov");
            auto& m = c.channel.markov;
            m.good_snr_db = mk.number("good_snr_db", m.good_snr_db);
            m.bad_snr_db = mk.number("bad_snr_db", m.bad_snr_db);
            m.p_good_to_bad = mk.number("p_good_to_bad", m.p_good_to_bad);
            m.p_bad_to_good = mk.number("p_bad_to_good", m.p_bad_to_good);
            mk.finish();
        }
        ch.finish();
        field("channel", [&] { validate(c.channel); return 0; });
    }

    if (root.has("csi")) {
        Obj csi = root.child("csi");
        c.csi_noise_sigma_db = csi.number("noise_sigma_db", c.csi_noise_sigma_db);
        c.report_delay_slots = csi.integer("report_delay_slots", c.report_delay_slots);
        csi.finish();
    }

    if (root.has("bler_model")) {
        Obj b = root.child("bler_model");
        const std::string kind = b.string("kind", c.bler.kind == BlerKind::ErfModel ? "erf" : "logistic");
        if (kind == "erf")
            c.bler.kind = BlerKind::ErfModel;
        else if (kind == "logistic")
            c.bler.kind = BlerKind::LogisticFit;
        else
            throw ConfigError(b.path("kind"), "unknown BLER model '" + kind + "'");
        c.bler.alpha_db = b.number("alpha_db", c.bler.alpha_db);
        c.bler.alpha0 = b.number("alpha0", c.bler.alpha0);
        c.bler.alpha1 = b.number("alpha1", c.bler.alpha1);
        c.bler.s = b.number("s", c.bler.s);
        b.finish();
    }

    if (root.has("mcs_table_csv")) {
        const std::string path = root.string("mcs_table_csv", "");
        c.table = field("mcs_table_csv", [&] { return McsTable::from_csv_file(path); });
    }

    if (root.has("link")) {
        Obj l = root.child("link");
        const std::string mode = l.string("mode", std::string(to_string(c.link.mode)));
        c.link.mode = field(l.path("mode"), [&] { return parse_link_mode(mode); });
        c.link.offset_db = l.number("initial_offset_db", c.link.offset_db);
        c.link.delta_up_db = l.number("delta_up_db", c.link.delta_up_db);
        if (l.has("target_bler") && l.has("delta_down_db"))
            throw ConfigError(l.path("delta_down_db"), "give either target_bler or delta_down_db, not both");
        if (l.has("target_bler")) {
            const double t = l.number("target_bler", 0.1);
            if (!(t > 0.0 && t < 1.0)) throw ConfigError(l.path("target_bler"), "must be in (0,1)");
            c.link.delta_down_db = c.link.delta_up_db * t / (1.0 - t);
        }
        c.link.delta_down_db = l.number("delta_down_db", c.link.delta_down_db);
        c.link.phi = l.number("phi", c.link.phi);
        c.link.offset_min_db = l.number("offset_min_db", c.link.offset_min_db);
        c.link.offset_max_db = l.number("offset_max_db", c.link.offset_max_db);
        c.link.erf_alpha_db = l.number("erf_alpha_db", c.link.erf_alpha_db);
        l.finish();
        field("link", [&] { validate(c.link); return 0; });
    }

    if (root.has("mac")) {
        Obj m = root.child("mac");
        c.mac.e_max = m.integer("e_max", c.mac.e_max);
        c.mac.slots_per_tti = m.integer("slots_per_tti", c.mac.slots_per_tti);
        const std::string pol = m.string("policy", std::string(to_string(c.mac.policy)));
        c.mac.policy = field(m.path("policy"), [&] { return parse_ra_policy(pol); });
        c.mac.remaining_aware = m.boolean("remaining_aware", c.mac.remaining_aware);
        c.mac.bler_window = m.integer("bler_window", c.mac.bler_window);
        c.vra_buffer_floor_s = m.number("vra_buffer_floor_s", c.vra_buffer_floor_s);
        m.finish();
        field("mac", [&] { validate(c.mac); return 0; });
    }

    if (!root.has("ladder")) throw ConfigError("ladder", "missing required section");
    {
        Obj l = root.child("ladder");
        if (!l.has("levels_kbps")) throw ConfigError(l.path("levels_kbps"), "missing required key");
        const Json& lv = l.raw("levels_kbps");
        if (!lv.is_array()) throw ConfigError(l.path("levels_kbps"), "expected an array of numbers");
        c.ladder.levels_kbps.clear();
        for (const auto& x : lv) {
            if (!x.is_number()) throw ConfigError(l.path("levels_kbps"), "expected an array of numbers");
            c.ladder.levels_kbps.push_back(x.get<double>());
        }
        c.ladder.chunk_duration_s = l.number("chunk_duration_s", c.ladder.chunk_duration_s);
        l.finish();
        field("ladder", [&] { validate(c.ladder); return 0; });
    }

    if (root.has("abr")) {
        Obj a = root.child("abr");
        const std::string kind = a.string("kind", std::string(to_string(c.abr)));
        c.abr = field(a.path("kind"), [&] { return parse_abr(kind); });
        c.mpc.horizon_m = a.integer("horizon", c.mpc.horizon_m);
        c.mpc.qoe_alpha = a.number("qoe_alpha", c.mpc.qoe_alpha);
        c.mpc.qoe_beta = a.number("qoe_beta", c.mpc.qoe_beta);
        const std::string dl = a.string("mpc_download", c.mpc_download == MpcDownloadModel::Paced ? "paced" : "capacity");
        if (dl == "paced")
            c.mpc_download = MpcDownloadModel::Paced;
        else if (dl == "capacity")
            c.mpc_download = MpcDownloadModel::Capacity;
        else
            throw ConfigError(a.path("mpc_download"), "expected 'capacity' or 'paced'");
        c.prediction_interval_s = a.number("prediction_interval_ms", c.prediction_interval_s * 1e3) * 1e-3;
        c.history_n = a.integer("history_n", c.history_n);
        c.capacity_source = capacity_source(a.string("capacity_source", std::string(to_string(c.capacity_source))),
                                            a.path("capacity_source"));
        c.bba_reservoir_s = a.number("bba_reservoir_s", c.bba_reservoir_s);
        c.bba_cushion_s = a.number("bba_cushion_s", c.bba_cushion_s);
        c.hybrid_safety = a.number("hybrid_safety", c.hybrid_safety);
        a.finish();
        field("abr", [&] { validate(c.mpc); return 0; });
    }
    root.finish();
    field("", [&] { validate(c); return 0; });
    return c;
}

inline SessionConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

/// Canonical JSON form; `parse_config(to_json(c).dump())` reproduces `c`
/// except for a table loaded from CSV, which is written out inline.
inline Json to_json(const SessionConfig& c) {
    using namespace config_detail;
    Json j;
    j["seed"] = c.seed;
    j["slot_duration_s"] = c.slot_duration_s;
    j["n_chunks"] = c.n_chunks;
    j["buffer_max_s"] = c.buffer_max_s;
    j["harq_max_retx"] = c.harq_max_retx;
    j["max_slots_per_chunk"] = c.max_slots_per_chunk;
    Json ch;
    ch["kind"] = channel_kind_name(c.channel.kind);
    ch["mean_snr_db"] = c.channel.mean_snr_db;
    ch["swing_db"] = c.channel.swing_db;
    ch["swing_period_s"] = c.channel.swing_period_s;
    ch["doppler_hz"] = c.channel.doppler_hz;
    ch["ar1_sigma_db"] = c.channel.ar1_sigma_db;
    ch["markov"] = {{"good_snr_db", c.channel.markov.good_snr_db},
                    {"bad_snr_db", c.channel.markov.bad_snr_db},
                    {"p_good_to_bad", c.channel.markov.p_good_to_bad},
                    {"p_bad_to_good", c.channel.markov.p_bad_to_good}};
    if (c.channel.trace_path) ch["trace_path"] = *c.channel.trace_path;
    j["channel"] = ch;
    j["csi"] = {{"noise_sigma_db", c.csi_noise_sigma_db}, {"report_delay_slots", c.report_delay_slots}};
    j["bler_model"] = {{"kind", c.bler.kind == BlerKind::ErfModel ? "erf" : "logistic"},
                       {"alpha_db", c.bler.alpha_db},
                       {"alpha0", c.bler.alpha0},
                       {"alpha1", c.bler.alpha1},
                       {"s", c.bler.s}};
    j["link"] = {{"mode", std::string(to_string(c.link.mode))},
                 {"initial_offset_db", c.link.offset_db},
                 {"delta_up_db", c.link.delta_up_db},
                 {"delta_down_db", c.link.delta_down_db},
                 {"phi", c.link.phi},
                 {"offset_min_db", c.link.offset_min_db},
                 {"offset_max_db", c.link.offset_max_db},
                 {"erf_alpha_db", c.link.erf_alpha_db}};
    j["mac"] = {{"e_max", c.mac.e_max},
                {"slots_per_tti", c.mac.slots_per_tti},
                {"policy", std::string(to_string(c.mac.policy))},
                {"remaining_aware", c.mac.remaining_aware},
                {"bler_window", c.mac.bler_window},
                {"vra_buffer_floor_s", c.vra_buffer_floor_s}};
    j["ladder"] = {{"levels_kbps", c.ladder.levels_kbps}, {"chunk_duration_s", c.ladder.chunk_duration_s}};
    j["abr"] = {{"kind", std::string(to_string(c.abr))},
                {"horizon", c.mpc.horizon_m},
                {"qoe_alpha", c.mpc.qoe_alpha},
                {"qoe_beta", c.mpc.qoe_beta},
                {"mpc_download", c.mpc_download == MpcDownloadModel::Paced ? "paced" : "capacity"},
                {"prediction_interval_ms", c.prediction_interval_s * 1e3},
                {"history_n", c.history_n},
                {"capacity_source", std::string(to_string(c.capacity_source))},
                {"bba_reservoir_s", c.bba_reservoir_s},
                {"bba_cushion_s", c.bba_cushion_s},
                {"hybrid_safety", c.hybrid_safety}};
    return j;
}

}  // namespace xlsim
