#pragma once

// Output writers. Numbers go through std::to_chars (shortest round-trip form)
// so identical runs give byte-identical files.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "xlsim/config.hpp"
#include "xlsim/engine.hpp"
#include "xlsim/playback.hpp"

namespace xlsim {

inline std::string fmt(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string fmt(std::int64_t x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }

/// Tiny CSV row builder.
class CsvRow {
public:
    template <class T>
    CsvRow& operator<<(const T& v) {
        if (!first_) s_ += ',';
        first_ = false;
        if constexpr (std::is_convertible_v<T, std::string_view>)
            s_ += std::string_view(v);
        else
            s_ += fmt(v);
        return *this;
    }
    const std::string& str() const { return s_; }

private:
    std::string s_;
    bool first_ = true;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string chunks_csv(const std::vector<ChunkRecord>& chunks) {
    std::string out = "i,level,bitrate_kbps,start_s,download_s,rebuffer_s,throughput_bps,utilization,residual_errors\n";
    for (const auto& c : chunks) {
        CsvRow r;
        r << c.index << c.level << c.bitrate_kbps << c.start_s << c.download_s << c.rebuffer_s << c.throughput_bps
          << c.utilization << c.residual_errors;
        out += r.str() + '\n';
    }
    return out;
}

inline std::string slots_csv(const std::vector<SlotRecord>& slots) {
    std::string out = "t,true_snr_db,est_snr_db,offset_db,mcs,rbs,tb_bits,error,feedback,attempt,capacity_bits\n";
    for (const auto& s : slots) {
        CsvRow r;
        r << s.t << s.true_snr_db << s.est_snr_db << s.offset_db << s.mcs << s.rbs << s.tb_bits << (s.error ? 1 : 0)
          << (s.feedback ? to_string(*s.feedback) : std::string_view("")) << s.attempt << s.capacity_bits;
        out += r.str() + '\n';
    }
    return out;
}

inline std::string decisions_csv(const std::vector<DecisionRecord>& ds) {
    std::string out = "chunk,clock_s,buffer_s,predicted_bps,level\n";
    for (const auto& d : ds) {
        CsvRow r;
        r << d.chunk << d.clock_s << d.buffer_s << d.predicted_bps << d.level;
        out += r.str() + '\n';
    }
    return out;
}

inline Json summary_json(const SessionReport& rep) {
    Json j;
    j["seed"] = rep.seed;
    j["chunks"] = rep.chunks.size();
    j["slot_count"] = rep.slot_count;
    j["mean_bitrate_kbps"] = rep.mean_bitrate_kbps;
    j["mean_rebuffer_s"] = rep.mean_rebuffer_s;
    j["total_rebuffer_s"] = rep.total_rebuffer_s;
    j["total_qoe"] = rep.total_qoe;
    j["mean_qoe"] = rep.mean_qoe;
    j["mean_utilization"] = rep.mean_utilization;
    j["var_utilization"] = rep.var_utilization;
    j["residual_errors"] = rep.residual_errors;
    Json b = Json::object();
    for (const auto& [mode, m] : rep.bler_by_mode)
        b[mode] = {{"transmissions", m.transmissions}, {"errors", m.errors}, {"bler", m.bler()}};
    j["bler"] = b;
    j["config"] = rep.config_echo.empty() ? Json(nullptr) : Json::parse(rep.config_echo);
    return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// One labelled row per session for sweep and compare tables.
inline std::string report_table_csv(const std::vector<std::string>& labels, const std::vector<SessionReport>& reps,
                                    const std::string& label_header = "label") {
    detail::require(labels.size() == reps.size(), "one label per report");
    std::string out = label_header +
                      ",seed,mean_qoe,mean_bitrate_kbps,total_rebuffer_s,mean_utilization,var_utilization,bler\n";
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& r = reps[i];
        double bler = 0.0;
        if (!r.bler_by_mode.empty()) bler = r.bler_by_mode.begin()->second.bler();
        CsvRow row;
        row << labels[i] << static_cast<std::int64_t>(r.seed) << r.mean_qoe << r.mean_bitrate_kbps
            << r.total_rebuffer_s << r.mean_utilization << r.var_utilization << bler;
        out += row.str() + '\n';
    }
    return out;
}

inline std::string convergence_csv(const ConvergenceReport& rep) {
    std::string out = "window,start_slot,bler\n";
    for (std::size_t k = 0; k < rep.series.size(); ++k) {
        CsvRow r;
        r << static_cast<std::int64_t>(k) << static_cast<std::int64_t>(k) * rep.window_slots << rep.series[k];
        out += r.str() + '\n';
    }
    return out;
}

inline Json convergence_json(const ConvergenceReport& rep) {
    Json j;
    j["mode"] = std::string(to_string(rep.mode));
    j["n_slots"] = rep.n_slots;
    j["window_slots"] = rep.window_slots;
    j["converged_bler"] = rep.converged_bler;
    j["olla_fixed_point"] = rep.olla_fixed_point;
    j["eta_phi"] = rep.eta_phi ? Json(*rep.eta_phi) : Json(nullptr);
    j["soft_fixed_point"] = rep.soft_fixed_point ? Json(*rep.soft_fixed_point) : Json(nullptr);
    j["slots_to_tolerance"] = rep.slots_to_tolerance ? Json(*rep.slots_to_tolerance) : Json(nullptr);
    j["conditions"] = {{"olla_step_sum", rep.conditions.olla_step_sum_ok},
                       {"soft_eta", rep.conditions.soft_eta_ok ? Json(*rep.conditions.soft_eta_ok) : Json(nullptr)},
                       {"soft_step_up", rep.conditions.soft_step_up_ok}};
    return j;
}

}  // namespace xlsim
