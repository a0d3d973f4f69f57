#pragma once

// Player-side bookkeeping: per-chunk outcomes and session aggregates.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xlsim/abr.hpp"
#include "xlsim/buffer.hpp"
#include "xlsim/error.hpp"
#include "xlsim/records.hpp"

namespace xlsim {

struct ChunkRecord {
    int index = 0;
    int level = 0;
    double bitrate_kbps = 0.0;
    double size_bits = 0.0;
    double start_s = 0.0;        // request time t_i
    double download_s = 0.0;     // d_i
    double rebuffer_s = 0.0;     // phi_i
    double throughput_bps = 0.0; // C_i
    double utilization = 0.0;    // (t_{i+1} - t_i) / T_chunk
    std::int64_t residual_errors = 0;
    double idle_before_s = 0.0;  // wait for buffer headroom before the request
    double buffer_before_s = 0.0;
    double buffer_after_s = 0.0;
    std::int64_t delivered_bits = 0;
    std::int64_t slots = 0;

    bool operator==(const ChunkRecord&) const = default;
};

/// Mean per-slot delivery rate over a download window, in bits/s.
inline double chunk_throughput(std::span<const SlotRecord> window, double slot_duration_s) {
    if (window.empty()) throw InvalidArgument("chunk_throughput: empty window");
    detail::require(slot_duration_s > 0.0, "slot duration must be positive");
    double acc = 0.0;
    for (const auto& r : window) acc += static_cast<double>(r.delivered_bits()) / slot_duration_s;
    return acc / static_cast<double>(window.size());
}

struct ModeBler {
    std::int64_t transmissions = 0;
    std::int64_t errors = 0;
    double bler() const { return transmissions ? static_cast<double>(errors) / static_cast<double>(transmissions) : 0.0; }

    bool operator==(const ModeBler&) const = default;
};

struct SessionReport {
    std::vector<ChunkRecord> chunks;
    double mean_bitrate_kbps = 0.0;
    double mean_rebuffer_s = 0.0;
    double total_rebuffer_s = 0.0;
    double total_qoe = 0.0;
    double mean_qoe = 0.0;
    double mean_utilization = 0.0;
    double var_utilization = 0.0;
    std::map<std::string, ModeBler> bler_by_mode;  // keyed by link-adaptation mode name
    std::int64_t slot_count = 0;
    std::int64_t residual_errors = 0;
    std::uint64_t seed = 0;
    std::string config_echo;  // canonical JSON of the config that produced this report

    bool operator==(const SessionReport&) const = default;
};

/// Chunk-derived aggregates. Smoothness for the first chunk is measured
/// against itself. Variances are population variances.
inline SessionReport aggregate(std::span<const ChunkRecord> records, double qoe_alpha, double qoe_beta) {
    if (records.empty()) throw InvalidArgument("aggregate: no chunk records");
    SessionReport rep;
    rep.chunks.assign(records.begin(), records.end());
    const double n = static_cast<double>(records.size());
    double sum_rate = 0.0, sum_reb = 0.0, sum_qoe = 0.0, sum_u = 0.0;
    std::int64_t residual = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& c = records[i];
        const double prev = i == 0 ? c.bitrate_kbps : records[i - 1].bitrate_kbps;
        sum_rate += c.bitrate_kbps;
        sum_reb += c.rebuffer_s;
        sum_qoe += qoe_chunk(c.bitrate_kbps, prev, c.rebuffer_s, qoe_alpha, qoe_beta);
        sum_u += c.utilization;
        residual += c.residual_errors;
    }
    rep.mean_bitrate_kbps = sum_rate / n;
    rep.total_rebuffer_s = sum_reb;
    rep.mean_rebuffer_s = sum_reb / n;
    rep.total_qoe = sum_qoe;
    rep.mean_qoe = sum_qoe / n;
    rep.mean_utilization = sum_u / n;
    double var = 0.0;
    for (const auto& c : records) var += (c.utilization - rep.mean_utilization) * (c.utilization - rep.mean_utilization);
    rep.var_utilization = var / n;
    rep.residual_errors = residual;
    return rep;
}

}  // namespace xlsim
