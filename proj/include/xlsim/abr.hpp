#pragma once

// Chunk-level bitrate selection: capacity sampling, harmonic-mean prediction,
// the horizon-enumerating MPC planner and three simple baselines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "xlsim/buffer.hpp"
#include "xlsim/error.hpp"
#include "xlsim/records.hpp"

namespace xlsim {

struct BitrateLadder {
    std::vector<double> levels_kbps;
    double chunk_duration_s = 2.0;

    std::size_t size() const { return levels_kbps.size(); }
    int top() const { return static_cast<int>(levels_kbps.size()) - 1; }
    double bitrate_bps(int level) const { return levels_kbps.at(static_cast<std::size_t>(level)) * 1e3; }
    double mbps(int level) const { return levels_kbps.at(static_cast<std::size_t>(level)) * 1e-3; }
    /// rho(a_l): bits in one chunk at level l.
    double chunk_size_bits(int level) const { return bitrate_bps(level) * chunk_duration_s; }

    static BitrateLadder standard() { return {{750, 1750, 2350, 3000, 4300, 7000}, 2.0}; }

    bool operator==(const BitrateLadder&) const = default;
};

inline void validate(const BitrateLadder& l) {
    detail::require(!l.levels_kbps.empty(), "ladder must not be empty");
    detail::require(l.chunk_duration_s > 0.0 && std::isfinite(l.chunk_duration_s), "chunk duration must be positive");
    for (std::size_t i = 0; i < l.levels_kbps.size(); ++i) {
        detail::require(std::isfinite(l.levels_kbps[i]) && l.levels_kbps[i] > 0.0, "ladder bitrates must be positive");
        if (i > 0) detail::require(l.levels_kbps[i] > l.levels_kbps[i - 1], "ladder must be strictly ascending");
    }
}

/// Regularly sampled link capacity in bits/s, oldest first.
struct CapacityHistory {
    double interval_s = 0.6;
    std::vector<double> samples;
    int window_n = 8;
};

struct MpcConfig {
    int horizon_m = 5;
    double qoe_alpha = 1.0;
    double qoe_beta = 4.3;

    bool operator==(const MpcConfig&) const = default;
};

inline void validate(const MpcConfig& c) {
    detail::require(c.horizon_m >= 1, "MPC horizon must be >= 1");
    detail::require(c.qoe_alpha >= 0.0 && c.qoe_beta >= 0.0, "QoE weights must be >= 0");
}

struct PlayerState {
    double buffer_s = 0.0;
    double buffer_max_s = 60.0;
    int last_level = -1;  // -1 before the first chunk
    double clock_s = 0.0;
};

/// What a capacity sample measures per slot.
enum class CapacityMeasure {
    Delivered,     // bits that got through: N * (1 - error)
    LinkCapacity,  // full-grid TB at the slot's MCS, zeroed on a failed transmission
};

inline double slot_sample_bits(const SlotRecord& r, CapacityMeasure m) {
    if (m == CapacityMeasure::Delivered) return static_cast<double>(r.delivered_bits());
    return r.transmitted() && r.error ? 0.0 : r.capacity_bits;
}

/// Slots per sampling interval; throws unless the interval is a whole
/// number of slots.
inline std::int64_t slots_per_interval(double interval_s, double slot_duration_s) {
    detail::require(interval_s > 0.0 && slot_duration_s > 0.0, "interval and slot duration must be positive");
    const double ratio = interval_s / slot_duration_s;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("sampling interval is not a whole number of slots");
    return static_cast<std::int64_t>(k);
}

/// Streaming form of `sample_capacity`: push slots, complete intervals
/// append to `history().samples`.
class CapacitySampler {
public:
    CapacitySampler(double interval_s, double slot_duration_s, int window_n,
                    CapacityMeasure measure = CapacityMeasure::Delivered)
        : per_interval_(slots_per_interval(interval_s, slot_duration_s)), measure_(measure) {
        detail::require(window_n >= 1, "history window must be >= 1");
        history_.interval_s = interval_s;
        history_.window_n = window_n;
    }

    void push(const SlotRecord& r) {
        acc_bits_ += slot_sample_bits(r, measure_);
        if (++count_ == per_interval_) {
            history_.samples.push_back(acc_bits_ / history_.interval_s);
            acc_bits_ = 0.0;
            count_ = 0;
        }
    }

    const CapacityHistory& history() const { return history_; }

    /// Rate over the slots of the interval still in progress, if any.
    std::optional<double> partial(double slot_duration_s) const {
        if (count_ == 0) return std::nullopt;
        return acc_bits_ / (static_cast<double>(count_) * slot_duration_s);
    }

private:
    std::int64_t per_interval_;
    CapacityMeasure measure_;
    CapacityHistory history_;
    double acc_bits_ = 0.0;
    std::int64_t count_ = 0;
};

/// One sample per complete interval of the slot log; a trailing partial
/// interval is dropped.
inline CapacityHistory sample_capacity(std::span<const SlotRecord> slot_log, double interval_s,
                                       double slot_duration_s, CapacityMeasure measure = CapacityMeasure::Delivered,
                                       int window_n = 8) {
    CapacitySampler s(interval_s, slot_duration_s, window_n, measure);
    for (const auto& r : slot_log) s.push(r);
    return s.history();
}

inline constexpr double kMinCapacitySample = 1.0;  // bits/s floor before inversion

/// Harmonic mean of the last min(N, len) samples.
inline double harmonic_mean_predict(const CapacityHistory& h) {
    if (h.samples.empty()) throw InvalidArgument("harmonic_mean_predict: empty history");
    detail::require(h.window_n >= 1, "history window must be >= 1");
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(h.window_n), h.samples.size());
    double inv = 0.0;
    for (std::size_t i = h.samples.size() - n; i < h.samples.size(); ++i) {
        detail::require(h.samples[i] >= 0.0, "capacity samples must be >= 0");
        inv += 1.0 / std::max(h.samples[i], kMinCapacitySample);
    }
    return static_cast<double>(n) / inv;
}

/// Per-chunk QoE: a - alpha*|a - a_prev| - beta*phi, bitrates in Mbps.
inline double qoe_chunk(double level_kbps, double prev_level_kbps, double rebuffer_s, double alpha, double beta) {
    const double a = level_kbps * 1e-3;
    const double prev = prev_level_kbps * 1e-3;
    return a - alpha * std::abs(a - prev) - beta * rebuffer_s;
}

/// Time to fetch `size_bits` starting `start_offset_s` into the horizon when
/// capacity is held at `predictions[j]` during interval j (the last value
/// repeats past the end). Capacity is accumulated interval by interval until
/// the chunk is covered.
inline double predicted_download_time(double size_bits, double start_offset_s, std::span<const double> predictions,
                                      double interval_s) {
    detail::require(!predictions.empty(), "no capacity prediction");
    auto rate = [&](std::size_t j) {
        return std::max(predictions[std::min(j, predictions.size() - 1)], kMinCapacitySample);
    };
    if (size_bits <= 0.0) return 0.0;
    std::size_t j = static_cast<std::size_t>(std::floor(start_offset_s / interval_s + 1e-12));
    double t = start_offset_s;
    double remaining = size_bits;
    // once past the explicit predictions the rate is constant: finish in closed form
    while (j + 1 < predictions.size()) {
        const double end = static_cast<double>(j + 1) * interval_s;
        const double can = rate(j) * (end - t);
        if (can >= remaining) return t + remaining / rate(j) - start_offset_s;
        remaining -= can;
        t = end;
        ++j;
    }
    return t + remaining / rate(j) - start_offset_s;
}

struct MpcDecision {
    int level = 0;
    double predicted_bps = 0.0;
    double best_qoe = 0.0;
};

inline constexpr double kMpcTieTolerance = 1e-9;

namespace detail {

struct MpcSearch {
    const BitrateLadder& ladder;
    const MpcConfig& cfg;
    std::span<const double> predictions;
    double interval_s;
    double buffer_max_s;
    double paced_from_s;
    int first = 0;
    double best = -std::numeric_limits<double>::infinity();

    // Depth-first over traces in ascending level order; a total must beat the
    // incumbent by more than rounding noise to replace it, so the earliest
    // trace in lexicographic order wins ties.
    void dfs(int depth, int first_level, int prev_level, double buffer_s, double elapsed_s, double qoe) {
        if (depth == cfg.horizon_m) {
            if (qoe > best + kMpcTieTolerance) {
                best = qoe;
                first = first_level;
            }
            return;
        }
        for (int l = 0; l <= ladder.top(); ++l) {
            double d = predicted_download_time(ladder.chunk_size_bits(l), elapsed_s, predictions, interval_s);
            if (buffer_s >= paced_from_s) d = std::max(d, ladder.chunk_duration_s);
            const double phi = rebuffer_time(d, buffer_s);
            const double prev_kbps = ladder.levels_kbps[static_cast<std::size_t>(prev_level < 0 ? l : prev_level)];
            const double q = qoe_chunk(ladder.levels_kbps[static_cast<std::size_t>(l)], prev_kbps, phi,
                                       cfg.qoe_alpha, cfg.qoe_beta);
            const double next_b = advance_buffer(buffer_s, d, ladder.chunk_duration_s, buffer_max_s);
            dfs(depth + 1, depth == 0 ? l : first_level, l, next_b, elapsed_s + d, qoe + q);
        }
    }
};

}  // namespace detail

/// MPC planner over explicit per-interval predictions. When the buffer at a
/// chunk request is at least `paced_from_s`, the simulated download takes at
/// least one chunk duration, mirroring a link paced to the chunk bitrate.
inline MpcDecision mpc_plan(const PlayerState& state, const BitrateLadder& ladder,
                            std::span<const double> predictions, double interval_s, const MpcConfig& cfg,
                            double paced_from_s = std::numeric_limits<double>::infinity()) {
    validate(cfg);
    detail::require(interval_s > 0.0, "interval must be positive");
    detail::require(state.buffer_s >= 0.0 && state.buffer_s <= state.buffer_max_s, "buffer outside [0, max]");
    detail::require(state.last_level < static_cast<int>(ladder.size()), "last level outside ladder");
    detail::require(paced_from_s >= 0.0, "paced_from_s must be >= 0");
    detail::MpcSearch s{ladder, cfg, predictions, interval_s, state.buffer_max_s, paced_from_s};
    s.dfs(0, 0, state.last_level, state.buffer_s, 0.0, 0.0);
    return {s.first, predictions.empty() ? 0.0 : predictions.front(), s.best};
}

/// MPC with one harmonic-mean prediction held across the horizon. Returns
/// the lowest level when there is no history yet.
inline MpcDecision mpc_decide(const PlayerState& state, const BitrateLadder& ladder, const CapacityHistory& history,
                              const MpcConfig& cfg,
                              double paced_from_s = std::numeric_limits<double>::infinity()) {
    if (history.samples.empty()) return {0, 0.0, 0.0};
    const double pred = harmonic_mean_predict(history);
    return mpc_plan(state, ladder, std::span<const double>(&pred, 1), history.interval_s, cfg, paced_from_s);
}

inline int mpc_select(const PlayerState& state, const BitrateLadder& ladder, const CapacityHistory& history,
                      const MpcConfig& cfg) {
    return mpc_decide(state, ladder, history, cfg).level;
}

/// Highest level at or below `predicted_bps`; level 0 if none.
inline int rate_based_select_for(double predicted_bps, const BitrateLadder& ladder) {
    int level = 0;
    for (int l = 0; l <= ladder.top(); ++l)
        if (ladder.bitrate_bps(l) <= predicted_bps) level = l;
    return level;
}

inline int rate_based_select(const CapacityHistory& history, const BitrateLadder& ladder) {
    if (history.samples.empty()) return 0;
    return rate_based_select_for(harmonic_mean_predict(history), ladder);
}

/// Linear buffer map: level 0 up to the reservoir, top level from
/// reservoir + cushion on, floor of the linear interpolation in between.
inline int buffer_based_select(const PlayerState& state, const BitrateLadder& ladder, double reservoir_s,
                               double cushion_s) {
    if (!(reservoir_s >= 0.0 && cushion_s > 0.0))
        throw InvalidArgument("buffer_based_select: need reservoir >= 0 and cushion > 0");
    if (reservoir_s >= cushion_s) throw InvalidArgument("buffer_based_select: reservoir must be below cushion");
    const double b = state.buffer_s;
    if (b <= reservoir_s) return 0;
    if (b >= reservoir_s + cushion_s) return ladder.top();
    const double frac = (b - reservoir_s) / cushion_s;
    return std::clamp(static_cast<int>(std::floor(frac * ladder.top())), 0, ladder.top());
}

/// Highest level whose chunk downloads within the current buffer at
/// `safety` times the predicted capacity.
inline int hybrid_select(const PlayerState& state, const CapacityHistory& history, const BitrateLadder& ladder,
                         double safety) {
    detail::require(safety > 0.0 && safety <= 1.0, "hybrid safety must be in (0,1]");
    if (history.samples.empty()) return 0;
    const double rate = safety * harmonic_mean_predict(history);
    int level = 0;
    for (int l = 0; l <= ladder.top(); ++l)
        if (ladder.chunk_size_bits(l) / rate <= state.buffer_s) level = l;
    return level;
}

}  // namespace xlsim
