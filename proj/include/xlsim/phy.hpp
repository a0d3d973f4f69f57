#pragma once

// Link abstraction and link adaptation: TB sizing, EESM, the Shannon ceiling,
// and the 3GPP-lookup / OLLA / soft-ACK controllers with their fixed points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>

#include "xlsim/channel.hpp"
#include "xlsim/error.hpp"
#include "xlsim/mcs_table.hpp"

namespace xlsim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class EesmConvention { AsWritten, Conventional };

/// Exponential effective SNR mapping over per-resource-element linear SNRs.
///
/// AsWritten:    beta * ln(mean(exp(g/beta)))
/// Conventional: -beta * ln(mean(exp(-g/beta)))
/// Returns dB. Both reduce to the common value on uniform input.
inline double eesm(std::span<const double> per_re_snrs_linear, double beta,
                   EesmConvention convention = EesmConvention::Conventional) {
    detail::require(!per_re_snrs_linear.empty(), "eesm: empty SNR list");
    detail::require(beta > 0.0, "eesm: beta must be positive");
    const double sign = convention == EesmConvention::Conventional ? -1.0 : 1.0;
    // log-sum-exp for stability
    double peak = -std::numeric_limits<double>::infinity();
    for (double g : per_re_snrs_linear) {
        detail::require(g > 0.0, "eesm: SNRs must be positive");
        peak = std::max(peak, sign * g / beta);
    }
    double acc = 0.0;
    for (double g : per_re_snrs_linear) acc += std::exp(sign * g / beta - peak);
    const double log_mean = peak + std::log(acc / static_cast<double>(per_re_snrs_linear.size()));
    return linear_to_db(sign * beta * log_mean);
}

/// Largest MCS whose threshold is <= snr_db; clamps to the table ends.
inline int mcs_lookup(double snr_db, const McsTable& table) {
    const auto& e = table.entries();
    auto it = std::upper_bound(e.begin(), e.end(), snr_db,
                               [](double s, const McsEntry& m) { return s < m.snr_threshold_db; });
    if (it == e.begin()) return table.min_index();
    return std::prev(it)->index;
}

/// Transport block size N(mcs, n_rbs) in bits.
inline std::int64_t tb_size(int mcs, int n_rbs, const McsTable& table) {
    detail::require(n_rbs >= 0, "tb_size: n_rbs must be >= 0");
    const double eff = table.at(mcs).efficiency;
    if (n_rbs == 0) return 0;
    const double bits = eff * table.res_per_rb_per_slot() * n_rbs;
    return static_cast<std::int64_t>(std::floor(bits + 1e-9));
}

/// e * log2(1 + snr/e), the per-slot capacity term with `snr_db` the SNR
/// aggregated over the allocation.
inline double shannon_bound(int n_rbs, double snr_db) {
    detail::require(n_rbs >= 1, "shannon_bound: n_rbs must be >= 1");
    const double e = n_rbs;
    return e * std::log2(1.0 + db_to_linear(snr_db) / e);
}

/// Bits per slot the channel can carry on `n_rbs` RBs at per-RE SNR
/// `per_re_snr_db`. The aggregate SNR fed to `shannon_bound` is n_rbs times
/// the per-RE SNR, and the result is scaled by resource elements per RB, so
/// the ceiling equals res * n_rbs * log2(1 + snr_re).
inline double slot_capacity_bits(int n_rbs, double per_re_snr_db, int res_per_rb_per_slot) {
    if (n_rbs <= 0) return 0.0;
    const double aggregate_db = per_re_snr_db + linear_to_db(static_cast<double>(n_rbs));
    return res_per_rb_per_slot * shannon_bound(n_rbs, aggregate_db);
}

enum class LinkAdaptMode { Lookup3gpp, Olla, SoftAck };
enum class HarqFeedback { Ack, Nack, HighMarginAck, LowMarginAck };

inline std::string_view to_string(LinkAdaptMode m) {
    switch (m) {
        case LinkAdaptMode::Lookup3gpp: return "3gpp";
        case LinkAdaptMode::Olla: return "olla";
        case LinkAdaptMode::SoftAck: return "soft";
    }
    return "?";
}

inline std::string_view to_string(HarqFeedback f) {
    switch (f) {
        case HarqFeedback::Ack: return "ack";
        case HarqFeedback::Nack: return "nack";
        case HarqFeedback::HighMarginAck: return "high_ack";
        case HarqFeedback::LowMarginAck: return "low_ack";
    }
    return "?";
}

struct LinkAdaptState {
    LinkAdaptMode mode = LinkAdaptMode::SoftAck;
    double offset_db = 0.0;
    double delta_up_db = 0.4;
    double delta_down_db = 0.4 / 9.0;
    double phi = 0.92;
    double offset_min_db = -3.0;
    double offset_max_db = 3.0;
    double erf_alpha_db = -1.5;

    bool operator==(const LinkAdaptState&) const = default;
};

inline void validate(const LinkAdaptState& s) {
    using detail::require;
    require(s.delta_up_db > 0.0 && s.delta_down_db > 0.0, "link adaptation steps must be positive");
    require(s.phi > 0.0 && s.phi < 1.0, "phi must be in (0,1)");
    require(s.offset_min_db <= s.offset_max_db, "offset bounds inverted");
    require(std::isfinite(s.erf_alpha_db), "erf_alpha must be finite");
}

/// Offset update on HARQ feedback: NACK / low-margin ACK raise the offset by
/// delta_up, ACK / high-margin ACK lower it by delta_down. Clamped to bounds.
inline LinkAdaptState olla_update(LinkAdaptState state, HarqFeedback feedback) {
    switch (feedback) {
        case HarqFeedback::Nack:
        case HarqFeedback::LowMarginAck: state.offset_db += state.delta_up_db; break;
        case HarqFeedback::Ack:
        case HarqFeedback::HighMarginAck: state.offset_db -= state.delta_down_db; break;
    }
    state.offset_db = std::clamp(state.offset_db, state.offset_min_db, state.offset_max_db);
    return state;
}

/// Parametric BLER estimate 1 - (1 + erf((snr - threshold + alpha)/sqrt2)) / 2.
inline double estimate_bler(double snr_db, int mcs, const McsTable& table, double alpha_db) {
    const double x = snr_db - table.at(mcs).snr_threshold_db + alpha_db;
    return std::clamp(1.0 - 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2)), 0.0, 1.0);
}

/// High-margin iff the estimate is at or below phi.
inline HarqFeedback classify_ack(double bler_estimate, double phi) {
    return bler_estimate <= phi ? HarqFeedback::HighMarginAck : HarqFeedback::LowMarginAck;
}

struct LinkAdaptStep {
    int mcs = 1;
    LinkAdaptState state;
    double adjusted_snr_db = 0.0;   // estimate minus the offset in force this slot
    double bler_estimate = 0.0;     // parametric estimate at (adjusted_snr, mcs)
    std::optional<HarqFeedback> applied;  // feedback after soft reclassification
};

/// One transmission decision. The offset in force is subtracted from the CSI
/// estimate and the MCS is looked up; then the previous HARQ feedback (soft-
/// reclassified when it was a raw ACK in SoftAck mode) updates the offset for
/// the next transmission.
inline LinkAdaptStep link_adapt_step(const LinkAdaptState& state, double snr_estimate_db,
                                     std::optional<HarqFeedback> prev_feedback, const McsTable& table) {
    LinkAdaptStep out;
    out.state = state;
    const bool uses_offset = state.mode != LinkAdaptMode::Lookup3gpp;
    out.adjusted_snr_db = uses_offset ? snr_estimate_db - state.offset_db : snr_estimate_db;
    out.mcs = mcs_lookup(out.adjusted_snr_db, table);
    out.bler_estimate = estimate_bler(out.adjusted_snr_db, out.mcs, table, state.erf_alpha_db);
    if (!uses_offset || !prev_feedback) return out;

    HarqFeedback fb = *prev_feedback;
    if (state.mode == LinkAdaptMode::SoftAck && fb == HarqFeedback::Ack)
        fb = classify_ack(out.bler_estimate, state.phi);
    out.applied = fb;
    out.state = olla_update(state, fb);
    return out;
}

/// Long-run OLLA BLER: 1 / (1 + up/down).
inline double olla_fixed_point(double delta_up, double delta_down) {
    detail::require(delta_up > 0.0 && delta_down > 0.0, "steps must be positive");
    return 1.0 / (1.0 + delta_up / delta_down);
}

/// Long-run soft-ACK BLER given the high-margin share eta_phi of ACKs:
/// ((1 - 1/eta_phi) * r + 1) / (1 + r), r = up/down.
inline double soft_fixed_point(double delta_up, double delta_down, double eta_phi) {
    detail::require(delta_up > 0.0 && delta_down > 0.0, "steps must be positive");
    detail::require(eta_phi > 0.0 && eta_phi <= 1.0, "eta_phi must be in (0,1]");
    const double r = delta_up / delta_down;
    return ((1.0 - 1.0 / eta_phi) * r + 1.0) / (1.0 + r);
}

/// 2e / |alpha1| with the fitted alpha1 = -1.11.
inline constexpr double kStepSumLimit = 2.0 * std::numbers::e / 1.11;

struct ConvergenceConditions {
    double step_limit = kStepSumLimit;
    bool olla_step_sum_ok = false;       // up + down < limit
    std::optional<double> eta_phi_lower_bound;  // 1 / (1 + down/up)
    std::optional<bool> soft_eta_ok;     // eta_phi >= lower bound
    bool soft_step_up_ok = false;        // up < limit

    bool olla_ok() const { return olla_step_sum_ok; }
    bool soft_ok() const { return soft_step_up_ok && soft_eta_ok.value_or(false); }
};

inline ConvergenceConditions check_convergence_conditions(double delta_up, double delta_down,
                                                          std::optional<double> eta_phi = std::nullopt) {
    detail::require(delta_up > 0.0 && delta_down > 0.0, "steps must be positive");
    ConvergenceConditions c;
    c.olla_step_sum_ok = delta_up + delta_down < kStepSumLimit;
    c.soft_step_up_ok = delta_up < kStepSumLimit;
    if (eta_phi) {
        c.eta_phi_lower_bound = 1.0 / (1.0 + delta_down / delta_up);
        c.soft_eta_ok = *eta_phi >= *c.eta_phi_lower_bound;
    }
    return c;
}

}  // namespace xlsim
