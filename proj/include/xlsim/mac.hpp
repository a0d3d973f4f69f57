#pragma once

// Per-TTI resource-block allocation.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "xlsim/error.hpp"
#include "xlsim/mcs_table.hpp"
#include "xlsim/phy.hpp"

namespace xlsim {

enum class RaPolicy { FullGrid, Vra };

inline std::string_view to_string(RaPolicy p) { return p == RaPolicy::FullGrid ? "full" : "vra"; }

struct MacConfig {
    int e_max = 52;
    int slots_per_tti = 1;
    RaPolicy policy = RaPolicy::Vra;
    // Target the bits still owed over the time still left instead of the
    // whole chunk over the whole chunk duration.
    bool remaining_aware = false;
    // Transmissions averaged for the error-rate estimate that scales the target.
    int bler_window = 200;

    bool operator==(const MacConfig&) const = default;
};

inline void validate(const MacConfig& c) {
    detail::require(c.e_max >= 1, "e_max must be >= 1");
    detail::require(c.slots_per_tti >= 1, "slots_per_tti must be >= 1");
    detail::require(c.bler_window >= 1, "bler_window must be >= 1");
}

/// Per-slot TB size that delivers `chunk_size_bits` in `chunk_duration_s`
/// after losing a fraction `bler_estimate` of blocks:
///   N0 = rho * dT_slot / ((1 - bler) * T_chunk)
inline double target_tb_size(double chunk_size_bits, double bler_estimate, double chunk_duration_s,
                             double slot_duration_s) {
    detail::require(bler_estimate >= 0.0 && bler_estimate < 1.0, "bler_estimate must be in [0,1)");
    detail::require(chunk_duration_s > 0.0 && slot_duration_s > 0.0, "durations must be positive");
    detail::require(chunk_size_bits >= 0.0, "chunk size must be >= 0");
    const double n0 = chunk_size_bits * slot_duration_s / ((1.0 - bler_estimate) * chunk_duration_s);
    if (!std::isfinite(n0)) throw InvalidArgument("target TB size overflow");
    return n0;
}

/// RB count in [0, e_max] whose TB size is nearest to `target_tb_bits`; ties go
/// to the smaller count. tb_size is monotone in the RB count, so only the two
/// counts bracketing the target need comparing.
inline int vra_allocate(double target_tb_bits, int mcs, const McsTable& table, int e_max) {
    detail::require(target_tb_bits >= 0.0, "target TB size must be >= 0");
    detail::require(e_max >= 0, "e_max must be >= 0");
    int lo = 0, hi = e_max;  // find first e with tb_size >= target
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (static_cast<double>(tb_size(mcs, mid, table)) >= target_tb_bits)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == 0) return 0;
    const double above = std::abs(static_cast<double>(tb_size(mcs, lo, table)) - target_tb_bits);
    const double below = std::abs(static_cast<double>(tb_size(mcs, lo - 1, table)) - target_tb_bits);
    return below <= above ? lo - 1 : lo;
}

inline int full_grid_allocate(int e_max) { return e_max; }

/// Two-layer multi-user split: elementwise product of the first-layer shares
/// and each user's single-user RB ratio, renormalised. Uniform when the
/// product vanishes.
inline std::vector<double> multi_user_scale(std::span<const double> base_proportions,
                                            std::span<const double> vra_ratios) {
    if (base_proportions.size() != vra_ratios.size())
        throw InvalidArgument("multi_user_scale: length mismatch");
    detail::require(!base_proportions.empty(), "multi_user_scale: empty input");
    const double base_sum = std::accumulate(base_proportions.begin(), base_proportions.end(), 0.0);
    detail::require(std::abs(base_sum - 1.0) <= 1e-6, "base proportions must sum to 1");
    std::vector<double> out(base_proportions.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        detail::require(vra_ratios[i] >= 0.0 && vra_ratios[i] <= 1.0, "ratios must be in [0,1]");
        detail::require(base_proportions[i] >= 0.0, "proportions must be >= 0");
        out[i] = base_proportions[i] * vra_ratios[i];
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total <= 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
        return out;
    }
    for (double& v : out) v /= total;
    return out;
}

}  // namespace xlsim
