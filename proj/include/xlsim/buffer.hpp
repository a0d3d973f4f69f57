#pragma once

// Playback buffer dynamics shared by the player model and the ABR planners.

#include <algorithm>

#include "xlsim/error.hpp"

namespace xlsim {

/// Stall time while downloading for `download_s` from a buffer of `buffer_s`.
inline double rebuffer_time(double download_s, double buffer_s) {
    detail::require(download_s >= 0.0 && buffer_s >= 0.0, "rebuffer_time: negative input");
    return std::max(download_s - buffer_s, 0.0);
}

/// Buffer after one download: drain (floored at empty), then add a chunk,
/// capped at buffer_max_s.
inline double advance_buffer(double buffer_s, double download_s, double chunk_duration_s, double buffer_max_s) {
    detail::require(buffer_s >= 0.0 && download_s >= 0.0 && chunk_duration_s >= 0.0 && buffer_max_s >= 0.0,
                    "advance_buffer: negative input");
    return std::clamp(std::max(buffer_s - download_s, 0.0) + chunk_duration_s, 0.0, buffer_max_s);
}

/// (t_{i+1} - t_i) / T_chunk: 1 is a perfect match, above 1 means the link
/// was slower than the bitrate.
inline double rate_utilization(double start_s, double next_start_s, double chunk_duration_s) {
    detail::require(next_start_s > start_s, "rate_utilization: timestamps must increase");
    detail::require(chunk_duration_s > 0.0, "rate_utilization: chunk duration must be positive");
    return (next_start_s - start_s) / chunk_duration_s;
}

}  // namespace xlsim
