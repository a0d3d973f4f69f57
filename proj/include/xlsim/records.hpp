#pragma once

#include <cstdint>
#include <optional>

#include "xlsim/phy.hpp"

namespace xlsim {

/// Outcome of one slot.
struct SlotRecord {
    std::int64_t t = 0;
    double true_snr_db = 0.0;
    double est_snr_db = 0.0;
    double offset_db = 0.0;       // offset in force when the MCS was chosen
    int mcs = 1;
    int rbs = 0;                  // e_t; 0 means nothing was sent
    std::int64_t tb_bits = 0;     // N(tau, e)
    bool error = false;
    std::optional<HarqFeedback> feedback;  // feedback applied to the offset this slot
    int attempt = 0;              // 1 = first transmission, 0 = idle
    double capacity_bits = 0.0;   // full-grid bits the link could carry this slot

    std::int64_t delivered_bits() const { return error ? 0 : tb_bits; }
    bool transmitted() const { return rbs > 0 && tb_bits > 0; }
};

}  // namespace xlsim
