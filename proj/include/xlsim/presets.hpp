#pragma once

// Built-in scenario presets.

#include <string>
#include <string_view>
#include <vector>

#include "xlsim/engine.hpp"

namespace xlsim {

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"static", "dynamic", "high_snr"};
    return names;
}

/// static: 0 dB mean with a slow +-5 dB swing and low Doppler.
/// dynamic: same SNR profile with high Doppler fading.
/// high_snr: static profile lifted to a 10 dB mean.
inline SessionConfig preset_config(std::string_view name) {
    SessionConfig c;
    c.channel.kind = ChannelKind::FadedAr1;
    c.channel.mean_snr_db = 0.0;
    c.channel.swing_db = 5.0;
    c.channel.swing_period_s = 200.0;
    c.channel.doppler_hz = 10.0;
    c.channel.ar1_sigma_db = 1.0;
    if (name == "static") return c;
    if (name == "dynamic") {
        c.channel.doppler_hz = 50.0;
        c.channel.ar1_sigma_db = 3.0;
        return c;
    }
    if (name == "high_snr") {
        c.channel.mean_snr_db = 10.0;
        return c;
    }
    throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

/// Named method bundles used by `compare`: MPC-S is the full cross-layer
/// stack, MPC-a drops VRA, MPC-b also drops soft-ACK, and the three
/// baselines run on 3GPP lookup with the full grid.
inline const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"MPC-S", "MPC-a", "MPC-b", "FESTIVE", "BBA", "HYB"};
    return names;
}

inline SessionConfig apply_method(SessionConfig c, std::string_view method) {
    c.mac.policy = RaPolicy::FullGrid;
    c.link.mode = LinkAdaptMode::Lookup3gpp;
    c.capacity_source = CapacitySource::PhyLink;
    if (method == "MPC-S") {
        c.abr = AbrKind::Mpc;
        c.link.mode = LinkAdaptMode::SoftAck;
        c.mac.policy = RaPolicy::Vra;
    } else if (method == "MPC-a") {
        c.abr = AbrKind::Mpc;
        c.link.mode = LinkAdaptMode::SoftAck;
    } else if (method == "MPC-b") {
        c.abr = AbrKind::Mpc;
    } else if (method == "FESTIVE") {
        c.abr = AbrKind::RateBased;
        c.capacity_source = CapacitySource::Chunk;
    } else if (method == "BBA") {
        c.abr = AbrKind::BufferBased;
    } else if (method == "HYB") {
        c.abr = AbrKind::Hybrid;
        c.capacity_source = CapacitySource::Chunk;
    } else {
        throw InvalidArgument("unknown method '" + std::string(method) + "'");
    }
    return c;
}

}  // namespace xlsim
