#pragma once

// Per-slot SNR processes and the ground-truth block-error oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xlsim/error.hpp"
#include "xlsim/mcs_table.hpp"
#include "xlsim/random.hpp"

namespace xlsim {

enum class ChannelKind { Constant, FadedAr1, TwoStateMarkov, TraceReplay };

struct MarkovParams {
    double good_snr_db = 5.0;
    double bad_snr_db = -5.0;
    double p_good_to_bad = 0.0005;  // per slot
    double p_bad_to_good = 0.002;   // per slot

    bool operator==(const MarkovParams&) const = default;
};

struct ChannelModel {
    ChannelKind kind = ChannelKind::Constant;
    double mean_snr_db = 0.0;
    double swing_db = 0.0;          // sinusoid amplitude
    double swing_period_s = 40.0;   // sinusoid period
    double doppler_hz = 10.0;       // sets the AR(1) coefficient
    double ar1_sigma_db = 0.0;      // stationary std-dev of the fading term
    MarkovParams markov;
    std::optional<std::string> trace_path;

    bool operator==(const ChannelModel&) const = default;
};

/// Ground-truth SNR per slot plus the CSI impairments the link adaptor sees.
struct SnrTrace {
    double slot_duration_s = 1e-3;
    std::vector<double> samples;
    double estimation_noise_sigma_db = 1.0;
    int report_delay_slots = 4;
};

/// AR(1) correlation for a given Doppler: exp(-2*pi*f_d*dT).
inline double ar1_coefficient(double doppler_hz, double slot_duration_s) {
    return std::exp(-2.0 * std::numbers::pi * doppler_hz * slot_duration_s);
}

/// A stationary model is one whose marginal SNR distribution does not drift
/// with time.
inline bool is_stationary(const ChannelModel& m) {
    switch (m.kind) {
        case ChannelKind::Constant: return true;
        case ChannelKind::FadedAr1: return m.swing_db == 0.0;
        case ChannelKind::TwoStateMarkov: return true;
        case ChannelKind::TraceReplay: return false;
    }
    return false;
}

/// One SNR-in-dB float per line; blank lines are skipped.
inline std::vector<double> read_snr_trace_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read SNR trace '" + path + "'");
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(line, &used);
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
        }
        if (!std::isfinite(v)) throw IoError(path + ":" + std::to_string(lineno) + ": non-finite SNR");
        out.push_back(v);
    }
    if (out.empty()) throw IoError("SNR trace '" + path + "' is empty");
    return out;
}

inline void validate(const ChannelModel& m) {
    using detail::require;
    require(std::isfinite(m.mean_snr_db) && std::isfinite(m.swing_db) && std::isfinite(m.swing_period_s) &&
                std::isfinite(m.doppler_hz) && std::isfinite(m.ar1_sigma_db),
            "channel parameters must be finite");
    require(m.swing_db >= 0.0, "swing_db must be >= 0");
    require(m.swing_period_s > 0.0, "swing_period_s must be > 0");
    require(m.doppler_hz >= 0.0, "doppler_hz must be >= 0");
    require(m.ar1_sigma_db >= 0.0, "ar1_sigma_db must be >= 0");
    const auto& mk = m.markov;
    require(std::isfinite(mk.good_snr_db) && std::isfinite(mk.bad_snr_db), "markov SNRs must be finite");
    require(mk.p_good_to_bad >= 0.0 && mk.p_good_to_bad <= 1.0 && mk.p_bad_to_good >= 0.0 &&
                mk.p_bad_to_good <= 1.0,
            "markov transition probabilities must be in [0,1]");
    if (m.kind == ChannelKind::TraceReplay) require(m.trace_path.has_value(), "TraceReplay needs trace_path");
}

/// Incremental SNR generator. `gen_snr_trace` is this process collected over
/// n slots, so a trace of n slots is always a prefix of a longer one.
class ChannelProcess {
public:
    ChannelProcess(const ChannelModel& model, double slot_duration_s, std::uint64_t seed)
        : model_(model), dt_(slot_duration_s), rng_(make_rng(seed, streams::kChannel)) {
        validate(model_);
        detail::require(slot_duration_s > 0.0 && std::isfinite(slot_duration_s), "slot_duration_s must be > 0");
        rho_ = ar1_coefficient(model_.doppler_hz, dt_);
        detail::require((rho_ >= 0.0 && rho_ < 1.0) || model_.ar1_sigma_db == 0.0,
                        "AR(1) coefficient must be in [0,1); use doppler_hz > 0");
        if (model_.kind == ChannelKind::FadedAr1)
            phase_ = 2.0 * std::numbers::pi * uniform01(rng_);
        if (model_.kind == ChannelKind::TwoStateMarkov) {
            const auto& mk = model_.markov;
            double denom = mk.p_good_to_bad + mk.p_bad_to_good;
            double p_bad = denom > 0.0 ? mk.p_good_to_bad / denom : 0.0;
            bad_ = uniform01(rng_) < p_bad;
        }
        if (model_.kind == ChannelKind::TraceReplay) replay_ = read_snr_trace_file(*model_.trace_path);
        if (model_.ar1_sigma_db > 0.0) fade_ = model_.ar1_sigma_db * normal_(rng_);
    }

    double next() {
        const std::size_t t = t_++;
        switch (model_.kind) {
            case ChannelKind::Constant: return model_.mean_snr_db;
            case ChannelKind::TraceReplay: return replay_[t % replay_.size()];
            case ChannelKind::FadedAr1: {
                double time = static_cast<double>(t) * dt_;
                double slow = model_.swing_db * std::sin(2.0 * std::numbers::pi * time / model_.swing_period_s + phase_);
                return model_.mean_snr_db + slow + step_fading();
            }
            case ChannelKind::TwoStateMarkov: {
                const auto& mk = model_.markov;
                if (t > 0) {
                    double u = uniform01(rng_);
                    if (bad_ ? u < mk.p_bad_to_good : u < mk.p_good_to_bad) bad_ = !bad_;
                }
                return (bad_ ? mk.bad_snr_db : mk.good_snr_db) + step_fading();
            }
        }
        return model_.mean_snr_db;
    }

private:
    double step_fading() {
        if (model_.ar1_sigma_db == 0.0) return 0.0;
        if (started_) {
            double innov = std::sqrt(1.0 - rho_ * rho_) * model_.ar1_sigma_db;
            fade_ = rho_ * fade_ + innov * normal_(rng_);
        }
        started_ = true;
        return fade_;
    }

    ChannelModel model_;
    double dt_;
    Rng rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double rho_ = 0.0;
    double phase_ = 0.0;
    double fade_ = 0.0;
    bool started_ = false;
    bool bad_ = false;
    std::vector<double> replay_;
    std::size_t t_ = 0;
};

inline SnrTrace gen_snr_trace(const ChannelModel& model, std::size_t n_slots, double slot_duration_s,
                              std::uint64_t seed) {
    detail::require(n_slots >= 1, "n_slots must be >= 1");
    ChannelProcess proc(model, slot_duration_s, seed);
    SnrTrace tr;
    tr.slot_duration_s = slot_duration_s;
    tr.samples.reserve(n_slots);
    for (std::size_t i = 0; i < n_slots; ++i) tr.samples.push_back(proc.next());
    return tr;
}

/// CSI as seen by the transmitter: the ground truth `report_delay_slots` ago
/// (clamped at slot 0) plus Gaussian estimation noise. One normal draw per call.
template <class G>
double estimated_snr(const SnrTrace& trace, std::size_t slot, G& rng) {
    detail::require(slot < trace.samples.size(), "slot outside trace");
    std::size_t delay = static_cast<std::size_t>(trace.report_delay_slots);
    std::size_t src = slot >= delay ? slot - delay : 0;
    double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    return trace.samples[src] + trace.estimation_noise_sigma_db * z;
}

enum class BlerKind { ErfModel, LogisticFit };

struct BlerModel {
    BlerKind kind = BlerKind::ErfModel;
    double alpha_db = 0.0;   // ErfModel offset
    double alpha0 = 1.0;     // LogisticFit slope
    double alpha1 = -1.11;   // LogisticFit offset
    double s = 1.0;          // LogisticFit shape

    bool operator==(const BlerModel&) const = default;
};

/// Gaussian upper tail: Q(x) = P(Z > x).
inline double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Ground-truth block-error probability of MCS `mcs` at SNR `snr_db`.
///
/// ErfModel: Q(snr - threshold + alpha).
/// LogisticFit: 1 / (1 + exp(-alpha0*d - alpha1))^s where d is the SNR
/// deficit threshold - snr, so larger deficits raise the error rate.
inline double true_bler(double snr_db, int mcs, const McsTable& table, const BlerModel& model) {
    const double margin = snr_db - table.at(mcs).snr_threshold_db;
    double p = 0.0;
    if (model.kind == BlerKind::ErfModel) {
        p = gaussian_tail(margin + model.alpha_db);
    } else {
        detail::require(model.s > 0.0, "LogisticFit requires s > 0");
        const double deficit = -margin;
        p = std::pow(1.0 + std::exp(-model.alpha0 * deficit - model.alpha1), -model.s);
    }
    if (std::isnan(p)) return snr_db < table.at(mcs).snr_threshold_db ? 1.0 : 0.0;
    return std::clamp(p, 0.0, 1.0);
}

template <class G>
bool sample_block_error(double bler, G& rng) {
    detail::require(bler >= 0.0 && bler <= 1.0, "bler must be in [0,1]");
    return uniform01(rng) < bler;
}

}  // namespace xlsim
