#pragma once

// Closed-loop session driver: per-slot link adaptation and HARQ, per-TTI RB
// allocation, per-chunk bitrate decisions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlsim/abr.hpp"
#include "xlsim/channel.hpp"
#include "xlsim/mac.hpp"
#include "xlsim/mcs_table.hpp"
#include "xlsim/phy.hpp"
#include "xlsim/playback.hpp"
#include "xlsim/random.hpp"
#include "xlsim/records.hpp"

namespace xlsim {

enum class AbrKind { Mpc, RateBased, BufferBased, Hybrid };

inline std::string_view to_string(AbrKind k) {
    switch (k) {
        case AbrKind::Mpc: return "mpc";
        case AbrKind::RateBased: return "rate";
        case AbrKind::BufferBased: return "bba";
        case AbrKind::Hybrid: return "hybrid";
    }
    return "?";
}

/// Where the capacity history fed to the ABR comes from.
enum class CapacitySource {
    PhyLink,       // regularly sampled full-grid link capacity
    PhyDelivered,  // regularly sampled delivered bits
    Chunk,         // one sample per chunk: its download throughput
};

inline std::string_view to_string(CapacitySource s) {
    switch (s) {
        case CapacitySource::PhyLink: return "phy_link";
        case CapacitySource::PhyDelivered: return "phy_delivered";
        case CapacitySource::Chunk: return "chunk";
    }
    return "?";
}

/// How the MPC planner models a chunk download.
enum class MpcDownloadModel {
    Capacity,  // size / predicted capacity
    Paced,     // also no faster than one chunk duration whenever VRA would pace it
};

struct SessionConfig {
    ChannelModel channel;
    double slot_duration_s = 1e-3;
    double csi_noise_sigma_db = 1.0;
    int report_delay_slots = 4;
    BlerModel bler;
    McsTable table = McsTable::standard();
    LinkAdaptState link;
    MacConfig mac;
    BitrateLadder ladder = BitrateLadder::standard();
    AbrKind abr = AbrKind::Mpc;
    MpcConfig mpc;
    MpcDownloadModel mpc_download = MpcDownloadModel::Capacity;
    double prediction_interval_s = 0.6;
    int history_n = 8;
    CapacitySource capacity_source = CapacitySource::PhyLink;
    double bba_reservoir_s = 5.0;
    double bba_cushion_s = 10.0;
    double hybrid_safety = 0.9;
    int n_chunks = 100;
    double buffer_max_s = 60.0;
    // VRA paces downloads only once the buffer holds this much; below it the
    // full grid is used to build the buffer back up
    double vra_buffer_floor_s = 12.0;
    int harq_max_retx = 3;
    std::uint64_t seed = 1;
    std::int64_t max_slots_per_chunk = 600000;
};

inline void validate(const SessionConfig& c) {
    using detail::require;
    validate(c.channel);
    validate(c.link);
    validate(c.mac);
    validate(c.ladder);
    validate(c.mpc);
    require(c.slot_duration_s > 0.0 && std::isfinite(c.slot_duration_s), "slot_duration_s must be positive");
    require(c.csi_noise_sigma_db >= 0.0, "csi_noise_sigma_db must be >= 0");
    require(c.report_delay_slots >= 0, "report_delay_slots must be >= 0");
    require(c.history_n >= 1, "history_n must be >= 1");
    (void)slots_per_interval(c.prediction_interval_s, c.slot_duration_s);
    require(c.bba_reservoir_s >= 0.0 && c.bba_cushion_s > c.bba_reservoir_s, "bba thresholds invalid");
    require(c.hybrid_safety > 0.0 && c.hybrid_safety <= 1.0, "hybrid_safety must be in (0,1]");
    require(c.n_chunks >= 1, "n_chunks must be >= 1");
    require(c.buffer_max_s >= c.ladder.chunk_duration_s, "buffer_max_s must hold at least one chunk");
    require(c.vra_buffer_floor_s >= 0.0, "vra_buffer_floor_s must be >= 0");
    require(c.harq_max_retx >= 0, "harq_max_retx must be >= 0");
    require(c.max_slots_per_chunk >= 1, "max_slots_per_chunk must be >= 1");
    require(c.mac.e_max <= 100000, "e_max unreasonably large");
}

struct DecisionRecord {
    int chunk = 0;
    double clock_s = 0.0;
    double buffer_s = 0.0;
    double predicted_bps = 0.0;  // 0 before the first capacity sample
    int level = 0;
};

/// Optional per-session traces; slot records are kept only when requested.
struct SessionLog {
    bool keep_slots = false;
    std::vector<SlotRecord> slots;
    std::vector<DecisionRecord> decisions;
};

namespace detail {

/// Sliding error-rate estimate over the last `window` transmissions.
class BlerTracker {
public:
    explicit BlerTracker(int window) : window_(static_cast<std::size_t>(window)) {}
    void push(bool error) {
        hist_.push_back(error);
        errors_ += error ? 1 : 0;
        if (hist_.size() > window_) {
            errors_ -= hist_.front() ? 1 : 0;
            hist_.pop_front();
        }
    }
    double value() const {
        return hist_.empty() ? 0.0 : static_cast<double>(errors_) / static_cast<double>(hist_.size());
    }

private:
    std::size_t window_;
    std::deque<bool> hist_;
    std::int64_t errors_ = 0;
};

inline constexpr double kMaxBlerForTarget = 0.9;

/// Link state shared by the session and convergence drivers: channel, CSI,
/// controller and the error oracle, advanced one slot at a time.
class Link {
public:
    explicit Link(const SessionConfig& c)
        : cfg_(c),
          proc_(c.channel, c.slot_duration_s, c.seed),
          csi_rng_(make_rng(c.seed, streams::kCsiNoise)),
          err_rng_(make_rng(c.seed, streams::kBlockError)),
          state_(c.link) {
        delay_line_.reserve(static_cast<std::size_t>(c.report_delay_slots) + 1);
    }

    /// Advances the channel and runs link adaptation for slot `t`, applying
    /// the feedback of the previous transmission. Returns a record with the
    /// MCS chosen and nothing transmitted yet.
    SlotRecord begin_slot() {
        SlotRecord r;
        r.t = t_;
        r.true_snr_db = proc_.next();
        // CSI is the true SNR report_delay slots ago (slot 0 before that) plus noise
        if (delay_line_.size() > static_cast<std::size_t>(cfg_.report_delay_slots))
            delay_line_.erase(delay_line_.begin());
        delay_line_.push_back(r.true_snr_db);
        const double z = std::normal_distribution<double>(0.0, 1.0)(csi_rng_);
        r.est_snr_db = delay_line_.front() + cfg_.csi_noise_sigma_db * z;
        r.offset_db = state_.offset_db;
        const LinkAdaptStep step = link_adapt_step(state_, r.est_snr_db, pending_fb_, cfg_.table);
        pending_fb_.reset();
        state_ = step.state;
        r.feedback = step.applied;
        r.mcs = step.mcs;
        r.capacity_bits = static_cast<double>(tb_size(r.mcs, cfg_.mac.e_max, cfg_.table));
        return r;
    }

    /// Sends `tb_bits` on `rbs` RBs in the current slot. A block whose size
    /// exceeds the slot's Shannon ceiling always fails.
    void transmit(SlotRecord& r, int rbs, std::int64_t tb_bits) {
        r.rbs = rbs;
        r.tb_bits = tb_bits;
        const double p = true_bler(r.true_snr_db, r.mcs, cfg_.table, cfg_.bler);
        const bool drawn = sample_block_error(p, err_rng_);
        const double ceiling = slot_capacity_bits(rbs, r.true_snr_db, cfg_.table.res_per_rb_per_slot());
        r.error = drawn || static_cast<double>(tb_bits) > ceiling;
        pending_fb_ = r.error ? HarqFeedback::Nack : HarqFeedback::Ack;
    }

    void end_slot() { ++t_; }

    std::int64_t slot() const { return t_; }
    const LinkAdaptState& state() const { return state_; }

private:
    const SessionConfig& cfg_;
    ChannelProcess proc_;
    Rng csi_rng_;
    Rng err_rng_;
    LinkAdaptState state_;
    std::optional<HarqFeedback> pending_fb_;
    std::vector<double> delay_line_;
    std::int64_t t_ = 0;
};

}  // namespace detail

/// Runs one streaming session. Deterministic given the config.
inline SessionReport run_session(const SessionConfig& cfg, SessionLog* log = nullptr) {
    validate(cfg);
    const double dt = cfg.slot_duration_s;
    const double T = cfg.ladder.chunk_duration_s;
    const int m = cfg.mac.slots_per_tti;

    detail::Link link(cfg);
    CapacitySampler sampler(cfg.prediction_interval_s, dt, cfg.history_n,
                            cfg.capacity_source == CapacitySource::PhyDelivered ? CapacityMeasure::Delivered
                                                                                : CapacityMeasure::LinkCapacity);
    CapacityHistory chunk_hist{T, {}, cfg.history_n};
    detail::BlerTracker bler_est(cfg.mac.bler_window);
    ModeBler mode_bler;

    std::vector<ChunkRecord> chunks;
    chunks.reserve(static_cast<std::size_t>(cfg.n_chunks));
    PlayerState player{0.0, cfg.buffer_max_s, -1, 0.0};

    // a failed TB awaiting retransmission
    struct Pending {
        bool active = false;
        std::int64_t bits = 0;
        int attempt = 1;
    } harq;
    std::int64_t total_slots = 0;

    auto finish_slot = [&](SlotRecord& r) {
        sampler.push(r);
        if (log && log->keep_slots) log->slots.push_back(r);
        link.end_slot();
        ++total_slots;
    };

    for (int i = 0; i < cfg.n_chunks; ++i) {
        // Pause requests until a whole chunk fits under the buffer cap.
        const double headroom_needed = player.buffer_s + T - cfg.buffer_max_s;
        std::int64_t idle_slots = 0;
        if (headroom_needed > 1e-12) {
            idle_slots = static_cast<std::int64_t>(std::ceil(headroom_needed / dt - 1e-9));
            for (std::int64_t k = 0; k < idle_slots; ++k) {
                SlotRecord r = link.begin_slot();
                finish_slot(r);
            }
            player.buffer_s = std::max(player.buffer_s - static_cast<double>(idle_slots) * dt, 0.0);
        }
        player.clock_s = static_cast<double>(link.slot()) * dt;

        // Bitrate decision.
        CapacityHistory hist = cfg.capacity_source == CapacitySource::Chunk ? chunk_hist : sampler.history();
        if (hist.samples.empty() && cfg.capacity_source != CapacitySource::Chunk) {
            // before the first full interval, fall back to the interval in progress
            if (auto p = sampler.partial(dt)) hist.samples.push_back(*p);
        }
        int level = 0;
        double predicted = hist.samples.empty() ? 0.0 : harmonic_mean_predict(hist);
        if (i > 0) {
            switch (cfg.abr) {
                case AbrKind::Mpc: {
                    if (hist.samples.empty()) break;
                    const bool model_pacing =
                        cfg.mpc_download == MpcDownloadModel::Paced && cfg.mac.policy == RaPolicy::Vra;
                    level = mpc_decide(player, cfg.ladder, hist, cfg.mpc,
                                       model_pacing ? cfg.vra_buffer_floor_s
                                                    : std::numeric_limits<double>::infinity())
                                .level;
                    break;
                }
                case AbrKind::RateBased: level = rate_based_select(hist, cfg.ladder); break;
                case AbrKind::BufferBased:
                    level = buffer_based_select(player, cfg.ladder, cfg.bba_reservoir_s, cfg.bba_cushion_s);
                    break;
                case AbrKind::Hybrid: level = hybrid_select(player, hist, cfg.ladder, cfg.hybrid_safety); break;
            }
        }
        if (log) log->decisions.push_back({i, player.clock_s, player.buffer_s, predicted, level});

        // Download.
        const double rho = cfg.ladder.chunk_size_bits(level);
        const auto rho_bits = static_cast<std::int64_t>(std::ceil(rho - 1e-9));
        std::int64_t delivered = 0;
        std::int64_t residual = 0;
        std::int64_t slots = 0;
        double rate_sum = 0.0;
        int rbs_tti = cfg.mac.e_max;
        const std::int64_t start_slot = link.slot();
        const bool paced = player.buffer_s >= cfg.vra_buffer_floor_s;
        while (delivered < rho_bits) {
            if (slots >= cfg.max_slots_per_chunk)
                throw StarvedChannel("chunk " + std::to_string(i) + " not delivered within " +
                                     std::to_string(cfg.max_slots_per_chunk) + " slots");
            SlotRecord r = link.begin_slot();
            int rbs = 0;
            std::int64_t bits = 0;
            int attempt = 1;
            if (harq.active) {
                // Retransmit the same payload at the current MCS.
                attempt = harq.attempt;
                bits = harq.bits;
                rbs = cfg.mac.e_max;
                for (int e = 1; e <= cfg.mac.e_max; ++e)
                    if (tb_size(r.mcs, e, cfg.table) >= bits) {
                        rbs = e;
                        break;
                    }
            } else {
                if (cfg.mac.policy == RaPolicy::FullGrid || !paced) {
                    rbs = full_grid_allocate(cfg.mac.e_max);
                } else {
                    if ((link.slot() - start_slot) % m == 0 || slots == 0) {
                        const double owed = static_cast<double>(rho_bits - delivered);
                        const double eta = std::min(bler_est.value(), detail::kMaxBlerForTarget);
                        double n0 = 0.0;
                        if (cfg.mac.remaining_aware) {
                            const double left = std::max(T - static_cast<double>(slots) * dt, dt);
                            n0 = target_tb_size(owed, eta, left, dt);
                        } else {
                            n0 = target_tb_size(rho, eta, T, dt);
                        }
                        rbs_tti = std::max(1, vra_allocate(n0, r.mcs, cfg.table, cfg.mac.e_max));
                    }
                    rbs = rbs_tti;
                }
                bits = tb_size(r.mcs, rbs, cfg.table);
            }
            r.attempt = attempt;
            link.transmit(r, rbs, bits);
            bler_est.push(r.error);
            ++mode_bler.transmissions;
            if (r.error) {
                ++mode_bler.errors;
                if (attempt <= cfg.harq_max_retx) {
                    harq = {true, bits, attempt + 1};
                } else {
                    harq.active = false;  // payload stays owed and goes out in a fresh TB
                    ++residual;
                }
            } else {
                harq.active = false;
                delivered += bits;
            }
            rate_sum += static_cast<double>(r.delivered_bits()) / dt;
            ++slots;
            finish_slot(r);
        }
        harq.active = false;  // the chunk is complete; a stale retransmission has nothing left to carry

        ChunkRecord c;
        c.index = i;
        c.level = level;
        c.bitrate_kbps = cfg.ladder.levels_kbps[static_cast<std::size_t>(level)];
        c.size_bits = rho;
        c.start_s = player.clock_s;
        c.download_s = static_cast<double>(slots) * dt;
        c.rebuffer_s = rebuffer_time(c.download_s, player.buffer_s);
        c.throughput_bps = rate_sum / static_cast<double>(slots);
        c.utilization = rate_utilization(c.start_s, c.start_s + c.download_s, T);
        c.residual_errors = residual;
        c.idle_before_s = static_cast<double>(idle_slots) * dt;
        c.buffer_before_s = player.buffer_s;
        c.delivered_bits = delivered;
        c.slots = slots;
        player.buffer_s = advance_buffer(player.buffer_s, c.download_s, T, cfg.buffer_max_s);
        c.buffer_after_s = player.buffer_s;
        player.last_level = level;
        chunk_hist.samples.push_back(c.throughput_bps);
        chunks.push_back(c);
    }

    SessionReport rep = aggregate(chunks, cfg.mpc.qoe_alpha, cfg.mpc.qoe_beta);
    rep.bler_by_mode[std::string(to_string(cfg.link.mode))] = mode_bler;
    rep.slot_count = total_slots;
    rep.seed = cfg.seed;
    return rep;
}

struct ConvergenceOptions {
    int window_slots = 100;          // width of each point of the BLER series
    std::int64_t trailing_slots = 10000;  // span the converged value is measured over
    double tolerance = 0.05;
};

struct ConvergenceReport {
    LinkAdaptMode mode = LinkAdaptMode::SoftAck;
    std::int64_t n_slots = 0;
    int window_slots = 0;
    std::vector<double> series;      // empirical BLER per window
    std::vector<std::uint8_t> errors;  // per-slot error flags
    std::vector<double> offsets_db;  // offset in force per slot
    double converged_bler = 0.0;
    std::optional<double> eta_phi;   // high-margin share of ACKs, trailing span
    double olla_fixed_point = 0.0;
    std::optional<double> soft_fixed_point;
    ConvergenceConditions conditions;
    std::optional<std::int64_t> slots_to_tolerance;
};

/// Index just past the last point of `curve` lying outside target +- tol,
/// scaled by `step`; 0 when the whole curve is inside the band.
inline std::optional<std::int64_t> slots_to_tolerance(const std::vector<double>& curve, int step, double target,
                                                      double tol) {
    if (curve.empty()) return std::nullopt;
    std::size_t last_out = 0;
    for (std::size_t k = 0; k < curve.size(); ++k)
        if (std::abs(curve[k] - target) > tol) last_out = k + 1;
    return static_cast<std::int64_t>(last_out) * step;
}

/// Link-layer-only run on a stationary channel: full grid every slot, a
/// fresh TB every slot, no HARQ or playback.
inline ConvergenceReport run_convergence(const SessionConfig& cfg, std::int64_t n_slots,
                                         const ConvergenceOptions& opt = {}) {
    validate(cfg);
    if (!is_stationary(cfg.channel))
        throw InvalidArgument("run_convergence needs a stationary channel model");
    detail::require(n_slots >= 1, "n_slots must be >= 1");
    detail::require(opt.window_slots >= 1 && opt.trailing_slots >= 1, "window sizes must be >= 1");

    detail::Link link(cfg);
    ConvergenceReport rep;
    rep.mode = cfg.link.mode;
    rep.n_slots = n_slots;
    rep.window_slots = opt.window_slots;
    rep.errors.reserve(static_cast<std::size_t>(n_slots));
    rep.offsets_db.reserve(static_cast<std::size_t>(n_slots));

    const std::int64_t trail_from = std::max<std::int64_t>(0, n_slots - opt.trailing_slots);
    std::int64_t trail_err = 0, trail_high = 0, trail_acks = 0;
    std::int64_t win_err = 0, win_n = 0;
    for (std::int64_t t = 0; t < n_slots; ++t) {
        SlotRecord r = link.begin_slot();
        if (t >= trail_from && r.feedback) {
            if (*r.feedback == HarqFeedback::HighMarginAck) ++trail_high;
            if (*r.feedback == HarqFeedback::HighMarginAck || *r.feedback == HarqFeedback::LowMarginAck)
                ++trail_acks;
        }
        link.transmit(r, cfg.mac.e_max, tb_size(r.mcs, cfg.mac.e_max, cfg.table));
        link.end_slot();
        rep.errors.push_back(r.error ? 1 : 0);
        rep.offsets_db.push_back(r.offset_db);
        if (t >= trail_from && r.error) ++trail_err;
        win_err += r.error ? 1 : 0;
        if (++win_n == opt.window_slots) {
            rep.series.push_back(static_cast<double>(win_err) / static_cast<double>(win_n));
            win_err = win_n = 0;
        }
    }
    rep.converged_bler = static_cast<double>(trail_err) / static_cast<double>(n_slots - trail_from);
    const auto& ls = cfg.link;
    rep.olla_fixed_point = olla_fixed_point(ls.delta_up_db, ls.delta_down_db);
    if (ls.mode == LinkAdaptMode::SoftAck && trail_acks > 0) {
        rep.eta_phi = static_cast<double>(trail_high) / static_cast<double>(trail_acks);
        if (*rep.eta_phi > 0.0) rep.soft_fixed_point = soft_fixed_point(ls.delta_up_db, ls.delta_down_db, *rep.eta_phi);
    }
    rep.conditions = check_convergence_conditions(ls.delta_up_db, ls.delta_down_db, rep.eta_phi);
    rep.slots_to_tolerance = slots_to_tolerance(rep.series, opt.window_slots, rep.converged_bler, opt.tolerance);
    return rep;
}

/// Mean transient over independent runs: per-slot error probability averaged
/// across `runs` seeds (cfg.seed, cfg.seed + 1, ...).
struct EnsembleConvergence {
    LinkAdaptMode mode = LinkAdaptMode::SoftAck;
    int runs = 0;
    std::vector<double> mean_errors;  // per slot
    double converged_bler = 0.0;      // mean over the trailing span of the curve
    std::int64_t slots_to_tolerance = 0;
};

inline EnsembleConvergence run_convergence_ensemble(const SessionConfig& cfg, std::int64_t n_slots, int runs,
                                                    std::int64_t trailing_slots, double tolerance) {
    detail::require(runs >= 1, "runs must be >= 1");
    detail::require(trailing_slots >= 1 && trailing_slots <= n_slots, "trailing span must fit inside the run");
    EnsembleConvergence out;
    out.mode = cfg.link.mode;
    out.runs = runs;
    out.mean_errors.assign(static_cast<std::size_t>(n_slots), 0.0);
    ConvergenceOptions opt;
    opt.trailing_slots = trailing_slots;
    for (int k = 0; k < runs; ++k) {
        SessionConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(k);
        const auto rep = run_convergence(c, n_slots, opt);
        for (std::size_t t = 0; t < rep.errors.size(); ++t) out.mean_errors[t] += rep.errors[t];
    }
    for (auto& x : out.mean_errors) x /= runs;
    double acc = 0.0;
    for (std::int64_t t = n_slots - trailing_slots; t < n_slots; ++t) acc += out.mean_errors[static_cast<std::size_t>(t)];
    out.converged_bler = acc / static_cast<double>(trailing_slots);
    out.slots_to_tolerance = *slots_to_tolerance(out.mean_errors, 1, out.converged_bler, tolerance);
    return out;
}

/// Parameters `run_sweep` can vary.
enum class SweepAxis { PredictionInterval, Abr, LinkMode, RaPolicy, Snr };

inline SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "prediction_interval") return SweepAxis::PredictionInterval;
    if (name == "abr") return SweepAxis::Abr;
    if (name == "link_mode") return SweepAxis::LinkMode;
    if (name == "ra_policy") return SweepAxis::RaPolicy;
    if (name == "snr") return SweepAxis::Snr;
    throw InvalidArgument("unknown sweep axis '" + std::string(name) + "'");
}

inline AbrKind parse_abr(std::string_view v) {
    if (v == "mpc") return AbrKind::Mpc;
    if (v == "rate") return AbrKind::RateBased;
    if (v == "bba") return AbrKind::BufferBased;
    if (v == "hybrid") return AbrKind::Hybrid;
    throw InvalidArgument("unknown ABR '" + std::string(v) + "'");
}

inline LinkAdaptMode parse_link_mode(std::string_view v) {
    if (v == "3gpp") return LinkAdaptMode::Lookup3gpp;
    if (v == "olla") return LinkAdaptMode::Olla;
    if (v == "soft") return LinkAdaptMode::SoftAck;
    throw InvalidArgument("unknown link mode '" + std::string(v) + "'");
}

inline RaPolicy parse_ra_policy(std::string_view v) {
    if (v == "full") return RaPolicy::FullGrid;
    if (v == "vra") return RaPolicy::Vra;
    throw InvalidArgument("unknown RA policy '" + std::string(v) + "'");
}

namespace detail {
inline double parse_number(std::string_view v) {
    std::string s(v);
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(x)) throw InvalidArgument("not a number: '" + s + "'");
    return x;
}
}  // namespace detail

/// `base` with one axis set to `value` (prediction_interval in ms, snr in dB).
inline SessionConfig apply_axis(SessionConfig base, SweepAxis axis, std::string_view value) {
    switch (axis) {
        case SweepAxis::PredictionInterval: base.prediction_interval_s = detail::parse_number(value) * 1e-3; break;
        case SweepAxis::Abr: base.abr = parse_abr(value); break;
        case SweepAxis::LinkMode: base.link.mode = parse_link_mode(value); break;
        case SweepAxis::RaPolicy: base.mac.policy = parse_ra_policy(value); break;
        case SweepAxis::Snr: base.channel.mean_snr_db = detail::parse_number(value); break;
    }
    return base;
}

/// One session per value, all on the base seed.
inline std::vector<SessionReport> run_sweep(const SessionConfig& base, std::string_view axis,
                                            const std::vector<std::string>& values) {
    const SweepAxis ax = parse_sweep_axis(axis);
    if (values.empty()) throw InvalidArgument("sweep needs at least one value");
    std::vector<SessionConfig> cfgs;
    for (const auto& v : values) cfgs.push_back(apply_axis(base, ax, v));
    std::vector<SessionReport> out;
    for (const auto& c : cfgs) out.push_back(run_session(c));
    return out;
}

}  // namespace xlsim
