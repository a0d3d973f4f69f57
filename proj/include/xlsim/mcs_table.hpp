#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "xlsim/error.hpp"

namespace xlsim {

struct McsEntry {
    int index = 0;
    double snr_threshold_db = 0.0;
    double efficiency = 0.0;  // bits per resource element
};

/// Ordered MCS lookup table: SNR switching thresholds and spectral efficiencies.
///
/// Indices are contiguous starting at 1. Thresholds and efficiencies are
/// strictly increasing.
class McsTable {
public:
    static constexpr int kDefaultResPerRb = 168;  // 12 subcarriers x 14 symbols

    McsTable(std::vector<McsEntry> entries, int res_per_rb_per_slot = kDefaultResPerRb)
        : entries_(std::move(entries)), res_per_rb_(res_per_rb_per_slot) {
        validate();
    }

    /// 15-entry table built on the 4-bit CQI efficiency ladder with thresholds
    /// spaced 1.9 dB apart starting at -6 dB.
    static McsTable standard(int res_per_rb_per_slot = kDefaultResPerRb) {
        static constexpr double kEff[15] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                            1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                            3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
        std::vector<McsEntry> e;
        e.reserve(15);
        for (int i = 0; i < 15; ++i) e.push_back({i + 1, -6.0 + 1.9 * i, kEff[i]});
        return McsTable(std::move(e), res_per_rb_per_slot);
    }

    /// Parses `index,snr_threshold_db,efficiency_bits_per_re` CSV (header required).
    static McsTable from_csv(std::istream& in, int res_per_rb_per_slot = kDefaultResPerRb) {
        std::string line;
        if (!std::getline(in, line)) throw ConfigError("mcs_table", "empty MCS table file");
        if (trim(line) != "index,snr_threshold_db,efficiency_bits_per_re")
            throw ConfigError("mcs_table", "unexpected header '" + trim(line) + "'");
        std::vector<McsEntry> entries;
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            std::stringstream ss(line);
            std::string a, b, c;
            if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
                throw ConfigError("mcs_table", "line " + std::to_string(lineno) + ": expected 3 fields");
            try {
                entries.push_back({std::stoi(a), std::stod(b), std::stod(c)});
            } catch (const std::exception&) {
                throw ConfigError("mcs_table", "line " + std::to_string(lineno) + ": bad number");
            }
        }
        try {
            return McsTable(std::move(entries), res_per_rb_per_slot);
        } catch (const InvalidArgument& e) {
            throw ConfigError("mcs_table", e.what());
        }
    }

    static McsTable from_csv_file(const std::string& path, int res_per_rb_per_slot = kDefaultResPerRb) {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open MCS table '" + path + "'");
        return from_csv(f, res_per_rb_per_slot);
    }

    int min_index() const { return entries_.front().index; }
    int max_index() const { return entries_.back().index; }
    int size() const { return static_cast<int>(entries_.size()); }
    int res_per_rb_per_slot() const { return res_per_rb_; }
    const std::vector<McsEntry>& entries() const { return entries_; }

    bool contains(int mcs) const { return mcs >= min_index() && mcs <= max_index(); }

    const McsEntry& at(int mcs) const {
        if (!contains(mcs)) throw InvalidArgument("unknown MCS index " + std::to_string(mcs));
        return entries_[static_cast<std::size_t>(mcs - min_index())];
    }

    friend bool operator==(const McsTable& a, const McsTable& b) {
        if (a.res_per_rb_ != b.res_per_rb_ || a.entries_.size() != b.entries_.size()) return false;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            const auto &x = a.entries_[i], &y = b.entries_[i];
            if (x.index != y.index || x.snr_threshold_db != y.snr_threshold_db ||
                x.efficiency != y.efficiency)
                return false;
        }
        return true;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    void validate() const {
        detail::require(!entries_.empty(), "MCS table is empty");
        detail::require(res_per_rb_ >= 1, "res_per_rb_per_slot must be >= 1");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            detail::require(std::isfinite(e.snr_threshold_db) && std::isfinite(e.efficiency),
                            "MCS entries must be finite");
            detail::require(e.efficiency > 0.0, "MCS efficiency must be positive");
            if (i == 0) continue;
            const auto& p = entries_[i - 1];
            detail::require(e.index == p.index + 1, "MCS indices must be contiguous");
            detail::require(e.snr_threshold_db > p.snr_threshold_db,
                            "MCS thresholds must be strictly increasing");
            detail::require(e.efficiency > p.efficiency,
                            "MCS efficiencies must be strictly increasing");
        }
    }

    std::vector<McsEntry> entries_;
    int res_per_rb_;
};

}  // namespace xlsim
