#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "xlsim/channel.hpp"

using namespace xlsim;

namespace {

ChannelModel constant(double db) {
    ChannelModel m;
    m.kind = ChannelKind::Constant;
    m.mean_snr_db = db;
    return m;
}

ChannelModel faded(double swing, double sigma) {
    ChannelModel m;
    m.kind = ChannelKind::FadedAr1;
    m.mean_snr_db = 3.0;
    m.swing_db = swing;
    m.doppler_hz = 10.0;
    m.ar1_sigma_db = sigma;
    return m;
}

}  // namespace

TEST(GenSnrTrace, ConstantModelRepeatsTheMean) {
    auto tr = gen_snr_trace(constant(5.0), 3, 1e-3, 42);
    ASSERT_EQ(tr.samples.size(), 3u);
    for (double s : tr.samples) EXPECT_EQ(s, 5.0);
}

TEST(GenSnrTrace, SameSeedSameTrace) {
    auto a = gen_snr_trace(faded(5.0, 2.0), 5000, 1e-3, 7);
    auto b = gen_snr_trace(faded(5.0, 2.0), 5000, 1e-3, 7);
    EXPECT_EQ(a.samples, b.samples);
    auto c = gen_snr_trace(faded(5.0, 2.0), 5000, 1e-3, 8);
    EXPECT_NE(a.samples, c.samples);
}

TEST(GenSnrTrace, ShortTraceIsPrefixOfLongTrace) {
    auto s = gen_snr_trace(faded(5.0, 2.0), 100, 1e-3, 3);
    auto l = gen_snr_trace(faded(5.0, 2.0), 1000, 1e-3, 3);
    EXPECT_TRUE(std::equal(s.samples.begin(), s.samples.end(), l.samples.begin()));
}

TEST(GenSnrTrace, Ar1WithoutSwingAveragesToTheMean) {
    auto tr = gen_snr_trace(faded(0.0, 1.0), 100000, 1e-3, 11);
    double mean = std::accumulate(tr.samples.begin(), tr.samples.end(), 0.0) / tr.samples.size();
    EXPECT_NEAR(mean, 3.0, 0.1);
}

TEST(GenSnrTrace, MarkovVisitsBothStates) {
    ChannelModel m;
    m.kind = ChannelKind::TwoStateMarkov;
    m.markov = {6.0, -4.0, 0.01, 0.01};
    auto tr = gen_snr_trace(m, 20000, 1e-3, 5);
    int good = 0, bad = 0;
    for (double s : tr.samples) {
        if (s == 6.0) ++good;
        else if (s == -4.0) ++bad;
        else ADD_FAILURE() << "unexpected SNR " << s;
    }
    EXPECT_GT(good, 5000);
    EXPECT_GT(bad, 5000);
}

TEST(GenSnrTrace, TraceReplayReadsFileAndWraps) {
    auto path = std::filesystem::temp_directory_path() / "xlsim_trace_test.txt";
    {
        std::ofstream f(path);
        f << "1.5\n\n-2\n4.25\n";
    }
    ChannelModel m;
    m.kind = ChannelKind::TraceReplay;
    m.trace_path = path.string();
    auto tr = gen_snr_trace(m, 5, 1e-3, 1);
    EXPECT_EQ(tr.samples, (std::vector<double>{1.5, -2.0, 4.25, 1.5, -2.0}));
    std::filesystem::remove(path);
}

TEST(GenSnrTrace, Errors) {
    ChannelModel missing;
    missing.kind = ChannelKind::TraceReplay;
    missing.trace_path = "/nonexistent/trace.txt";
    EXPECT_THROW(gen_snr_trace(missing, 4, 1e-3, 1), IoError);

    ChannelModel nan = constant(std::nan(""));
    EXPECT_THROW(gen_snr_trace(nan, 4, 1e-3, 1), InvalidArgument);

    EXPECT_THROW(gen_snr_trace(constant(0.0), 0, 1e-3, 1), InvalidArgument);

    ChannelModel badp = constant(0.0);
    badp.markov.p_bad_to_good = 1.5;
    EXPECT_THROW(validate(badp), InvalidArgument);
    ChannelModel negswing = faded(-1.0, 1.0);
    EXPECT_THROW(validate(negswing), InvalidArgument);
}

TEST(Ar1Coefficient, InUnitIntervalAndDecreasingInDoppler) {
    EXPECT_DOUBLE_EQ(ar1_coefficient(0.0, 1e-3), 1.0);
    double prev = 1.0;
    for (double fd : {1.0, 10.0, 50.0, 200.0}) {
        double r = ar1_coefficient(fd, 1e-3);
        EXPECT_GE(r, 0.0);
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(EstimatedSnr, NoiselessUndelayedIsGroundTruth) {
    SnrTrace tr;
    tr.samples = {1.0, 2.0, 3.0};
    tr.estimation_noise_sigma_db = 0.0;
    tr.report_delay_slots = 0;
    Rng g = make_rng(1, 0);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(estimated_snr(tr, i, g), tr.samples[i]);
}

TEST(EstimatedSnr, DelayedReadingUsesOlderSlot) {
    SnrTrace tr;
    tr.samples = {0.0, 10.0, 20.0, 30.0, 40.0, 50.0};
    tr.estimation_noise_sigma_db = 0.0;
    tr.report_delay_slots = 2;
    Rng g = make_rng(1, 0);
    EXPECT_EQ(estimated_snr(tr, 5, g), 30.0);
    tr.report_delay_slots = 3;
    EXPECT_EQ(estimated_snr(tr, 0, g), 0.0);
    EXPECT_THROW(estimated_snr(tr, 6, g), InvalidArgument);
}

TEST(EstimatedSnr, NoiseHasStatedSpread) {
    SnrTrace tr;
    tr.samples = {2.0};
    tr.estimation_noise_sigma_db = 1.5;
    tr.report_delay_slots = 0;
    Rng g = make_rng(9, 0);
    double s = 0.0, s2 = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        double x = estimated_snr(tr, 0, g) - 2.0;
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 0.03);
    EXPECT_NEAR(std::sqrt(s2 / n), 1.5, 0.03);
}

TEST(TrueBler, ErfModelValues) {
    const auto t = McsTable::standard();
    BlerModel m;
    const double thr = t.at(7).snr_threshold_db;
    EXPECT_DOUBLE_EQ(true_bler(thr, 7, t, m), 0.5);
    // Q(3) and 1 - Q(3)
    EXPECT_NEAR(true_bler(thr + 3.0, 7, t, m), 0.0013498980316301, 1e-12);
    EXPECT_NEAR(true_bler(thr - 3.0, 7, t, m), 0.9986501019683699, 1e-12);
    m.alpha_db = 1.0;
    EXPECT_NEAR(true_bler(thr + 2.0, 7, t, m), 0.0013498980316301, 1e-12);
    EXPECT_THROW(true_bler(0.0, 16, t, m), InvalidArgument);
}

TEST(TrueBler, LogisticFitValues) {
    const auto t = McsTable::standard();
    BlerModel m;
    m.kind = BlerKind::LogisticFit;
    const double thr = t.at(4).snr_threshold_db;
    // zero deficit: 1 / (1 + e^{1.11})
    EXPECT_NEAR(true_bler(thr, 4, t, m), 0.2478708885604298, 1e-12);
    m.s = 2.0;
    EXPECT_NEAR(true_bler(thr, 4, t, m), 0.2478708885604298 * 0.2478708885604298, 1e-12);
    m.s = 0.0;
    EXPECT_THROW(true_bler(thr, 4, t, m), InvalidArgument);
}

TEST(TrueBler, BoundedAndNonIncreasingOnGrid) {
    const auto t = McsTable::standard();
    for (auto kind : {BlerKind::ErfModel, BlerKind::LogisticFit}) {
        BlerModel m;
        m.kind = kind;
        for (int mcs = 1; mcs <= 15; ++mcs) {
            double prev = 2.0;
            for (double db = -40.0; db <= 60.0; db += 0.25) {
                double p = true_bler(db, mcs, t, m);
                ASSERT_GE(p, 0.0);
                ASSERT_LE(p, 1.0);
                ASSERT_LE(p, prev);
                prev = p;
            }
        }
    }
}

TEST(TrueBler, ErfSymmetryAroundThreshold) {
    const auto t = McsTable::standard();
    BlerModel m;
    for (int mcs : {1, 8, 15})
        for (double x : {0.1, 0.7, 2.0, 4.5})
            EXPECT_NEAR(true_bler(t.at(mcs).snr_threshold_db + x, mcs, t, m) +
                            true_bler(t.at(mcs).snr_threshold_db - x, mcs, t, m),
                        1.0, 1e-12);
}

TEST(SampleBlockError, Degenerate) {
    Rng g = make_rng(3, 3);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_FALSE(sample_block_error(0.0, g));
        EXPECT_TRUE(sample_block_error(1.0, g));
    }
    EXPECT_THROW(sample_block_error(-0.1, g), InvalidArgument);
    EXPECT_THROW(sample_block_error(1.1, g), InvalidArgument);
}

TEST(SampleBlockError, EmpiricalRate) {
    Rng g = make_rng(4, 3);
    int hits = 0;
    for (int i = 0; i < 100000; ++i) hits += sample_block_error(0.1, g);
    EXPECT_NEAR(hits / 1e5, 0.1, 0.005);
}

TEST(SampleBlockError, Seeded) {
    Rng a = make_rng(5, 3), b = make_rng(5, 3);
    for (int i = 0; i < 200; ++i) EXPECT_EQ(sample_block_error(0.4, a), sample_block_error(0.4, b));
}
