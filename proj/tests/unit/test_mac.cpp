#include <gtest/gtest.h>

#include <random>

#include "xlsim/mac.hpp"

using namespace xlsim;

TEST(TargetTbSize, HandValues) {
    EXPECT_NEAR(target_tb_size(6e6, 0.1, 2.0, 1e-3), 3333.3333333333335, 1e-9);
    EXPECT_NEAR(target_tb_size(2000, 0.0, 2.0, 1e-3), 1.0, 1e-12);
}

TEST(TargetTbSize, Errors) {
    EXPECT_THROW(target_tb_size(1e6, 1.0, 2.0, 1e-3), InvalidArgument);
    EXPECT_THROW(target_tb_size(1e6, -0.1, 2.0, 1e-3), InvalidArgument);
    EXPECT_THROW(target_tb_size(1e6, 0.1, 0.0, 1e-3), InvalidArgument);
    EXPECT_THROW(target_tb_size(1e6, 0.1, 2.0, 0.0), InvalidArgument);
    EXPECT_THROW(target_tb_size(1e308, 1.0 - 1e-16, 1e-300, 1.0), InvalidArgument);
}

TEST(VraAllocate, Examples) {
    const auto std_table = McsTable::standard();
    EXPECT_EQ(vra_allocate(0.0, 7, std_table, 52), 0);
    EXPECT_EQ(vra_allocate(1e9, 7, std_table, 52), 52);

    McsTable two({{1, 0.0, 2.0}}, 168);  // 336 bits per RB
    EXPECT_EQ(vra_allocate(1000.0, 1, two, 52), 3);
    // exact midpoint between 2 and 3 RBs goes to the smaller count
    EXPECT_EQ(vra_allocate(840.0, 1, two, 52), 2);
    EXPECT_THROW(vra_allocate(-1.0, 1, two, 52), InvalidArgument);
}

TEST(FullGrid, AlwaysEmax) {
    EXPECT_EQ(full_grid_allocate(52), 52);
    EXPECT_EQ(full_grid_allocate(1), 1);
}

TEST(MultiUserScale, Examples) {
    std::vector<double> base{0.5, 0.5}, r{1.0, 0.5};
    auto out = multi_user_scale(base, r);
    EXPECT_NEAR(out[0], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(out[1], 1.0 / 3.0, 1e-12);

    std::vector<double> b3{0.2, 0.3, 0.5}, ones{1.0, 1.0, 1.0}, zeros{0.0, 0.0, 0.0};
    auto same = multi_user_scale(b3, ones);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(same[i], b3[i], 1e-12);
    auto uni = multi_user_scale(b3, zeros);
    for (double v : uni) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);

    std::vector<double> short_r{1.0};
    EXPECT_THROW(multi_user_scale(b3, short_r), InvalidArgument);
}

TEST(MultiUserScale, SumsToOne) {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        std::size_t n = 1 + g() % 8;
        std::vector<double> base(n), r(n);
        double s = 0.0;
        for (auto& b : base) s += (b = u(g));
        for (auto& b : base) b /= s;
        for (auto& x : r) x = u(g);
        auto out = multi_user_scale(base, r);
        double tot = 0.0;
        for (double v : out) tot += v;
        EXPECT_NEAR(tot, 1.0, 1e-9);
    }
}

TEST(MacConfig, Validation) {
    MacConfig c;
    EXPECT_NO_THROW(validate(c));
    c.e_max = 0;
    EXPECT_THROW(validate(c), InvalidArgument);
    c = {};
    c.slots_per_tti = 0;
    EXPECT_THROW(validate(c), InvalidArgument);
}
