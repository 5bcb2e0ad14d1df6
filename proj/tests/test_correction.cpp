#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace pipeadc;

namespace {

RawCodeFrame uniform_frame(std::uint8_t stage, std::uint8_t flash) {
    RawCodeFrame f;
    f.stage_codes.fill(stage);
    f.flash_code = flash;
    return f;
}

// Hand-rolled ideal pipeline in which the decision of one stage is forced to
// a neighbouring code. Returns false when the forced residue leaves the
// reference range.
bool convert_with_forced(double v, std::size_t forced_stage, int delta, unsigned& code) {
    long sum = 0;
    double r = v;
    for (std::size_t i = 0; i < kStages; ++i) {
        int d = adsc_decide(r, 1.0, {0, 0});
        if (i == forced_stage) d += delta;
        if (d < 0 || d > 2) return false;
        r = 2 * r - (d - 1);
        if (std::abs(r) > 1.0) return false;
        sum += static_cast<long>(d) << (kStages - i);
    }
    sum += flash_decide(r, 1.0, {0, 0, 0});
    code = static_cast<unsigned>(std::clamp(sum, 0L, 4095L));
    return true;
}

}  // namespace

TEST(Correct, Examples) {
    EXPECT_EQ(correct(uniform_frame(0, 0)).value(), 0u);
    EXPECT_EQ(correct(uniform_frame(2, 3)).value(), 4095u);
    EXPECT_EQ(correct(uniform_frame(1, 2)).value(), 2048u);
    ConversionState st(1, 110e6);
    const auto c = correct(convert_sample(0.3, ideal_config(), st)).value();
    EXPECT_LE(std::abs(static_cast<int>(c) - 2662), 1);
    EXPECT_EQ(oracle::round_quantizer(0.3), 2662u);
}

TEST(Correct, WeightsFollowOneBitOverlap) {
    for (std::size_t i = 0; i < kStages; ++i) {
        RawCodeFrame f;
        f.stage_codes[i] = 1;
        EXPECT_EQ(correct(f).value(), 1u << (kStages - i)) << "stage " << i + 1;
    }
    RawCodeFrame f;
    f.flash_code = 1;
    EXPECT_EQ(correct(f).value(), 1u);
}

TEST(Correct, SaturatesAtTopCode) {
    RawCodeFrame f = uniform_frame(2, 3);
    f.stage_codes[9] = 2;
    EXPECT_EQ(correct(f).value(), 4095u);
    EXPECT_EQ(OutputCode(9999).value(), 4095u);
}

TEST(Correct, MonotoneInEveryField) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> s(0, 2), fl(0, 3);
    for (int trial = 0; trial < 2000; ++trial) {
        RawCodeFrame f;
        for (auto& c : f.stage_codes) c = static_cast<std::uint8_t>(s(rng));
        f.flash_code = static_cast<std::uint8_t>(fl(rng));
        const unsigned base = correct(f).value();
        for (std::size_t i = 0; i < kStages; ++i) {
            if (f.stage_codes[i] == 2) continue;
            RawCodeFrame g = f;
            ++g.stage_codes[i];
            EXPECT_GE(correct(g).value(), base);
        }
        if (f.flash_code < 3) {
            RawCodeFrame g = f;
            ++g.flash_code;
            EXPECT_GE(correct(g).value(), base);
        }
    }
}

TEST(Correct, ExactCancellationOfFlippedDecisions) {
    const std::size_t n = 1 << 12;
    std::size_t checked = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = -1.0 + 2.0 * (static_cast<double>(k) + 0.37) / n;
        unsigned ref = 0;
        ASSERT_TRUE(convert_with_forced(v, kStages, 0, ref));
        for (std::size_t i = 0; i < kStages; ++i) {
            for (int delta : {-1, 1}) {
                unsigned got = 0;
                if (!convert_with_forced(v, i, delta, got)) continue;
                ++checked;
                EXPECT_LE(std::abs(static_cast<int>(got) - static_cast<int>(ref)), 1)
                    << "v=" << v << " stage " << i + 1 << " delta " << delta;
            }
        }
    }
    EXPECT_GT(checked, n);
}

TEST(CorrectStream, Basics) {
    EXPECT_TRUE(correct_stream({}).empty());
    auto one = correct_stream({uniform_frame(1, 2)});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].value(), 2048u);
    auto frames = convert_stream(gen_ramp(4097, -1, 1), ideal_config());
    auto codes = correct_stream(frames);
    EXPECT_EQ(codes.size(), frames.size());
    EXPECT_TRUE(std::is_sorted(codes.begin(), codes.end()));
}
