#include "rti/biotemplate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rti/error.hpp"
#include "rti/random.hpp"

namespace rti {
namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Io;
}

TEST(EncodeMinutia, Examples) {
    EXPECT_EQ(encode_minutia({0, 0, 0.0}), fe(0x000000));
    EXPECT_EQ(encode_minutia({511, 511, 359.0}), fe(0xFFFFFF));
    EXPECT_EQ(encode_minutia({100, 200, 90.0}), fe((100u << 15) | (200u << 6) | 16u));
    EXPECT_EQ(encode_minutia({100, 200, 90.0}), fe(0x323210));
}

TEST(EncodeMinutia, RangeErrors) {
    EXPECT_EQ(kind_of([] { encode_minutia({512, 0, 0.0}); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { encode_minutia({0, -1, 0.0}); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { encode_minutia({0, 0, 360.0}); }), ErrorKind::Range);
}

TEST(DecodeMinutia, Examples) {
    EXPECT_EQ(decode_minutia(fe(0)), (Minutia{0, 0, 0.0}));
    EXPECT_EQ(decode_minutia(fe(0xFFFFFF)), (Minutia{511, 511, 354.375}));
}

TEST(DecodeMinutia, RoundTripKeepsPositionAndBin) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Minutia m{static_cast<int>(rng.uniform(512)), static_cast<int>(rng.uniform(512)), rng.uniform01() * 360.0};
        const Minutia back = decode_minutia(encode_minutia(m));
        ASSERT_EQ(back.x, m.x);
        ASSERT_EQ(back.y, m.y);
        ASSERT_LE(m.theta - back.theta, 5.625);
        ASSERT_GE(m.theta - back.theta, 0.0);
    }
}

TEST(EncodeMinutia, InjectiveOnLattice) {
    // Bit-disjoint fields: every lattice point decodes and re-encodes to itself.
    for (std::uint32_t v = 0; v < (1u << 24); v += 4093) {
        ASSERT_EQ(encode_minutia(decode_minutia(fe(v))), fe(v));
    }
    for (std::uint32_t v = 0; v < 4096; ++v) {
        ASSERT_EQ(encode_minutia(decode_minutia(fe(v))), fe(v));
    }
}

TEST(MinutiaCodec, SmallFieldLayout) {
    MinutiaCodec c8(8);
    EXPECT_EQ(c8.theta_bits(), 2);
    EXPECT_EQ(c8.x_bits(), 3);
    EXPECT_EQ(c8.y_bits(), 3);
    for (std::uint32_t v = 0; v < 256; ++v) ASSERT_EQ(c8.encode(c8.decode(fe(v))), fe(v));
    EXPECT_THROW(MinutiaCodec(28), Error);
}

TEST(MinutiaDistance, Examples) {
    const Minutia m{10, 20, 30.0};
    EXPECT_DOUBLE_EQ(minutia_distance(m, m), 0.0);
    EXPECT_DOUBLE_EQ(minutia_distance({0, 0, 30.0}, {3, 4, 30.0}), 5.0);
    EXPECT_DOUBLE_EQ(minutia_distance({0, 0, 350.0}, {0, 0, 10.0}, 0.2), 4.0);
}

TEST(MinutiaDistance, MetricProperties) {
    Rng rng(8);
    const auto draw = [&] {
        return Minutia{static_cast<int>(rng.uniform(512)), static_cast<int>(rng.uniform(512)), rng.uniform01() * 360.0};
    };
    for (int i = 0; i < 2000; ++i) {
        const Minutia p = draw(), q = draw();
        const double d = minutia_distance(p, q);
        ASSERT_GE(d, 0.0);
        ASSERT_DOUBLE_EQ(d, minutia_distance(q, p));
        const Minutia same_pos{p.x, p.y, q.theta};
        ASSERT_LE(minutia_distance(p, same_pos), kDefaultBeta * 180.0 + 1e-12);
        if (!(p == q)) ASSERT_GT(d, 0.0);
    }
}

TEST(SelectTopMinutiae, Examples) {
    std::vector<RawMinutia> raw;
    for (int i = 0; i < 30; ++i) raw.push_back({{i * 10, i * 10, 0.0}, static_cast<double>(i)});
    const Template t = select_top_minutiae(raw, 20);
    ASSERT_EQ(t.size(), 20u);
    EXPECT_EQ(t.minutiae.front().x, 290);
    EXPECT_EQ(t.minutiae.back().x, 100);

    std::vector<RawMinutia> five(raw.begin(), raw.begin() + 5);
    EXPECT_EQ(select_top_minutiae(five, 20).size(), 5u);

    std::vector<RawMinutia> same_cell{{{5, 5, 1.0}, 0.5}, {{5, 5, 2.0}, 0.9}};
    const Template one = select_top_minutiae(same_cell, 20);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_DOUBLE_EQ(one.minutiae[0].theta, 2.0);
}

TEST(SelectTopMinutiae, TiesKeepInputOrder) {
    std::vector<RawMinutia> raw{{{1, 1, 0.0}, 0.5}, {{2, 2, 0.0}, 0.5}, {{3, 3, 0.0}, 0.5}};
    const Template t = select_top_minutiae(raw, 2);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.minutiae[0].x, 1);
    EXPECT_EQ(t.minutiae[1].x, 2);
}

TEST(ParseMinutiae, FormatRules) {
    const auto raw = parse_minutiae("# comment\n\n100 200 90.0 0.9\n  7 8 1.5\r\n");
    ASSERT_EQ(raw.size(), 2u);
    EXPECT_EQ(raw[0].minutia, (Minutia{100, 200, 90.0}));
    EXPECT_DOUBLE_EQ(raw[0].confidence, 0.9);
    EXPECT_DOUBLE_EQ(raw[1].confidence, 1.0);

    EXPECT_EQ(kind_of([] { parse_minutiae("600 10 0.0\n"); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { parse_minutiae("1 2\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_minutiae("1.5 2 3\n"); }), ErrorKind::Parse);
    try {
        parse_minutiae("1 2 3\n\n4 5 abc\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(LoadTemplate, FixtureTopTwenty) {
    const std::string path = std::string(RTI_FIXTURE_DIR) + "/minutiae_40.txt";
    // Sort oracle computed directly on the file contents.
    std::ifstream in(path);
    std::vector<std::pair<double, Minutia>> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Minutia m;
        double c;
        ss >> m.x >> m.y >> m.theta >> c;
        rows.emplace_back(c, m);
    }
    ASSERT_EQ(rows.size(), 40u);
    std::stable_sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first > b.first; });

    const Template t = load_template(path, 20);
    ASSERT_EQ(t.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(t.minutiae[i], rows[i].second);

    EXPECT_EQ(kind_of([] { load_template("/nonexistent/file.txt", 20); }), ErrorKind::Io);
}

TEST(TemplateSerialization, CanonicalAndRoundTrips) {
    Rng rng(4);
    const Template t = random_impostor_template(20, rng);
    const std::string s = serialize_template(t);
    Template shuffled = t;
    std::reverse(shuffled.minutiae.begin(), shuffled.minutiae.end());
    EXPECT_EQ(serialize_template(shuffled), s);
    EXPECT_EQ(serialize_template(deserialize_template(s)), s);
}

TEST(PerturbTemplate, ZeroNoiseIsIdentity) {
    Rng rng(1);
    const Template t = random_impostor_template(20, rng);
    Rng r2(2);
    EXPECT_EQ(perturb_template(t, NoiseModel{0, 0, 0}, r2), t);
}

TEST(PerturbTemplate, Deterministic) {
    Rng rng(1);
    const Template t = random_impostor_template(20, rng);
    Rng a(77), b(77);
    EXPECT_EQ(perturb_template(t, NoiseModel{}, a), perturb_template(t, NoiseModel{}, b));
}

TEST(PerturbTemplate, ShiftsStayWithinThresholdMostly) {
    Rng rng(12);
    std::size_t within = 0, total = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Template t = random_impostor_template(20, rng);
        const Template p = perturb_template(t, NoiseModel{3.0, 0.0, 0.0}, rng);
        ASSERT_EQ(p.size(), t.size());  // collisions are possible in principle, not at this density
        for (std::size_t i = 0; i < t.size(); ++i) {
            within += minutia_distance(t.minutiae[i], p.minutiae[i]) <= kDefaultW;
            ++total;
        }
    }
    EXPECT_GE(static_cast<double>(within) / static_cast<double>(total), 0.95);
}

TEST(PerturbTemplate, KeepsInvariants) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Template t = random_impostor_template(20, rng);
        const Template p = perturb_template(t, NoiseModel{8.0, 20.0, 0.3}, rng);
        ASSERT_TRUE(has_distinct_encodings(p));
        for (const auto& m : p.minutiae) ASSERT_NO_THROW(validate_minutia(m));
    }
}

TEST(RandomImpostorTemplate, Examples) {
    Rng a(5), b(5), c(6);
    const Template ta = random_impostor_template(20, a);
    EXPECT_EQ(ta.size(), 20u);
    EXPECT_TRUE(has_distinct_encodings(ta));
    EXPECT_EQ(ta, random_impostor_template(20, b));

    // Expected shared cells between independent templates: 20*20/2^24.
    Rng seeds(100);
    std::size_t pairs_with_3 = 0;
    for (int i = 0; i < 1000; ++i) {
        Rng x(seeds.next_u64()), y(seeds.next_u64());
        pairs_with_3 += shared_cells(random_impostor_template(20, x), random_impostor_template(20, y)) >= 3;
    }
    EXPECT_EQ(pairs_with_3, 0u);
    EXPECT_NE(ta, random_impostor_template(20, c));
}

}  // namespace
}  // namespace rti
