#include <doctest.h>

#include <set>

#include "turan/rng.hpp"

using namespace turan;

// Reference blocks from numpy.random.Philox, which bumps its counter once
// before producing output.
TEST_CASE("philox4x64 matches the numpy bit generator")
{
    auto out = philox4x64({1, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x02f4ba6408e4d89bULL);
    CHECK(out[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(out[2] == 0x1c8667a55d902e79ULL);
    CHECK(out[3] == 0x907d7a052fd5b4dcULL);

    constexpr auto m = ~std::uint64_t{0};
    out = philox4x64({0, 0, 0, 0}, {m, m});
    CHECK(out[0] == 0x44b7493d1acfc229ULL);
    CHECK(out[1] == 0x6636af8e997921ddULL);
    CHECK(out[2] == 0x3f73e132b5b3780eULL);
    CHECK(out[3] == 0x605644dde03b01b1ULL);

    // counter passed to numpy as 0x243f6a8885a308d2 so the bump lands here
    out = philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL,
                      0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                     {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
    CHECK(out[0] == 0xa528f45403e61d95ULL);
    CHECK(out[1] == 0x38c72dbd566e9788ULL);
    CHECK(out[2] == 0xa5a1610e72fd18b5ULL);
    CHECK(out[3] == 0x57bd43b5e52b7fe6ULL);
}

TEST_CASE("unit conversions stay in range")
{
    CHECK(to_unit(0) == 0.0);
    CHECK(to_unit(~std::uint64_t{0}) < 1.0);
    CHECK(to_unit_nonzero(0) > 0.0);
    CHECK(to_unit_nonzero(~std::uint64_t{0}) == 1.0);
}

TEST_CASE("streams replay and substreams differ")
{
    RandomStream a{42};
    RandomStream b{42};
    for (int i = 0; i < 10; ++i)
        CHECK(a.next_u64() == b.next_u64());

    RandomStream base{42};
    std::set<std::uint64_t> keys;
    for (std::uint64_t i = 0; i < 1000; ++i)
        keys.insert(base.substream(i).key());
    CHECK(keys.size() == 1000);

    RandomStream p{9};
    CHECK(p.advance() == 0);
    CHECK(p.advance() == 1);
    CHECK(p.position() == 2);
}

TEST_CASE("next_unit is roughly uniform")
{
    RandomStream s{3};
    double sum = 0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i)
        sum += s.next_unit();
    // mean of U(0,1) has sd 1/sqrt(12 n) ~ 0.0009
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}
