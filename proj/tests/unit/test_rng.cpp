// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nchc/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using nchc::PhiloxCounter;
using nchc::RandomSource;
using nchc::SeedStream;

TEST_CASE("philox4x32-10 known-answer vectors")
{
    CHECK(nchc::philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(nchc::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(nchc::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("identical streams give identical sequences")
{
    RandomSource a(SeedStream(42, {3, 1, 4}));
    RandomSource b(SeedStream(42, {3, 1, 4}));
    for (int i = 0; i < 10000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
    for (int i = 0; i < 10000; ++i)
        REQUIRE(a.normal() == b.normal());
}

TEST_CASE("distinct paths and seeds give distinct sequences")
{
    auto first = [](const SeedStream &s) { return RandomSource(s).next_u64(); };
    const std::vector<SeedStream> streams = {SeedStream(1), SeedStream(2), SeedStream(1, {0}), SeedStream(1, {1}),
                                             SeedStream(1, {1, 0}), SeedStream(1, {0, 1}), SeedStream(1, {1, 0, 0})};
    for (std::size_t i = 0; i < streams.size(); ++i)
        for (std::size_t j = i + 1; j < streams.size(); ++j)
            CHECK(first(streams[i]) != first(streams[j]));
}

TEST_CASE("child appends to the path")
{
    const SeedStream s(7, {1, 2});
    CHECK(s.child(3).path == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(s.child({3, 4}).path == std::vector<std::uint64_t>{1, 2, 3, 4});
    CHECK(s.child(3).master_seed == 7);
}

TEST_CASE("fill_normal matches repeated normal()")
{
    RandomSource a(SeedStream(9, {1}));
    RandomSource b(SeedStream(9, {1}));
    std::vector<double> buf(50000);
    a.fill_normal(buf);
    for (double x : buf)
        REQUIRE(x == b.normal());
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in the open unit interval")
{
    RandomSource r(SeedStream(5));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("normal variates: moments, kurtosis and KS against the normal CDF")
{
    RandomSource r(SeedStream(2024, {7}));
    const int n = 400000;
    std::vector<double> x(n);
    r.fill_normal(x);

    double m1 = 0.0;
    for (double v : x)
        m1 += v;
    m1 /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x)
    {
        const double d = (v - m1) * (v - m1);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 5.0 / std::sqrt(double(n)));
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.2 / 3.0));

    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double F = 0.5 * std::erfc(-x[std::size_t(i)] / std::sqrt(2.0));
        ks = std::max({ks, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
    }
    // 1.63 / sqrt(n) is the 1% critical value of the KS distribution.
    CHECK(ks < 1.63 / std::sqrt(double(n)));

    // Tail beyond the ziggurat base layer edge.
    const double tail = double(std::count_if(x.begin(), x.end(), [](double v) { return std::abs(v) > 3.442619855899; })) / n;
    const double expected = std::erfc(3.442619855899 / std::sqrt(2.0));
    CHECK(std::abs(tail - expected) < 5.0 * std::sqrt(expected / n));
}

TEST_CASE("disjoint streams are uncorrelated")
{
    const int n = 20000;
    const double bound = 4.0 / std::sqrt(double(n));
    auto correlation = [n](const SeedStream &sa, const SeedStream &sb) {
        RandomSource a(sa), b(sb);
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (int i = 0; i < n; ++i)
        {
            const double x = a.normal(), y = b.normal();
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        return cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
    };
    CHECK(std::abs(correlation(SeedStream(1, {3, 0, 0, 0}), SeedStream(1, {3, 0, 0, 1}))) <= bound);
    CHECK(std::abs(correlation(SeedStream(1, {3, 0, 0}), SeedStream(1, {3, 0, 1}))) <= bound);
    CHECK(std::abs(correlation(SeedStream(1, {3, 0, 0}), SeedStream(2, {3, 0, 0}))) <= bound);
    CHECK(std::abs(correlation(SeedStream(1, {0}), SeedStream(1, {0, 0}))) <= bound);
}
