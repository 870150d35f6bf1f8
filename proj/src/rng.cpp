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

#include <cmath>

namespace nchc
{

namespace
{
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo)
{
    const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

inline double to_unit_open(std::uint64_t bits)
{
    return (double(std::int64_t(bits >> 11)) + 0.5) * 0x1.0p-53;
}

// 128-layer ziggurat for the standard normal (Marsaglia & Tsang 2000). x[i] is
// the right edge of layer i; x[0] is the width of the base strip including the
// tail mass beyond R, x[128] = 0. ratio[i] = x[i+1] / x[i].
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;

struct ZigguratTables
{
    std::array<double, 129> x{};
    std::array<double, 128> ratio{};

    ZigguratTables()
    {
        auto f = [](double t) { return std::exp(-0.5 * t * t); };
        x[0] = kZigV / f(kZigR);
        x[1] = kZigR;
        for (int i = 2; i < 128; ++i)
            x[i] = std::sqrt(-2.0 * std::log(kZigV / x[i - 1] + f(x[i - 1])));
        x[128] = 0.0;
        for (int i = 0; i < 128; ++i)
            ratio[i] = x[i + 1] / x[i];
    }
};

const ZigguratTables &ziggurat_tables()
{
    static const ZigguratTables tables;
    return tables;
}
} // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
{
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

SeedStream SeedStream::child(std::initializer_list<std::uint64_t> extra) const
{
    SeedStream s = *this;
    s.path.insert(s.path.end(), extra.begin(), extra.end());
    return s;
}

RandomSource::RandomSource(const SeedStream &stream)
{
    // Two independent chains so that key and counter-high jointly carry 128
    // bits of stream identity. Path length is mixed in to separate {1} from {1,0}.
    std::uint64_t h1 = splitmix64(stream.master_seed ^ 0x6A09E667F3BCC908ull);
    std::uint64_t h2 = splitmix64(stream.master_seed ^ 0xBB67AE8584CAA73Bull);
    for (std::uint64_t p : stream.path)
    {
        h1 = splitmix64(h1 ^ splitmix64(p));
        h2 = splitmix64(h2 + splitmix64(p ^ 0x3C6EF372FE94F82Bull));
    }
    h1 = splitmix64(h1 ^ stream.path.size());
    h2 = splitmix64(h2 + stream.path.size());
    key_ = {std::uint32_t(h1), std::uint32_t(h1 >> 32)};
    stream_hi_ = h2;
}

// Produces kBatchBlocks consecutive counter blocks. The rounds of independent
// blocks are interleaved, which the compiler schedules in parallel; the output
// equals kBatchBlocks sequential philox4x32_10 calls.
void RandomSource::refill()
{
    std::uint32_t c0[kBatchBlocks], c1[kBatchBlocks], c2[kBatchBlocks], c3[kBatchBlocks];
    for (int j = 0; j < kBatchBlocks; ++j)
    {
        const std::uint64_t blk = block_ + std::uint64_t(j);
        c0[j] = std::uint32_t(blk);
        c1[j] = std::uint32_t(blk >> 32);
        c2[j] = std::uint32_t(stream_hi_);
        c3[j] = std::uint32_t(stream_hi_ >> 32);
    }
    block_ += kBatchBlocks;
    PhiloxKey key = key_;
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        for (int j = 0; j < kBatchBlocks; ++j)
        {
            const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c0[j];
            const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c2[j];
            const std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ c1[j] ^ key[0];
            const std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ c3[j] ^ key[1];
            c1[j] = std::uint32_t(p1);
            c3[j] = std::uint32_t(p0);
            c0[j] = n0;
            c2[j] = n2;
        }
    }
    for (int j = 0; j < kBatchBlocks; ++j)
    {
        words_[std::size_t(2 * j)] = (std::uint64_t(c1[j]) << 32) | c0[j];
        words_[std::size_t(2 * j + 1)] = (std::uint64_t(c3[j]) << 32) | c2[j];
    }
    word_pos_ = 0;
}

std::uint64_t RandomSource::next_u64()
{
    if (word_pos_ == kBatchWords)
        refill();
    return words_[std::size_t(word_pos_++)];
}

double RandomSource::uniform()
{
    return to_unit_open(next_u64());
}

double RandomSource::normal()
{
    const ZigguratTables &zt = ziggurat_tables();
    for (;;)
    {
        const std::uint64_t bits = next_u64();
        const unsigned layer = unsigned(bits & 0x7F);
        const double u = double(std::int64_t(bits >> 11)) * 0x1.0p-53;
        if (u < zt.ratio[layer]) [[likely]]
            return (bits & 0x80) ? -(u * zt.x[layer]) : u * zt.x[layer];
        const double sign = (bits & 0x80) ? -1.0 : 1.0;
        if (layer == 0)
        {
            double x, y;
            do
            {
                x = -std::log(uniform()) / kZigR;
                y = -std::log(uniform());
            } while (y + y < x * x);
            return sign * (kZigR + x);
        }
        // Wedge: accept with probability (f(x) - f(x_i)) / (f(x_{i+1}) - f(x_i)),
        // evaluated relative to f(x).
        const double x = u * zt.x[layer];
        const double f0 = std::exp(-0.5 * (zt.x[layer] * zt.x[layer] - x * x));
        const double f1 = std::exp(-0.5 * (zt.x[layer + 1] * zt.x[layer + 1] - x * x));
        if (f1 + uniform() * (f0 - f1) < 1.0)
            return sign * x;
    }
}

void RandomSource::fill_normal(std::span<double> out)
{
    const ZigguratTables &zt = ziggurat_tables();
    for (double &x : out)
    {
        // Inlined fast path of normal(); falls back on rejection.
        if (word_pos_ == kBatchWords)
            refill();
        const std::uint64_t bits = words_[std::size_t(word_pos_)];
        const unsigned layer = unsigned(bits & 0x7F);
        const double u = double(std::int64_t(bits >> 11)) * 0x1.0p-53;
        if (u < zt.ratio[layer]) [[likely]]
        {
            ++word_pos_;
            x = (bits & 0x80) ? -(u * zt.x[layer]) : u * zt.x[layer];
        }
        else
        {
            x = normal();
        }
    }
}

} // namespace nchc
