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

#ifndef NCHC_RNG_HPP
#define NCHC_RNG_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace nchc
{

// Identifiers written into every run manifest.
inline constexpr const char *kRngAlgorithm = "philox4x32-10";
inline constexpr const char *kUniformMethod = "u53: ((bits64 >> 11) + 0.5) * 2^-53, open interval (0,1)";
inline constexpr const char *kNormalMethod =
    "ziggurat-128 (Marsaglia-Tsang layers, R=3.442619855899, V=9.91256303526217e-3; per draw: layer=bits[0:7], "
    "sign=bit 7, uniform=bits[11:64]; Marsaglia exponential tail)";
inline constexpr const char *kStreamDerivation = "splitmix64 chain over (master_seed, path...) -> key[64] and counter high word[64]";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., Random123). Stateless bijection of
// the counter for a given key.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

// Addresses one independent random stream: a master seed plus a hierarchical
// path such as {experiment, grid_index, trial_index, object_index}.
struct SeedStream
{
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> path;

    SeedStream() = default;
    SeedStream(std::uint64_t seed, std::vector<std::uint64_t> p = {}) : master_seed(seed), path(std::move(p)) {}

    // Copy of this stream with additional path components appended.
    SeedStream child(std::initializer_list<std::uint64_t> extra) const;
    SeedStream child(std::uint64_t extra) const { return child({extra}); }
};

// Sequential sampler over one SeedStream. Each Philox block yields two 64-bit
// words; a uniform consumes one word, a normal one word plus occasional extra
// words for ziggurat wedge and tail rejections. Identical streams produce
// identical sequences on any thread and any run.
class RandomSource
{
public:
    explicit RandomSource(const SeedStream &stream);

    std::uint64_t next_u64();
    double uniform();           // open interval (0, 1)
    double normal();            // N(0, 1)
    void fill_normal(std::span<double> out);

private:
    static constexpr int kBatchBlocks = 8;
    static constexpr int kBatchWords = 2 * kBatchBlocks;

    void refill();

    PhiloxKey key_{};
    std::uint64_t stream_hi_ = 0;
    std::uint64_t block_ = 0;   // next counter block to generate

    std::array<std::uint64_t, kBatchWords> words_{};
    int word_pos_ = kBatchWords;
};

} // namespace nchc

#endif
