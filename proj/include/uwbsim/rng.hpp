// SPDX-License-Identifier: Apache-2.0
//
// uwbsim  impulse-radio UWB link-level simulation library
// Copyright (C) 2026 the uwbsim authors
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

#ifndef UWBSIM_RNG_H
#define UWBSIM_RNG_H

#include <cstdint>
#include <random>

namespace uwbsim {

// Deterministic random source. All randomness in the library flows through
// explicit Rng instances; samplers are hand-rolled on top of the raw engine
// so that a (seed, stream) pair reproduces bit-identical draws on any
// platform, independent of the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    // Independent substream, e.g. one per Monte-Carlo trial. Mixing both
    // words through SplitMix keeps nearby (seed, stream) pairs decorrelated.
    static Rng substream(std::uint64_t seed, std::uint64_t stream)
    {
        return Rng(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1], safe as a log() argument
    double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    // Uniform integer on {lo, ..., hi} inclusive
    int uniform_int(int lo, int hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    // Fair +/-1
    double sign() { return (engine_() & 1) ? 1.0 : -1.0; }

    // Standard normal, Box-Muller with cached spare
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Exponential with the given rate (mean 1/rate)
    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  private:
    static std::uint64_t mix(std::uint64_t x)
    {
        // SplitMix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace uwbsim

#endif
