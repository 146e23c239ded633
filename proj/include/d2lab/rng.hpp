// Copyright 2026 The d2lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef D2LAB_RNG_HPP
#define D2LAB_RNG_HPP

#include <cstdint>

namespace d2lab {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stateless generator keyed by (seed, stream, counter). Every shot owns a
// stream, so results do not depend on how shots are split across workers.
class CounterRng {
   public:
    CounterRng(uint64_t seed, uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ull))) {}

    uint64_t at(uint64_t counter) const { return splitmix64(key_ ^ splitmix64(counter * 0xd1342543de82ef95ull + 1)); }
    double uniform_at(uint64_t counter) const { return static_cast<double>(at(counter) >> 11) * 0x1.0p-53; }
    bool bit_at(uint64_t counter) const { return at(counter) >> 63; }

   private:
    uint64_t key_;
};

// Counter offset for gauge/coin draws, disjoint from noise-site counters.
inline constexpr uint64_t kCoinCounterBase = uint64_t{1} << 62;

}  // namespace d2lab

#endif
