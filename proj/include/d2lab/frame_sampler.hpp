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

#ifndef D2LAB_FRAME_SAMPLER_HPP
#define D2LAB_FRAME_SAMPLER_HPP

#include <cstdint>

#include "d2lab/noise.hpp"
#include "d2lab/shots.hpp"

namespace d2lab {

/// Monte Carlo sampling of a noisy Clifford circuit by tracking a Pauli frame
/// against one noiseless reference run. Output is independent of `threads`
/// (0 = hardware concurrency).
ShotTable sample_pauli_frame(const AnnotatedCircuit &ac, size_t shots, uint64_t seed, unsigned threads = 0);

}  // namespace d2lab

#endif
