/**
 * Copyright 2026 The bosoncut Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BOSONCUT_BOSONCUT_HPP
#define BOSONCUT_BOSONCUT_HPP

#include "bosoncut/cycle_combinatorics.hpp"
#include "bosoncut/errors.hpp"
#include "bosoncut/experiment.hpp"
#include "bosoncut/interferometer.hpp"
#include "bosoncut/io_util.hpp"
#include "bosoncut/kahan.hpp"
#include "bosoncut/noise_bounds.hpp"
#include "bosoncut/parallel.hpp"
#include "bosoncut/permanent.hpp"
#include "bosoncut/permutations.hpp"
#include "bosoncut/probability.hpp"
#include "bosoncut/rng.hpp"
#include "bosoncut/samplers.hpp"

namespace bosoncut {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bosoncut

#endif
