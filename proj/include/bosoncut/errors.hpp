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

#ifndef BOSONCUT_ERRORS_HPP
#define BOSONCUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bosoncut {

/// Raised when a caller passes an argument outside its documented domain
/// (negative counts, xi outside [0, 1], mismatched dimensions and so on).
class invalid_argument_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when structured input (JSON configs, dataset files) fails
/// validation.  The message names the offending field.
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a request exceeds a hard size cap instead of silently
/// starting a computation that cannot finish.  The message states the cap
/// and, where one exists, a cheaper alternative.
class size_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on file read/write failures.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a sampling distribution has no probability mass left after
/// clamping, so no sample can be drawn from it.
class degenerate_distribution_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bosoncut

#endif
