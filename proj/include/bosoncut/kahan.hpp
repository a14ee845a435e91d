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

#ifndef BOSONCUT_KAHAN_HPP
#define BOSONCUT_KAHAN_HPP

#include <cmath>
#include <complex>

namespace bosoncut {

/// Neumaier compensated accumulator.  Unlike plain Kahan summation the
/// running error term also survives terms larger in magnitude than the
/// accumulated sum, which alternating permanent expansions produce.
template <typename T>
class KahanSum {
public:
    void add(const T& value) {
        const T t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    void merge(const KahanSum<T>& other) {
        add(other.sum_);
        add(other.compensation_);
    }

    T get() const { return sum_ + compensation_; }

private:
    T sum_{};
    T compensation_{};
};

/// Complex sums compensate the two components independently.
template <typename S>
class KahanSum<std::complex<S>> {
public:
    void add(const std::complex<S>& value) {
        real_.add(value.real());
        imag_.add(value.imag());
    }

    void merge(const KahanSum<std::complex<S>>& other) {
        real_.merge(other.real_);
        imag_.merge(other.imag_);
    }

    std::complex<S> get() const { return {real_.get(), imag_.get()}; }

private:
    KahanSum<S> real_;
    KahanSum<S> imag_;
};

} // namespace bosoncut

#endif
