// SPDX-License-Identifier: Apache-2.0
//
// mimome: secrecy capacity toolkit for Gaussian MIMO wiretap channels
// Copyright (C) 2026 The mimome Authors
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

#pragma once

#include <cmath>
#include <string>

#include "mimome/errors.hpp"

namespace mimome {

/// A real value or an explicit "unbounded" marker.
///
/// Rates that can be made arbitrarily large (an incompatible singular noise
/// coupling, a receiver direction the eavesdropper cannot see) are reported
/// through this type instead of a floating-point infinity, so an unbounded
/// result can never leak into arithmetic unnoticed.
class ExtendedReal {
public:
    static ExtendedReal finite(double v)
    {
        if (!std::isfinite(v))
            throw DomainError("ExtendedReal::finite given a non-finite value");
        return ExtendedReal(v, false);
    }
    static ExtendedReal unbounded() { return ExtendedReal(0.0, true); }

    bool is_unbounded() const noexcept { return unbounded_; }
    bool is_finite() const noexcept { return !unbounded_; }

    double value() const
    {
        if (unbounded_)
            throw DomainError("value() requested from an unbounded ExtendedReal");
        return value_;
    }

    // Float view for reporting only; +inf when unbounded.
    double as_double() const noexcept { return unbounded_ ? INFINITY : value_; }

    bool operator<=(double rhs) const noexcept { return !unbounded_ && value_ <= rhs; }

private:
    ExtendedReal(double v, bool u) : value_(v), unbounded_(u) {}
    double value_;
    bool unbounded_;
};

} // namespace mimome
