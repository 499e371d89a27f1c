// SPDX-License-Identifier: Apache-2.0
//
// ris-corr: spatial-temporal correlation and degrees of freedom of RIS arrays
// Copyright (C) 2026 The ris-corr authors
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
#ifndef RIS_ERROR_HPP
#define RIS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ris {

// Bad argument or configuration value.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// 1-based ordinal or count outside its valid range.
class index_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Dense storage would exceed the configured memory budget.
class capacity_error : public std::runtime_error {
public:
    capacity_error(std::size_t required_bytes, std::size_t budget_bytes)
        : std::runtime_error("memory budget exceeded: need " + std::to_string(required_bytes) +
                             " bytes, budget is " + std::to_string(budget_bytes) + " bytes"),
          required_bytes_(required_bytes),
          budget_bytes_(budget_bytes)
    {
    }

    std::size_t required_bytes() const noexcept { return required_bytes_; }
    std::size_t budget_bytes() const noexcept { return budget_bytes_; }

private:
    std::size_t required_bytes_;
    std::size_t budget_bytes_;
};

// A numerical post-condition (PSD, trace, reconstruction, ...) failed.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input is valid in general but not for this operation, e.g. R(tau != 0) to a symmetric solver.
class unsupported_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Spectrum without any decay; no knee exists.
class degenerate_spectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs outside the range where a heuristic formula is defined.
class out_of_domain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class fit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Zero speed: the temporal correlation never drops.
class no_decorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Output could not be written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ris

#endif
