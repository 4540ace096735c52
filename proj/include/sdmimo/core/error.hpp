// SPDX-License-Identifier: Apache-2.0
//
// sdmimo - rate bounds and simulation for successive decoding over MIMO channels without CSI
// Copyright (C) 2026 The sdmimo authors
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

#ifndef SDMIMO_CORE_ERROR_HPP
#define SDMIMO_CORE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdmimo
{
    enum class ErrorKind
    {
        InvalidDomain,        // argument outside the mathematical domain of the operation
        InvalidConfig,        // malformed configuration / run plan
        NonConvergence,       // degenerate quadrature or iteration limit reached
        BracketFailure,       // root bracket does not contain a sign change
        NoSolution,           // fixed-point scan found no crossing
        UnsupportedHyperprior,
        Singular              // Hermitian form not positive definite
    };

    std::string_view to_string(ErrorKind kind);

    // All library failures are reported through this type. The CLI maps
    // InvalidConfig to exit status 2 and everything else to 3.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what)
            : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

        ErrorKind kind() const noexcept { return kind_; }
        const std::string &detail() const noexcept { return detail_; }

    private:
        ErrorKind kind_;
        std::string detail_;
    };

    [[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

    inline void require(bool cond, ErrorKind kind, const std::string &what)
    {
        if (!cond)
            throw Error(kind, what);
    }
}

#endif
