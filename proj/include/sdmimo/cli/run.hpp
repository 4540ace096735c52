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

#ifndef SDMIMO_CLI_RUN_HPP
#define SDMIMO_CLI_RUN_HPP

#include "sdmimo/core/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sdmimo::cli
{
    // Exit codes: 0 success, 2 configuration error, 3 numerical failure.
    int exit_code(ErrorKind kind);

    // Runs one command line (args excludes the program name). The table goes to
    // `out` unless --output names a file; errors are one line on `err`.
    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

    int run(int argc, char **argv);
}

#endif
