/* Copyright 2026 The WKB Lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
        limitations under the License.
==============================================================================*/

#ifndef WKBLAB_VERIFY_HPP
#define WKBLAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace wkb {

struct VerifyRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass() const;
    // "check\tvalue\tthreshold\tpass" lines with values in %.17g.
    std::string table() const;
};

// Quick deterministic oracle checks covering every module; `seed` drives all
// random draws so equal seeds give identical tables.
VerifyReport run_verify(std::uint64_t seed = 0);

}  // namespace wkb

#endif  // WKBLAB_VERIFY_HPP
