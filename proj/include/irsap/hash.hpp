// SPDX-License-Identifier: Apache-2.0
//
// irsap - codebook design and evaluation for IRS-integrated access points
// Copyright (C) 2026 The irsap authors
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


#ifndef IRSAP_HASH_HPP
#define IRSAP_HASH_HPP

#include <bit>
#include <cstdint>
#include <string_view>

namespace irsap
{
    // FNV-1a accumulator used for geometry and config fingerprints
    class Fnv1a
    {
    public:
        Fnv1a &bytes(const void *data, std::size_t size)
        {
            const auto *p = static_cast<const unsigned char *>(data);
            for (std::size_t i = 0; i < size; ++i)
            {
                state_ ^= p[i];
                state_ *= 0x100000001b3ULL;
            }
            return *this;
        }
        Fnv1a &add(double v) { return add(std::bit_cast<std::uint64_t>(v)); }
        Fnv1a &add(std::uint64_t v) { return bytes(&v, sizeof v); }
        Fnv1a &add(int v) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
        Fnv1a &add(std::string_view s) { return bytes(s.data(), s.size()); }
        std::uint64_t value() const { return state_; }

    private:
        std::uint64_t state_ = 0xcbf29ce484222325ULL;
    };
}

#endif
