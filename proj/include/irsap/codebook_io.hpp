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


#ifndef IRSAP_CODEBOOK_IO_HPP
#define IRSAP_CODEBOOK_IO_HPP

#include "irsap/codebook.hpp"

#include <filesystem>
#include <optional>

namespace irsap
{
    inline constexpr int codebook_format_version = 1;

    // Versioned JSON: per codeword the element phases in radians plus D, d, objective and seed
    std::string codebook_to_json(const Codebook &codebook);

    // Throws HashMismatchError when `geometry_hash` is given and differs from the stored one
    Codebook codebook_from_json(const std::string &text, std::optional<std::uint64_t> geometry_hash = std::nullopt);

    void save_codebook(const std::filesystem::path &file, const Codebook &codebook);
    Codebook load_codebook(const std::filesystem::path &file, std::optional<std::uint64_t> geometry_hash = std::nullopt);

    std::string to_string(CodebookKind kind);
    CodebookKind codebook_kind_from_string(const std::string &s);
}

#endif
