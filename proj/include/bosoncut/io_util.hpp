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

#ifndef BOSONCUT_IO_UTIL_HPP
#define BOSONCUT_IO_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "bosoncut/errors.hpp"
#include "bosoncut/interferometer.hpp"

namespace bosoncut {

/// FNV-1a 64-bit hash, rendered as 16 hex digits.  Used to fingerprint
/// interferometers and experiment configurations in output files.
inline std::string fnv1a64_hex(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

/// Stable fingerprint of an interferometer instance: the hash of its
/// canonical JSON serialization (keys sorted by nlohmann::json).
inline std::string interferometer_hash(const Interferometer& u) {
    return fnv1a64_hex(to_json(u).dump());
}

/**
 * Writes content to path atomically: the bytes go to a temporary file in
 * the same directory which is then renamed over the target, so readers
 * never observe a half-written file.
 */
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    std::error_code ec;
    if (!std::filesystem::exists(dir, ec)) {
        throw io_error("atomic_write_text: directory does not exist: " + dir.string());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw io_error("atomic_write_text: cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp, ec);
            throw io_error("atomic_write_text: write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw io_error("atomic_write_text: rename failed for " + path.string());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw io_error("read failed for " + path.string());
    }
    return buffer.str();
}

} // namespace bosoncut

#endif
