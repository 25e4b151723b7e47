#pragma once

#include <optional>
#include <string>

namespace sphlas {

// Hex-encoded SHA-256; used to derive file names from structured cache keys.
std::string sha256_hex(const std::string& data);

// Write content to a unique sibling temp file, then rename onto path, so
// concurrent writers never expose a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

std::optional<std::string> read_file(const std::string& path);

// A directory of JSON documents addressed by arbitrary key strings. The file
// name is <prefix>-<sha256(key)>.json; every stored document embeds its key,
// and load verifies it to rule out collisions. An empty dir disables storage.
struct DiskCache {
    std::string dir;

    bool enabled() const { return !dir.empty(); }
    std::string path_for(const std::string& prefix, const std::string& key) const;
    // Returns the document only when the file exists and its "key" field
    // matches; damaged or mismatched files are treated as absent.
    bool contains(const std::string& prefix, const std::string& key) const;
    std::optional<std::string> load(const std::string& prefix, const std::string& key) const;
    void store(const std::string& prefix, const std::string& key, const std::string& content) const;
};

}  // namespace sphlas
