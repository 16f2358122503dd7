#ifndef EQUISHOOT_IO_UTIL_HPP
#define EQUISHOOT_IO_UTIL_HPP

#include <cstdint>
#include <string>

namespace equishoot {

// Shortest round-trip decimal form of a double ("%.17g" trimmed).
std::string fmt_full(double v);

// FNV-1a 64-bit, used as the config provenance hash.
std::uint64_t fnv1a64(const std::string& s);

std::string hex64(std::uint64_t v);

void write_text_file(const std::string& path, const std::string& content);

} // namespace equishoot

#endif
