#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tscache {

struct AccessRecord {
    enum class Op { read, write };

    Op op = Op::read;
    std::uint64_t address = 0;
    std::optional<std::uint64_t> payload;  // writes only: one port-width word

    bool operator==(const AccessRecord&) const = default;
};

using Trace = std::vector<AccessRecord>;

// One access per line: `R <hex-address>` or `W <hex-address> <hex-data>`.
// `#` starts a comment; blank lines are skipped. Errors name the line number.
Trace parse_trace(std::istream& in);
Trace load_trace(const std::string& path);

// Writes 0x55 to every byte then reads every word, then the same with 0xAA.
Trace traverse_55aa(std::uint64_t capacity_bytes, std::uint32_t word_bytes = 8);

// n accesses, half reads and half writes on average, word aligned, over
// addresses [0, span_bytes).
Trace uniform_random(std::uint64_t seed, std::size_t n, std::uint64_t span_bytes, std::uint32_t word_bytes = 8);

// Resolves "traverse-55aa" or "uniform-random(seed, n)"; nullopt for other names.
std::optional<Trace> builtin_trace(std::string_view spec, std::uint64_t capacity_bytes, std::uint32_t word_bytes = 8);

} // namespace tscache
