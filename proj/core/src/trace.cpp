#include "tscache/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tscache/errors.hpp"
#include "tscache/rng.hpp"

namespace tscache {

namespace {

std::uint64_t parse_hex(std::string_view tok, std::size_t line, const char* what) {
    if (tok.starts_with("0x") || tok.starts_with("0X")) tok.remove_prefix(2);
    std::uint64_t value = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value, 16);
    if (tok.empty() || ec != std::errc{} || ptr != end) {
        throw IngestionError(line, std::string("malformed hex ") + what + " '" + std::string(tok) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

Trace parse_trace(std::istream& in) {
    Trace trace;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::istringstream fields{std::string(line)};
        std::string op, addr, data, extra;
        fields >> op >> addr >> data >> extra;
        if (!extra.empty()) throw IngestionError(line_no, "trailing fields");
        AccessRecord rec;
        if (op == "R" || op == "r") {
            if (addr.empty() || !data.empty()) throw IngestionError(line_no, "expected 'R <hex-address>'");
            rec.op = AccessRecord::Op::read;
        } else if (op == "W" || op == "w") {
            if (addr.empty() || data.empty()) throw IngestionError(line_no, "expected 'W <hex-address> <hex-data>'");
            rec.op = AccessRecord::Op::write;
            rec.payload = parse_hex(data, line_no, "data");
        } else {
            throw IngestionError(line_no, "unknown operation '" + op + "'");
        }
        rec.address = parse_hex(addr, line_no, "address");
        trace.push_back(rec);
    }
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError(0, "cannot open trace file '" + path + "'");
    return parse_trace(in);
}

Trace traverse_55aa(std::uint64_t capacity_bytes, std::uint32_t word_bytes) {
    Trace t;
    t.reserve(static_cast<std::size_t>(4 * capacity_bytes / word_bytes));
    for (std::uint8_t byte : {std::uint8_t{0x55}, std::uint8_t{0xAA}}) {
        std::uint64_t word = 0;
        for (std::uint32_t i = 0; i < word_bytes && i < 8; ++i) word |= std::uint64_t{byte} << (8 * i);
        for (std::uint64_t a = 0; a < capacity_bytes; a += word_bytes) {
            t.push_back({AccessRecord::Op::write, a, word});
        }
        for (std::uint64_t a = 0; a < capacity_bytes; a += word_bytes) {
            t.push_back({AccessRecord::Op::read, a, std::nullopt});
        }
    }
    return t;
}

Trace uniform_random(std::uint64_t seed, std::size_t n, std::uint64_t span_bytes, std::uint32_t word_bytes) {
    RngStream rng(seed);
    const std::uint64_t words = span_bytes / word_bytes;
    Trace t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t a = (rng.engine()() % words) * word_bytes;
        if (rng.engine()() & 1u) {
            t.push_back({AccessRecord::Op::write, a, rng.engine()()});
        } else {
            t.push_back({AccessRecord::Op::read, a, std::nullopt});
        }
    }
    return t;
}

std::optional<Trace> builtin_trace(std::string_view spec, std::uint64_t capacity_bytes, std::uint32_t word_bytes) {
    if (spec == "traverse-55aa") return traverse_55aa(capacity_bytes, word_bytes);
    constexpr std::string_view prefix = "uniform-random(";
    if (spec.starts_with(prefix) && spec.ends_with(")")) {
        std::string args(spec.substr(prefix.size(), spec.size() - prefix.size() - 1));
        for (char& ch : args) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream in(args);
        std::uint64_t seed = 0;
        std::size_t n = 0;
        std::string extra;
        if (!(in >> seed >> n) || (in >> extra)) {
            throw IngestionError(0, "expected uniform-random(seed, n), got '" + std::string(spec) + "'");
        }
        return uniform_random(seed, n, 4 * capacity_bytes, word_bytes);
    }
    return std::nullopt;
}

} // namespace tscache
