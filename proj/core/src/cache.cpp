#include "tscache/cache.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tscache/errors.hpp"
#include "tscache/rng.hpp"

namespace tscache {

void CacheGeometry::validate() const {
    auto fail = [](const std::string& what) { throw ParameterError("cache geometry: " + what); };
    if (capacity == 0 || ways <= 0 || line_size <= 0 || data_arrays <= 0 || tag_arrays <= 0) {
        fail("sizes must be positive");
    }
    if (port_width <= 0 || port_width > 64 || (line_size * 8) % port_width != 0) {
        fail("port width must divide the line and fit in 64 bits");
    }
    if (capacity % (std::uint64_t(ways) * std::uint64_t(line_size)) != 0) {
        fail("capacity is not ways x sets x line_size");
    }
    const std::uint64_t array_bits =
        std::uint64_t(data_arrays) * std::uint64_t(data_rows) * std::uint64_t(data_cols);
    if (array_bits != capacity * 8) {
        fail("data arrays hold " + std::to_string(array_bits) + " bits, capacity needs " +
             std::to_string(capacity * 8));
    }
    if (data_arrays % ways != 0) fail("data arrays must split evenly across ways");
    if (arrays_per_way() * data_cols != line_size * 8) fail("one array row per way must hold exactly one line");
    if (data_rows != sets()) fail("data array rows must equal the set count");
    if (data_cols % port_width != 0) fail("data columns must be a multiple of the port width");
    if (tag_bits <= 0 || tag_bits > 32) fail("tag width must be in [1, 32]");
    if (tag_arrays * tag_rows != sets()) fail("tag rows must cover every set exactly once");
    if (tag_cols != ways * tag_bits) fail("each tag row must hold one tag per way");
}

std::uint64_t CacheGeometry::address_space_bound() const noexcept {
    return std::uint64_t(line_size) * std::uint64_t(sets()) * (std::uint64_t{1} << tag_bits);
}

double CacheStats::avg_read_cycles() const noexcept {
    return read_hits ? double(read_hit_cycles_total) / double(read_hits) : double(base_cycles);
}

double CacheStats::der_observed() const noexcept {
    return read_hits ? double(error_events) / double(read_hits) : 0.0;
}

bool CacheInstance::line_disabled(int set, int way) const { return line(set, way).disabled; }

int CacheInstance::disabled_lines() const noexcept {
    return static_cast<int>(std::count_if(lines_.begin(), lines_.end(), [](const Line& l) { return l.disabled; }));
}

CacheInstance::WordLocation CacheInstance::locate(int set, int way, int word) const {
    const auto& g = params_.geometry;
    const int bit = word * g.port_width;
    return WordLocation{way * g.arrays_per_way() + bit / g.data_cols, set, (bit % g.data_cols) / g.port_width};
}

void CacheInstance::store_word(int set, int way, int word, std::uint64_t value) {
    const auto loc = locate(set, way, word);
    const int width = params_.geometry.port_width;
    auto& a = data_[static_cast<std::size_t>(loc.array)];
    for (int j = 0; j < width; ++j) {
        a.set_stored_bit(loc.row, loc.segment * width + j, static_cast<std::uint8_t>((value >> j) & 1u));
    }
}

std::uint64_t CacheInstance::peek_word(int set, int way, int word) const {
    const auto loc = locate(set, way, word);
    const int width = params_.geometry.port_width;
    const auto& a = data_[static_cast<std::size_t>(loc.array)];
    std::uint64_t value = 0;
    for (int j = 0; j < width; ++j) {
        value |= std::uint64_t{a.stored_bit(loc.row, loc.segment * width + j)} << j;
    }
    return value;
}

void CacheInstance::store_tag(int set, int way, std::uint64_t tag) {
    const auto& g = params_.geometry;
    auto& a = tags_[static_cast<std::size_t>(set / g.tag_rows)];
    for (int j = 0; j < g.tag_bits; ++j) {
        a.set_stored_bit(set % g.tag_rows, way * g.tag_bits + j, static_cast<std::uint8_t>((tag >> j) & 1u));
    }
}

std::vector<std::uint64_t>& CacheInstance::backing_line(std::uint64_t line_addr) {
    auto [it, inserted] = backing_.try_emplace(line_addr);
    if (inserted) it->second.assign(static_cast<std::size_t>(params_.geometry.words_per_line()), 0);
    return it->second;
}

int CacheInstance::tag_path_retries(int set) {
    if (!params_.options.tag_cross_sensing) return 0;
    const auto& g = params_.geometry;
    const auto& a = tags_[static_cast<std::size_t>(set / g.tag_rows)];
    int worst = 0;
    for (int w = 0; w < g.ways; ++w) {
        worst = std::max(worst, read_segment(a, set % g.tag_rows, w, tag_schedule_).retries);
    }
    return worst;
}

int CacheInstance::fill(int set, std::uint64_t tag) {
    const auto& g = params_.geometry;
    int victim = -1;
    for (int w = 0; w < g.ways; ++w) {
        const Line& l = line(set, w);
        if (l.disabled) continue;
        if (!l.valid) {
            victim = w;
            break;
        }
        if (victim < 0 || l.last_use < line(set, victim).last_use) victim = w;
    }
    if (victim < 0) return -1;

    Line& v = line(set, victim);
    const auto sets = static_cast<std::uint64_t>(g.sets());
    if (v.valid && v.dirty) {
        auto& old = backing_line(v.tag * sets + static_cast<std::uint64_t>(set));
        for (int word = 0; word < g.words_per_line(); ++word) {
            old[static_cast<std::size_t>(word)] = peek_word(set, victim, word);
        }
    }
    const auto incoming = backing_line(tag * sets + static_cast<std::uint64_t>(set));
    for (int word = 0; word < g.words_per_line(); ++word) {
        store_word(set, victim, word, incoming[static_cast<std::size_t>(word)]);
    }
    store_tag(set, victim, tag);
    v.valid = true;
    v.dirty = false;
    v.tag = tag;
    return victim;
}

AccessResult CacheInstance::access(const AccessRecord& record) {
    const auto& g = params_.geometry;
    if (record.address >= g.address_space_bound()) {
        throw ParameterError("address beyond the simulated address space");
    }
    if (record.op == AccessRecord::Op::write && !record.payload) {
        throw ParameterError("write access without payload");
    }
    const auto line_bytes = static_cast<std::uint64_t>(g.line_size);
    const auto sets = static_cast<std::uint64_t>(g.sets());
    const int set = static_cast<int>((record.address / line_bytes) % sets);
    const std::uint64_t tag = record.address / (line_bytes * sets);
    const int word = static_cast<int>((record.address % line_bytes) / static_cast<std::uint64_t>(g.port_width / 8));
    const int base = data_schedule_.base_cycles;
    const int step = data_schedule_.extend_cycles_per_retry;

    const int tag_cycles = base + step * tag_path_retries(set);

    int hit_way = -1;
    for (int w = 0; w < g.ways; ++w) {
        const Line& l = line(set, w);
        if (l.valid && !l.disabled && l.tag == tag) hit_way = w;
    }

    AccessResult res;
    res.hit = hit_way >= 0;
    ++clock_;

    if (record.op == AccessRecord::Op::read) {
        if (res.hit) {
            int data_cycles = base;
            for (int w = 0; w < g.ways; ++w) {
                const auto loc = locate(set, w, word);
                const SegmentRead seg =
                    read_segment(data_[static_cast<std::size_t>(loc.array)], loc.row, loc.segment, data_schedule_);
                if (w != hit_way) {
                    res.nonhit_flagged = res.nonhit_flagged || seg.first_phase_error;
                    continue;
                }
                std::uint64_t value = 0;
                for (std::size_t j = 0; j < seg.data.size(); ++j) value |= std::uint64_t{seg.data[j]} << j;
                if (!seg.uncorrected && value != peek_word(set, w, word)) {
                    throw InvariantViolation("confirmed cache read returned stale data");
                }
                res.data = value;
                res.corrected = seg.first_phase_error && !seg.uncorrected;
                res.uncorrected = seg.uncorrected;
                res.retries = seg.retries;
                int extension = seg.retries;
                if (params_.options.overlap) {
                    extension = std::max(0, seg.retries - (g.words_per_line() - 1 - word));
                }
                data_cycles = base + step * extension;
            }
            res.cycles = std::max(tag_cycles, data_cycles);
            line(set, hit_way).last_use = clock_;
        } else {
            const int way = fill(set, tag);
            if (way >= 0) {
                res.data = peek_word(set, way, word);
                line(set, way).last_use = clock_;
            } else {
                const auto& mem = backing_line(tag * sets + static_cast<std::uint64_t>(set));
                res.data = mem[static_cast<std::size_t>(word)];
            }
            res.cycles = std::max(tag_cycles, base) + params_.options.miss_penalty_cycles;
        }
        return res;
    }

    int way = hit_way;
    if (!res.hit) way = fill(set, tag);
    if (way >= 0) {
        store_word(set, way, word, *record.payload);
        line(set, way).dirty = true;
        line(set, way).last_use = clock_;
    } else {
        backing_line(tag * sets + static_cast<std::uint64_t>(set))[static_cast<std::size_t>(word)] = *record.payload;
    }
    res.cycles = std::max(tag_cycles, base) + (res.hit ? 0 : params_.options.miss_penalty_cycles);
    return res;
}

CacheInstance build_cache(const CacheBuildParams& params, std::uint64_t master_seed) {
    const auto& g = params.geometry;
    g.validate();
    params.timing.validate();
    params.offsets.validate();
    if (!(params.options.tag_time_scale > 0.0)) throw ParameterError("tag_time_scale must be positive");
    if (params.options.miss_penalty_cycles < 0) throw ParameterError("miss penalty must be non-negative");

    CacheInstance c;
    c.params_ = params;
    c.data_schedule_ = make_schedule(params.timing, params.ck_ns, params.k);
    c.tag_schedule_ = c.data_schedule_;

    const ArrayConfig data_cfg{g.data_rows, g.data_cols, g.port_width, params.options.max_extend_cycles,
                               params.vdd_mv};
    const ArrayConfig tag_cfg{g.tag_rows, g.tag_cols, g.tag_bits, params.options.max_extend_cycles, params.vdd_mv};
    DischargeDistribution tag_dist = params.dist;
    tag_dist.mu += std::log(params.options.tag_time_scale);

    const BitPattern zeros{{0}};
    for (int i = 0; i < g.data_arrays; ++i) {
        c.data_.push_back(build_array(data_cfg, params.dist, params.offsets, zeros, derive_seed(master_seed, i)));
    }
    for (int i = 0; i < g.tag_arrays; ++i) {
        c.tags_.push_back(build_array(tag_cfg, tag_dist, params.offsets, zeros,
                                      derive_seed(master_seed, static_cast<std::uint64_t>(g.data_arrays + i))));
    }

    c.lines_.assign(static_cast<std::size_t>(g.sets() * g.ways), {});
    for (int i = 0; i < g.data_arrays; ++i) {
        auto& a = c.data_[static_cast<std::size_t>(i)];
        a.set_weak_map(run_bist(a, c.data_schedule_));
        for (const CellIndex& cell : a.weak_map()) c.line(cell.row, i / g.arrays_per_way()).disabled = true;
    }
    if (params.options.tag_cross_sensing) {
        for (int i = 0; i < g.tag_arrays; ++i) {
            auto& a = c.tags_[static_cast<std::size_t>(i)];
            a.set_weak_map(run_bist(a, c.tag_schedule_));
            for (const CellIndex& cell : a.weak_map()) {
                c.line(i * g.tag_rows + cell.row, cell.col / g.tag_bits).disabled = true;
            }
        }
    }
    return c;
}

CacheStats run_trace(CacheInstance& cache, const Trace& trace) {
    if (trace.empty()) throw ParameterError("run_trace: empty trace");
    CacheStats s;
    s.base_cycles = cache.base_cycles();
    const int penalty = cache.params().options.miss_penalty_cycles;
    for (const AccessRecord& rec : trace) {
        const AccessResult r = cache.access(rec);
        ++s.accesses;
        if (r.hit) {
            ++s.hits;
        } else {
            ++s.misses;
        }
        s.extended_cycles_total += static_cast<std::uint64_t>(r.cycles - s.base_cycles - (r.hit ? 0 : penalty));
        if (rec.op == AccessRecord::Op::read && r.hit) {
            ++s.read_hits;
            s.read_hit_cycles_total += static_cast<std::uint64_t>(r.cycles);
            if (r.corrected || r.uncorrected) ++s.error_events;
            if (r.uncorrected) ++s.uncorrected_reads;
            if (r.nonhit_flagged) ++s.ignored_error_events;
        }
    }
    return s;
}

double throughput_gain(const CacheStats& stats_ts, int conv_cycles, double ck_ts_ns, double ck_conv_ns) {
    return (static_cast<double>(conv_cycles) * ck_conv_ns) / (stats_ts.avg_read_cycles() * ck_ts_ns);
}

} // namespace tscache
