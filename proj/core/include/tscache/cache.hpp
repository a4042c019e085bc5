#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tscache/array.hpp"
#include "tscache/senseamp.hpp"
#include "tscache/timing.hpp"
#include "tscache/trace.hpp"
#include "tscache/variation.hpp"

namespace tscache {

// Way w of set s lives in row s of data arrays [w*A, (w+1)*A), A = data_arrays/ways;
// line bit b sits in array w*A + b/data_cols, column b%data_cols. Tag row s%tag_rows
// of tag array s/tag_rows holds one tag_bits-wide tag per way.
struct CacheGeometry {
    std::uint64_t capacity = 32 * 1024;
    int ways = 2;
    int line_size = 64;
    int data_arrays = 8;
    int data_rows = 256;
    int data_cols = 128;
    int tag_arrays = 4;
    int tag_rows = 64;
    int tag_cols = 64;
    int tag_bits = 32;
    int port_width = 64;

    void validate() const;
    int sets() const noexcept { return static_cast<int>(capacity / (std::uint64_t(ways) * std::uint64_t(line_size))); }
    int words_per_line() const noexcept { return line_size * 8 / port_width; }
    int arrays_per_way() const noexcept { return data_arrays / ways; }
    int segments_per_row() const noexcept { return data_cols / port_width; }
    std::uint64_t address_space_bound() const noexcept;
};

struct CacheOptions {
    int miss_penalty_cycles = 20;
    bool overlap = false;            // hide retries behind later word transfers
    bool tag_cross_sensing = true;   // false: tags read at a conservative margin
    double tag_time_scale = 0.25;    // tag bitlines are shorter (64 vs 256 rows)
    int max_extend_cycles = 4;
};

struct CacheBuildParams {
    CacheGeometry geometry;
    CacheOptions options;
    DischargeDistribution dist;
    OffsetModel offsets;
    double k = 1.0;
    TimingConfig timing;
    double ck_ns = 1.0;
    double vdd_mv = 500.0;
};

struct AccessResult {
    bool hit = false;
    int cycles = 0;
    bool corrected = false;      // hit way flagged and the retry loop confirmed it
    bool uncorrected = false;
    bool nonhit_flagged = false;  // a non-hit way flagged; ignored
    int retries = 0;
    std::optional<std::uint64_t> data;  // reads only
};

struct CacheStats {
    std::uint64_t accesses = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t read_hits = 0;
    std::uint64_t error_events = 0;          // read hits whose word segment flagged
    std::uint64_t ignored_error_events = 0;  // flags raised in the non-hit way
    std::uint64_t uncorrected_reads = 0;
    std::uint64_t extended_cycles_total = 0;
    std::uint64_t read_hit_cycles_total = 0;
    int base_cycles = 0;

    double avg_read_cycles() const noexcept;
    double der_observed() const noexcept;
};

class CacheInstance {
public:
    const CacheGeometry& geometry() const noexcept { return params_.geometry; }
    const CacheBuildParams& params() const noexcept { return params_; }
    const std::vector<ArrayInstance>& data_arrays() const noexcept { return data_; }
    const std::vector<ArrayInstance>& tag_arrays() const noexcept { return tags_; }
    std::vector<ArrayInstance>& mutable_data_arrays() noexcept { return data_; }
    const SenseSchedule& data_schedule() const noexcept { return data_schedule_; }
    const SenseSchedule& tag_schedule() const noexcept { return tag_schedule_; }

    int base_cycles() const noexcept { return data_schedule_.base_cycles; }
    bool line_disabled(int set, int way) const;
    int disabled_lines() const noexcept;

    AccessResult access(const AccessRecord& record);

    // Where a word of a (set, way) line lives in the data arrays.
    struct WordLocation {
        int array = 0;
        int row = 0;
        int segment = 0;
    };
    WordLocation locate(int set, int way, int word) const;

private:
    friend CacheInstance build_cache(const CacheBuildParams&, std::uint64_t);

    struct Line {
        bool valid = false;
        bool dirty = false;
        bool disabled = false;
        std::uint64_t tag = 0;
        std::uint64_t last_use = 0;
    };

    Line& line(int set, int way) { return lines_[static_cast<std::size_t>(set * params_.geometry.ways + way)]; }
    const Line& line(int set, int way) const {
        return lines_[static_cast<std::size_t>(set * params_.geometry.ways + way)];
    }
    int tag_path_retries(int set);
    void store_word(int set, int way, int word, std::uint64_t value);
    std::uint64_t peek_word(int set, int way, int word) const;
    void store_tag(int set, int way, std::uint64_t tag);
    int fill(int set, std::uint64_t tag);
    std::vector<std::uint64_t>& backing_line(std::uint64_t line_addr);

    CacheBuildParams params_;
    SenseSchedule data_schedule_;
    SenseSchedule tag_schedule_;
    std::vector<ArrayInstance> data_;
    std::vector<ArrayInstance> tags_;
    std::vector<Line> lines_;
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> backing_;
    std::uint64_t clock_ = 0;
};

// Builds every array from derive_seed(master_seed, i) and runs BIST; lines
// holding a weak data or tag cell are disabled.
CacheInstance build_cache(const CacheBuildParams& params, std::uint64_t master_seed);

CacheStats run_trace(CacheInstance& cache, const Trace& trace);

// (conv_cycles * ck_conv) / (avg_read_cycles * ck_ts).
double throughput_gain(const CacheStats& stats_ts, int conv_cycles, double ck_ts_ns, double ck_conv_ns);

} // namespace tscache
