#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <vector>

#include "tscache/senseamp.hpp"
#include "tscache/timing.hpp"
#include "tscache/variation.hpp"

namespace tscache {

struct ArrayConfig {
    int rows = 256;
    int cols = 128;
    int segment_width = 64;   // columns per error detector
    int max_extend_cycles = 4;
    double vdd_mv = 500.0;

    void validate() const;
    int segments() const noexcept { return cols / segment_width; }
};

struct CellIndex {
    int row = 0;
    int col = 0;
    auto operator<=>(const CellIndex&) const = default;
};

using WeakMap = std::set<CellIndex>;

// Repeating column pattern; column c stores bits[c % bits.size()].
struct BitPattern {
    std::vector<std::uint8_t> bits;

    // Column c stores bit (c mod 8) of byte (c / 8) mod n, LSB first.
    static BitPattern from_bytes(std::initializer_list<std::uint8_t> bytes);
    static BitPattern from_bytes(std::span<const std::uint8_t> bytes);
};

class ArrayInstance {
public:
    ArrayInstance(ArrayConfig config, double reference_swing_mv);

    const ArrayConfig& config() const noexcept { return config_; }
    double reference_swing_mv() const noexcept { return reference_swing_mv_; }

    CellSample cell(int row, int col) const;
    std::uint8_t stored_bit(int row, int col) const { return bits_[index(row, col)]; }
    double t150(int row, int col) const { return t150_[index(row, col)]; }
    const SenseAmp& sense_amp(int col) const { return sas_.at(static_cast<std::size_t>(col)); }

    void set_cell(int row, int col, CellSample sample);
    void set_stored_bit(int row, int col, std::uint8_t bit) { bits_[index(row, col)] = bit ? 1 : 0; }
    void set_sense_amp(int col, SenseAmp sa) { sas_.at(static_cast<std::size_t>(col)) = sa; }

    const WeakMap& weak_map() const noexcept { return weak_map_; }
    void set_weak_map(WeakMap map) { weak_map_ = std::move(map); }

    bool operator==(const ArrayInstance&) const;

private:
    friend ArrayInstance build_array(const ArrayConfig&, const DischargeDistribution&, const OffsetModel&,
                                     const BitPattern&, std::uint64_t);

    std::size_t index(int row, int col) const;

    ArrayConfig config_;
    double reference_swing_mv_;
    std::vector<double> t150_;
    std::vector<std::uint8_t> bits_;
    std::vector<SenseAmp> sas_;
    WeakMap weak_map_;
};

// Cells come from RngStream(master_seed, 0) in row-major order, sense amps from
// RngStream(master_seed, 1).
ArrayInstance build_array(const ArrayConfig& config, const DischargeDistribution& dist,
                          const OffsetModel& offsets, const BitPattern& contents, std::uint64_t master_seed);

// When each read phase happens, in ns, and what it costs, in CK cycles.
struct SenseSchedule {
    double t_first_ns = 0.0;
    double t_retry_step_ns = 0.0;
    int base_cycles = 1;
    int extend_cycles_per_retry = 1;
    double k = 1.0;
};

SenseSchedule make_schedule(const TimingConfig& timing, double ck_ns, double k);

struct SegmentRead {
    std::vector<std::uint8_t> data;  // one bit per column of the segment
    bool first_phase_error = false;
    int retries = 0;                 // extra phases until every column confirmed
    bool uncorrected = false;
};

// Cross-senses one segment of a row, retrying while any column still flags.
// Confirmed columns latch q1 and stop sensing. `stored` overrides the cell
// contents (BIST patterns); it must hold segment_width bits when non-empty.
SegmentRead read_segment(const ArrayInstance& array, int row, int segment, const SenseSchedule& schedule,
                         std::span<const std::uint8_t> stored = {});

struct ReadOutcome {
    std::vector<std::uint8_t> data;
    // segment_errors[phase][segment]: segment still flagged after that phase.
    std::vector<std::vector<bool>> segment_errors;
    std::vector<int> segment_retries;
    int cycles_used = 0;
    bool uncorrected = false;
};

ReadOutcome read_row(const ArrayInstance& array, int row, const SenseSchedule& schedule);

struct ErrorRates {
    std::uint64_t bits = 0;
    std::uint64_t flagged_bits = 0;         // cross-sensing error flags
    std::uint64_t plain_error_bits = 0;     // single conventional sense wrong
    std::uint64_t false_positive_bits = 0;  // flagged although q1 was right
    std::uint64_t segments = 0;
    std::uint64_t flagged_segments = 0;

    double ber() const noexcept { return bits ? double(flagged_bits) / double(bits) : 0.0; }
    double der() const noexcept { return segments ? double(flagged_segments) / double(segments) : 0.0; }
    double ber_plain() const noexcept { return bits ? double(plain_error_bits) / double(bits) : 0.0; }
    double false_positive_rate() const noexcept {
        return bits ? double(false_positive_bits) / double(bits) : 0.0;
    }
    ErrorRates& operator+=(const ErrorRates& o) noexcept;
};

struct MeasureOptions {
    double k = 1.0;
    BitPattern contents = BitPattern::from_bytes({0x55});
    unsigned threads = 1;
};

// First-phase flag statistics over `trials` independently built arrays.
// Array i is built from derive_seed(master_seed, i).
ErrorRates measure_ber_der(const DischargeDistribution& dist, const OffsetModel& offsets, const ArrayConfig& config,
                           double t_discharge_ns, std::uint64_t trials, std::uint64_t master_seed,
                           const MeasureOptions& options = {});

// Same, evaluated at several discharge times on the same arrays.
std::vector<ErrorRates> measure_error_curve(const DischargeDistribution& dist, const OffsetModel& offsets,
                                            const ArrayConfig& config, std::span<const double> times_ns,
                                            std::uint64_t trials, std::uint64_t master_seed,
                                            const MeasureOptions& options = {});

// Reads every row under 0x55 and 0xAA; cells of columns that never confirm
// within max_extend_cycles are weak.
WeakMap run_bist(const ArrayInstance& array, const SenseSchedule& schedule);

} // namespace tscache
