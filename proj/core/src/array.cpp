#include "tscache/array.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "tscache/errors.hpp"
#include "tscache/parallel.hpp"
#include "tscache/rng.hpp"

namespace tscache {

void ArrayConfig::validate() const {
    if (rows <= 0 || cols <= 0) throw ParameterError("array dimensions must be positive");
    if (segment_width <= 0 || cols % segment_width != 0) {
        throw ParameterError("cols (" + std::to_string(cols) + ") not divisible by segment width (" +
                             std::to_string(segment_width) + ")");
    }
    if (max_extend_cycles < 1) throw ParameterError("max_extend_cycles must be at least 1");
    if (!(vdd_mv > 0.0)) throw ParameterError("array vdd must be positive");
}

BitPattern BitPattern::from_bytes(std::initializer_list<std::uint8_t> bytes) {
    return from_bytes(std::span<const std::uint8_t>(bytes.begin(), bytes.size()));
}

BitPattern BitPattern::from_bytes(std::span<const std::uint8_t> bytes) {
    BitPattern p;
    p.bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes) {
        for (int i = 0; i < 8; ++i) p.bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
    }
    return p;
}

ArrayInstance::ArrayInstance(ArrayConfig config, double reference_swing_mv)
    : config_(config), reference_swing_mv_(reference_swing_mv) {
    config_.validate();
    const auto n = static_cast<std::size_t>(config_.rows) * static_cast<std::size_t>(config_.cols);
    t150_.assign(n, 1.0);
    bits_.assign(n, 0);
    sas_.assign(static_cast<std::size_t>(config_.cols), SenseAmp{});
}

std::size_t ArrayInstance::index(int row, int col) const {
    if (row < 0 || row >= config_.rows || col < 0 || col >= config_.cols) {
        throw ParameterError("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") out of range");
    }
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(config_.cols) + static_cast<std::size_t>(col);
}

CellSample ArrayInstance::cell(int row, int col) const {
    const std::size_t i = index(row, col);
    return CellSample{bits_[i], t150_[i]};
}

void ArrayInstance::set_cell(int row, int col, CellSample sample) {
    if (!(sample.t150_ns > 0.0)) throw ParameterError("t150 must be positive");
    const std::size_t i = index(row, col);
    t150_[i] = sample.t150_ns;
    bits_[i] = sample.stored_bit ? 1 : 0;
}

bool ArrayInstance::operator==(const ArrayInstance& o) const {
    auto same_sas = std::equal(sas_.begin(), sas_.end(), o.sas_.begin(), o.sas_.end(),
                               [](const SenseAmp& a, const SenseAmp& b) { return a.v_os_mv() == b.v_os_mv(); });
    return config_.rows == o.config_.rows && config_.cols == o.config_.cols &&
           reference_swing_mv_ == o.reference_swing_mv_ && t150_ == o.t150_ && bits_ == o.bits_ && same_sas &&
           weak_map_ == o.weak_map_;
}

ArrayInstance build_array(const ArrayConfig& config, const DischargeDistribution& dist, const OffsetModel& offsets,
                          const BitPattern& contents, std::uint64_t master_seed) {
    config.validate();
    offsets.validate();
    const auto len = contents.bits.size();
    if (len == 0 || static_cast<std::size_t>(config.cols) % len != 0) {
        throw ParameterError("contents pattern length must divide the column count");
    }
    ArrayInstance a(config, dist.reference_swing_mv);

    RngStream cell_rng(master_seed, 0);
    std::lognormal_distribution<double> t150(dist.mu, dist.sigma);
    std::size_t i = 0;
    for (int r = 0; r < config.rows; ++r) {
        for (int c = 0; c < config.cols; ++c, ++i) {
            a.t150_[i] = t150(cell_rng.engine());
            a.bits_[i] = contents.bits[static_cast<std::size_t>(c) % len];
        }
    }
    RngStream sa_rng(master_seed, 1);
    for (auto& sa : a.sas_) sa = offsets.draw(sa_rng, config.vdd_mv);
    return a;
}

SenseSchedule make_schedule(const TimingConfig& timing, double ck_ns, double k) {
    const TimingInstants t = timing_instants(timing, ck_ns);
    SenseSchedule s;
    s.t_first_ns = t.t_sae1_ns;
    s.t_retry_step_ns = t.t_retry_step_ns;
    s.base_cycles = timing.wl_enable_cycles;
    s.extend_cycles_per_retry = timing.extend_cycles_per_retry;
    s.k = k;
    return s;
}

namespace {

struct ColumnResult {
    int confirm_phase = -1;  // -1: never confirmed
    std::uint8_t data = 0;
};

ColumnResult resolve_column(const ArrayInstance& array, int row, int col, std::uint8_t stored,
                            const SenseSchedule& schedule) {
    const auto& cfg = array.config();
    const CellSample cell{stored, array.t150(row, col)};
    const double v_os = array.sense_amp(col).v_os_mv();
    ColumnResult out;
    for (int phase = 0; phase <= cfg.max_extend_cycles; ++phase) {
        const double t = schedule.t_first_ns + static_cast<double>(phase) * schedule.t_retry_step_ns;
        const double v1 = bitline_delta(cell, t, array.reference_swing_mv(), cfg.vdd_mv);
        const SenseEvent ev = cross_sense(v1, v_os, schedule.k);
        out.data = ev.q1;
        if (!ev.error) {
            if (ev.q1 != stored) {
                throw InvariantViolation("confirmed read disagrees with stored bit at (" + std::to_string(row) +
                                         ", " + std::to_string(col) + ")");
            }
            out.confirm_phase = phase;
            return out;
        }
    }
    return out;
}

} // namespace

SegmentRead read_segment(const ArrayInstance& array, int row, int segment, const SenseSchedule& schedule,
                         std::span<const std::uint8_t> stored) {
    const auto& cfg = array.config();
    if (row < 0 || row >= cfg.rows) throw ParameterError("row " + std::to_string(row) + " out of range");
    if (segment < 0 || segment >= cfg.segments()) {
        throw ParameterError("segment " + std::to_string(segment) + " out of range");
    }
    const int width = cfg.segment_width;
    if (!stored.empty() && static_cast<int>(stored.size()) != width) {
        throw ParameterError("stored-bit override must cover exactly one segment");
    }
    SegmentRead out;
    out.data.resize(static_cast<std::size_t>(width));
    int worst = 0;
    for (int j = 0; j < width; ++j) {
        const int col = segment * width + j;
        const std::uint8_t bit = stored.empty() ? array.stored_bit(row, col) : stored[static_cast<std::size_t>(j)];
        const ColumnResult r = resolve_column(array, row, col, bit, schedule);
        out.data[static_cast<std::size_t>(j)] = r.data;
        if (r.confirm_phase != 0) out.first_phase_error = true;
        if (r.confirm_phase < 0) {
            out.uncorrected = true;
            worst = cfg.max_extend_cycles;
        } else {
            worst = std::max(worst, r.confirm_phase);
        }
    }
    out.retries = worst;
    return out;
}

ReadOutcome read_row(const ArrayInstance& array, int row, const SenseSchedule& schedule) {
    const auto& cfg = array.config();
    if (row < 0 || row >= cfg.rows) throw ParameterError("row " + std::to_string(row) + " out of range");
    const int nseg = cfg.segments();
    ReadOutcome out;
    out.data.reserve(static_cast<std::size_t>(cfg.cols));
    out.segment_retries.resize(static_cast<std::size_t>(nseg));
    std::vector<bool> unresolved(static_cast<std::size_t>(nseg), false);
    int worst = 0;
    for (int s = 0; s < nseg; ++s) {
        SegmentRead seg = read_segment(array, row, s, schedule);
        out.data.insert(out.data.end(), seg.data.begin(), seg.data.end());
        out.segment_retries[static_cast<std::size_t>(s)] = seg.retries;
        unresolved[static_cast<std::size_t>(s)] = seg.uncorrected;
        out.uncorrected = out.uncorrected || seg.uncorrected;
        worst = std::max(worst, seg.retries);
    }
    // A segment is still flagged after phase p while its retry count exceeds p.
    const int phases = cfg.max_extend_cycles + 1;
    out.segment_errors.assign(static_cast<std::size_t>(phases), std::vector<bool>(static_cast<std::size_t>(nseg)));
    for (int p = 0; p < phases; ++p) {
        for (int s = 0; s < nseg; ++s) {
            const auto si = static_cast<std::size_t>(s);
            out.segment_errors[static_cast<std::size_t>(p)][si] = unresolved[si] || out.segment_retries[si] > p;
        }
    }
    out.cycles_used = schedule.base_cycles + schedule.extend_cycles_per_retry * worst;
    return out;
}

ErrorRates& ErrorRates::operator+=(const ErrorRates& o) noexcept {
    bits += o.bits;
    flagged_bits += o.flagged_bits;
    plain_error_bits += o.plain_error_bits;
    false_positive_bits += o.false_positive_bits;
    segments += o.segments;
    flagged_segments += o.flagged_segments;
    return *this;
}

std::vector<ErrorRates> measure_error_curve(const DischargeDistribution& dist, const OffsetModel& offsets,
                                            const ArrayConfig& config, std::span<const double> times_ns,
                                            std::uint64_t trials, std::uint64_t master_seed,
                                            const MeasureOptions& options) {
    if (trials == 0) throw ParameterError("trials must be positive");
    for (double t : times_ns) {
        if (!(t >= 0.0)) throw ParameterError("discharge times must be non-negative");
    }
    config.validate();
    unsigned threads = options.threads == 0 ? default_threads() : options.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::vector<ErrorRates>> partial(threads, std::vector<ErrorRates>(times_ns.size()));

    const int width = config.segment_width;
    const int nseg = config.segments();
    const double k = options.k;

    parallel_for(trials, threads, [&](unsigned worker, std::size_t trial) {
        const ArrayInstance a = build_array(config, dist, offsets, options.contents, derive_seed(master_seed, trial));
        auto& acc = partial[worker];
        for (std::size_t ti = 0; ti < times_ns.size(); ++ti) {
            const double t = times_ns[ti];
            ErrorRates& e = acc[ti];
            for (int r = 0; r < config.rows; ++r) {
                for (int s = 0; s < nseg; ++s) {
                    bool seg_flag = false;
                    for (int j = 0; j < width; ++j) {
                        const int c = s * width + j;
                        const CellSample cell = a.cell(r, c);
                        const double v1 = bitline_delta(cell, t, a.reference_swing_mv(), config.vdd_mv);
                        const SenseEvent ev = cross_sense(v1, a.sense_amp(c).v_os_mv(), k);
                        const bool q1_right = ev.q1 == cell.stored_bit;
                        if (!ev.error && !q1_right) {
                            throw InvariantViolation("confirmed read disagrees with stored bit");
                        }
                        e.plain_error_bits += q1_right ? 0 : 1;
                        if (ev.error) {
                            ++e.flagged_bits;
                            e.false_positive_bits += q1_right ? 1 : 0;
                            seg_flag = true;
                        }
                    }
                    ++e.segments;
                    e.flagged_segments += seg_flag ? 1 : 0;
                }
            }
            e.bits += static_cast<std::uint64_t>(config.rows) * static_cast<std::uint64_t>(config.cols);
        }
    });

    std::vector<ErrorRates> total(times_ns.size());
    for (const auto& acc : partial) {
        for (std::size_t ti = 0; ti < total.size(); ++ti) total[ti] += acc[ti];
    }
    return total;
}

ErrorRates measure_ber_der(const DischargeDistribution& dist, const OffsetModel& offsets, const ArrayConfig& config,
                           double t_discharge_ns, std::uint64_t trials, std::uint64_t master_seed,
                           const MeasureOptions& options) {
    const double times[] = {t_discharge_ns};
    return measure_error_curve(dist, offsets, config, times, trials, master_seed, options).front();
}

WeakMap run_bist(const ArrayInstance& array, const SenseSchedule& schedule) {
    const auto& cfg = array.config();
    WeakMap weak;
    for (std::uint8_t byte : {std::uint8_t{0x55}, std::uint8_t{0xAA}}) {
        for (int r = 0; r < cfg.rows; ++r) {
            for (int c = 0; c < cfg.cols; ++c) {
                const auto bit = static_cast<std::uint8_t>((byte >> (c % 8)) & 1u);
                if (resolve_column(array, r, c, bit, schedule).confirm_phase < 0) weak.insert(CellIndex{r, c});
            }
        }
    }
    return weak;
}

} // namespace tscache
