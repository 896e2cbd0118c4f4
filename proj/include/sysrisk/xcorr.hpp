#pragma once

#include "sysrisk/series.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace sysrisk {

/// Which series is treated as moving first. At lag l the leader's value
/// from l steps back is paired with the follower's current value.
enum class Direction { ALeadsB, BLeadsA };

const char* to_string(Direction d);

/// Per-lag covariance sums between two demeaned windows of length k:
/// sums[l] pairs the first argument shifted l steps ahead against the
/// second, over the k - l overlapping steps (counts[l]).
struct LagCovariances {
    std::vector<double> sums;       // length k
    std::vector<std::size_t> counts; // k, k-1, ..., 1
};

/// Cross-correlation coefficients for every lag in [0, k), plus the
/// +-2/sqrt(k) significance threshold.
struct XCorrReport {
    std::vector<double> r;
    double band = 0.0;
    std::size_t k = 0;
    Direction direction = Direction::ALeadsB;
};

/// Rolling per-window coefficient at one chosen lag. Windows whose
/// standard deviation vanishes produce a gap entry (no coefficient)
/// rather than disappearing from the sequence.
struct RollingXCorrResult {
    std::size_t lag = 0;
    std::size_t window_length = 0;
    struct Entry {
        TradingDate window_end_date;
        std::optional<double> r_at_lag;
        double band = 0.0;
    };
    std::vector<Entry> entries;
};

constexpr std::size_t kDefaultXCorrWindow = 90;
constexpr std::size_t kDefaultXCorrLag = 1;

/// sums[l] = sum_t a[t+l] * b[t]: the tail of the full linear
/// convolution-correlation product from its center element onward.
/// Inputs must be demeaned by the caller and equal length k >= 2.
LagCovariances lag_covariances(const std::vector<double>& a, const std::vector<double>& b);

/// Demean both windows, accumulate lag covariances (roles swapped per
/// `direction`), normalize each lag by its overlap count and by the
/// product of population standard deviations. band = 2/sqrt(k).
/// Throws NumericError when either window is constant.
XCorrReport xcorr(const std::vector<double>& a, const std::vector<double>& b,
                  Direction direction);

/// Same contract as xcorr computed by a direct double loop over raw
/// inputs; the independent cross-check of the convolution construction.
XCorrReport xcorr_bruteforce(const std::vector<double>& a, const std::vector<double>& b,
                             Direction direction);

/// Slide a window over two date-aligned series and record r at one lag
/// per position. Constant windows yield gap entries.
RollingXCorrResult rolling_xcorr(const ReturnSeries& a, const ReturnSeries& b,
                                 std::size_t window = kDefaultXCorrWindow,
                                 std::size_t stride = 1,
                                 std::size_t lag = kDefaultXCorrLag,
                                 Direction direction = Direction::ALeadsB);

/// -1, 0 or +1 for below -band / inside / above +band.
int significance(double r, double band);

double significance_band(std::size_t k);

} // namespace sysrisk
