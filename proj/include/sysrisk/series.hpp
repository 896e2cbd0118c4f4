#pragma once

#include "sysrisk/date.hpp"

#include <string>
#include <vector>

namespace sysrisk {

/// Daily prices for one asset. Dates strictly increasing, prices > 0,
/// at least 2 points.
struct PricePoint {
    TradingDate date;
    double price = 0.0;
};

struct PriceSeries {
    std::string asset_id;
    std::vector<PricePoint> points;

    /// Throws DataError if any invariant is violated.
    void validate() const;
};

/// Simple per-period returns for one asset (price ratio minus one).
/// Dates strictly increasing, every return > -1.
struct ReturnPoint {
    TradingDate date;
    double value = 0.0;
};

struct ReturnSeries {
    std::string asset_id;
    std::vector<ReturnPoint> points;

    void validate() const;
};

/// N assets by T dates of returns on a shared calendar: the return
/// matrix with one row per asset. No missing cells, N >= 1, T >= 2.
struct AlignedPanel {
    std::vector<std::string> asset_ids;       // length N
    std::vector<TradingDate> dates;           // length T, strictly increasing
    std::vector<std::vector<double>> returns; // N rows of length T

    std::size_t n_assets() const { return asset_ids.size(); }
    std::size_t n_periods() const { return dates.size(); }

    void validate() const;

    /// Extract one row as a ReturnSeries on the panel calendar.
    ReturnSeries row_series(std::size_t row) const;
};

} // namespace sysrisk
