#pragma once

#include <cstdint>
#include <string>

namespace sysrisk {

/// A calendar date on the trading axis. Validated on construction,
/// totally ordered by calendar order.
struct TradingDate {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31, valid for the month

    TradingDate() = default;
    TradingDate(int y, int m, int d);

    /// Days since 1970-01-01 (negative before the epoch).
    std::int64_t serial() const;

    /// Inverse of serial().
    static TradingDate from_serial(std::int64_t days);

    /// Parse strict ISO-8601 `YYYY-MM-DD`. Throws DataError on anything else.
    static TradingDate parse(const std::string& text);

    /// Format as `YYYY-MM-DD`.
    std::string to_string() const;

    friend bool operator==(const TradingDate& a, const TradingDate& b) {
        return a.year == b.year && a.month == b.month && a.day == b.day;
    }
    friend auto operator<=>(const TradingDate& a, const TradingDate& b) {
        if (auto c = a.year <=> b.year; c != 0) return c;
        if (auto c = a.month <=> b.month; c != 0) return c;
        return a.day <=> b.day;
    }
};

bool is_valid_date(int year, int month, int day);

} // namespace sysrisk
