#pragma once

#include "sysrisk/series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sysrisk {

/// Input file kinds, distinguished by CSV header:
///   Prices       `date,price`
///   Returns      `date,return`
///   Constituents `date,firm_id,sic,market_cap,return`
///   Panel        `date,asset_1,...,asset_N`
enum class CsvFormat { Prices, Returns, Constituents, Panel };

const char* to_string(CsvFormat f);

/// One firm-day row of the constituents file (format C).
struct ConstituentRecord {
    std::string firm_id;
    TradingDate date;
    int sic = 0;           // 0..9999
    double market_cap = 0; // > 0
    double ret = 0;        // > -1
};

/// Identify the format from the header line. Throws DataError on an
/// unrecognized header.
CsvFormat detect_format(std::istream& in);

/// Parse format A. Output sorted by date ascending regardless of input
/// order. Throws DataError for malformed rows (with line number),
/// non-positive prices, duplicate dates, or fewer than 2 rows.
PriceSeries parse_price_csv(std::istream& in, const std::string& asset_id);

/// Parse format B with the same strictness rules.
ReturnSeries parse_return_csv(std::istream& in, const std::string& asset_id);

/// Parse format C. Rows may arrive unordered; duplicate (firm_id, date)
/// pairs are rejected here.
std::vector<ConstituentRecord> parse_constituents_csv(std::istream& in);

/// Parse a panel CSV (`date,asset_1,...`) back into an AlignedPanel.
AlignedPanel parse_panel_csv(std::istream& in);

void write_return_series_csv(std::ostream& out, const ReturnSeries& series);
void write_panel_csv(std::ostream& out, const AlignedPanel& panel);

/// Doubles are emitted with %.17g so every written value re-parses to
/// the identical bit pattern.
std::string format_double(double v);

} // namespace sysrisk
