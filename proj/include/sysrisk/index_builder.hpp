#pragma once

#include "sysrisk/csv.hpp"
#include "sysrisk/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace sysrisk {

/// Inclusive SIC code range selecting a sector universe.
struct SectorFilter {
    int sic_lo = 0;
    int sic_hi = 9999;

    SectorFilter() = default;
    SectorFilter(int lo, int hi);

    bool contains(int sic) const { return sic >= sic_lo && sic <= sic_hi; }
};

/// The sector universes used throughout: banks 6000-6199,
/// brokerages 6200-6299, insurers 6300-6499.
std::map<std::string, SectorFilter> standard_sector_filters();

/// Build a market-cap-weighted sector return index. For each date the
/// index return is sum_i w_i * ret_i over firms passing the filter that
/// date, with w_i = market_cap_i / sum_j market_cap_j (same-date caps).
/// Throws DataError if no record passes the filter or on duplicate
/// (firm_id, date) pairs. Output dates ascend.
ReturnSeries build_index(const std::vector<ConstituentRecord>& records,
                         const SectorFilter& filter, const std::string& index_id);

} // namespace sysrisk
