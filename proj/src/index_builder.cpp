#include "sysrisk/index_builder.hpp"

#include "sysrisk/errors.hpp"

#include <cstdint>
#include <set>
#include <utility>

namespace sysrisk {

SectorFilter::SectorFilter(int lo, int hi) : sic_lo(lo), sic_hi(hi) {
    if (lo < 0 || hi > 9999 || lo > hi) {
        throw ConfigError("sector filter range must satisfy 0 <= lo <= hi <= 9999, got " +
                          std::to_string(lo) + ".." + std::to_string(hi));
    }
}

std::map<std::string, SectorFilter> standard_sector_filters() {
    return {
        {"banks", SectorFilter(6000, 6199)},
        {"brokerages", SectorFilter(6200, 6299)},
        {"insurers", SectorFilter(6300, 6499)},
    };
}

ReturnSeries build_index(const std::vector<ConstituentRecord>& records,
                         const SectorFilter& filter, const std::string& index_id) {
    struct DayAccum {
        double cap_sum = 0.0;
        double weighted_ret = 0.0; // sum of cap_i * ret_i
    };
    std::map<std::int64_t, DayAccum> days;
    std::set<std::pair<std::string, std::int64_t>> seen;

    for (const auto& rec : records) {
        if (rec.market_cap <= 0.0) {
            throw DataError("constituent '" + rec.firm_id + "' has non-positive market cap on " +
                            rec.date.to_string());
        }
        if (rec.sic < 0 || rec.sic > 9999) {
            throw DataError("constituent '" + rec.firm_id + "' has sic out of range on " +
                            rec.date.to_string());
        }
        if (!seen.insert({rec.firm_id, rec.date.serial()}).second) {
            throw DataError("duplicate (firm_id, date) pair (" + rec.firm_id + ", " +
                            rec.date.to_string() + ")");
        }
        if (!filter.contains(rec.sic)) continue;
        auto& day = days[rec.date.serial()];
        day.cap_sum += rec.market_cap;
        day.weighted_ret += rec.market_cap * rec.ret;
    }
    if (days.empty()) {
        throw DataError("no records pass sector filter " + std::to_string(filter.sic_lo) + ".." +
                        std::to_string(filter.sic_hi));
    }

    ReturnSeries index;
    index.asset_id = index_id;
    index.points.reserve(days.size());
    for (const auto& [serial, day] : days) {
        index.points.push_back({TradingDate::from_serial(serial), day.weighted_ret / day.cap_sum});
    }
    index.validate();
    return index;
}

} // namespace sysrisk
