#include "sysrisk/ingest.hpp"

#include "sysrisk/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

namespace sysrisk {

ReturnSeries prices_to_returns(const PriceSeries& prices) {
    prices.validate();
    ReturnSeries out;
    out.asset_id = prices.asset_id;
    out.points.reserve(prices.points.size() - 1);
    for (std::size_t i = 1; i < prices.points.size(); ++i) {
        const double r = prices.points[i].price / prices.points[i - 1].price - 1.0;
        out.points.push_back({prices.points[i].date, r});
    }
    return out;
}

AlignedPanel align(const std::vector<ReturnSeries>& series) {
    if (series.empty()) throw DataError("align: no input series");
    for (const auto& s : series) s.validate();

    // Intersection of all date sets, keyed by serial day.
    std::set<std::int64_t> common;
    for (const auto& p : series[0].points) common.insert(p.date.serial());
    for (std::size_t i = 1; i < series.size(); ++i) {
        std::set<std::int64_t> here;
        for (const auto& p : series[i].points) here.insert(p.date.serial());
        std::set<std::int64_t> kept;
        std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                              std::inserter(kept, kept.begin()));
        common.swap(kept);
    }
    if (common.empty()) throw DataError("align: series share no common dates");
    if (common.size() < 2) throw DataError("align: common date range shorter than 2 dates");

    AlignedPanel panel;
    panel.dates.reserve(common.size());
    for (const auto serial : common) panel.dates.push_back(TradingDate::from_serial(serial));

    for (const auto& s : series) {
        panel.asset_ids.push_back(s.asset_id);
        std::map<std::int64_t, double> by_date;
        for (const auto& p : s.points) by_date[p.date.serial()] = p.value;
        std::vector<double> row;
        row.reserve(common.size());
        for (const auto serial : common) row.push_back(by_date.at(serial));
        panel.returns.push_back(std::move(row));
    }
    panel.validate();
    return panel;
}

AlignedPanel aggregate(const AlignedPanel& panel, std::size_t period) {
    panel.validate();
    if (period < 1) throw ConfigError("aggregate: period must be >= 1");
    if (period > panel.n_periods()) {
        throw ConfigError("aggregate: period " + std::to_string(period) +
                          " exceeds panel length " + std::to_string(panel.n_periods()));
    }
    if (period == 1) return panel;

    const std::size_t blocks = panel.n_periods() / period;
    if (blocks < 2) {
        throw DataError("aggregate: period " + std::to_string(period) + " leaves " +
                        std::to_string(blocks) + " full block(s), need at least 2");
    }
    AlignedPanel out;
    out.asset_ids = panel.asset_ids;
    out.dates.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        out.dates.push_back(panel.dates[(b + 1) * period - 1]);
    }
    out.returns.assign(panel.n_assets(), {});
    for (std::size_t n = 0; n < panel.n_assets(); ++n) {
        out.returns[n].reserve(blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            double growth = 1.0;
            for (std::size_t k = 0; k < period; ++k) {
                growth *= 1.0 + panel.returns[n][b * period + k];
            }
            out.returns[n].push_back(growth - 1.0);
        }
    }
    out.validate();
    return out;
}

AlignedPanel clip_date_range(const AlignedPanel& panel, const TradingDate& from,
                             const TradingDate& to) {
    panel.validate();
    if (to < from) throw ConfigError("date range: 'to' precedes 'from'");
    AlignedPanel out;
    out.asset_ids = panel.asset_ids;
    out.returns.assign(panel.n_assets(), {});
    for (std::size_t t = 0; t < panel.n_periods(); ++t) {
        if (panel.dates[t] < from || to < panel.dates[t]) continue;
        out.dates.push_back(panel.dates[t]);
        for (std::size_t n = 0; n < panel.n_assets(); ++n) {
            out.returns[n].push_back(panel.returns[n][t]);
        }
    }
    if (out.dates.size() < 2) {
        throw DataError("date range " + from.to_string() + ".." + to.to_string() +
                        " leaves fewer than 2 dates");
    }
    out.validate();
    return out;
}

} // namespace sysrisk
