#include "sysrisk/series.hpp"

#include "sysrisk/errors.hpp"

namespace sysrisk {

void PriceSeries::validate() const {
    if (points.size() < 2) {
        throw DataError("price series '" + asset_id + "' needs at least 2 points, has " +
                        std::to_string(points.size()));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].price <= 0.0) {
            throw DataError("price series '" + asset_id + "': non-positive price at " +
                            points[i].date.to_string());
        }
        if (i > 0 && !(points[i - 1].date < points[i].date)) {
            throw DataError("price series '" + asset_id + "': dates not strictly increasing at " +
                            points[i].date.to_string());
        }
    }
}

void ReturnSeries::validate() const {
    if (points.empty()) {
        throw DataError("return series '" + asset_id + "' is empty");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].value <= -1.0) {
            throw DataError("return series '" + asset_id + "': return <= -1 at " +
                            points[i].date.to_string());
        }
        if (i > 0 && !(points[i - 1].date < points[i].date)) {
            throw DataError("return series '" + asset_id + "': dates not strictly increasing at " +
                            points[i].date.to_string());
        }
    }
}

void AlignedPanel::validate() const {
    if (asset_ids.empty()) throw DataError("panel has no assets");
    if (dates.size() < 2) {
        throw DataError("panel needs at least 2 dates, has " + std::to_string(dates.size()));
    }
    if (returns.size() != asset_ids.size()) {
        throw DataError("panel row count does not match asset count");
    }
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw DataError("panel dates not strictly increasing at " + dates[i].to_string());
        }
    }
    for (std::size_t n = 0; n < returns.size(); ++n) {
        if (returns[n].size() != dates.size()) {
            throw DataError("panel row '" + asset_ids[n] + "' has " +
                            std::to_string(returns[n].size()) + " cells, expected " +
                            std::to_string(dates.size()));
        }
    }
}

ReturnSeries AlignedPanel::row_series(std::size_t row) const {
    ReturnSeries s;
    s.asset_id = asset_ids.at(row);
    s.points.reserve(dates.size());
    for (std::size_t t = 0; t < dates.size(); ++t) {
        s.points.push_back({dates[t], returns[row][t]});
    }
    return s;
}

} // namespace sysrisk
