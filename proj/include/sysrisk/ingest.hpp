#pragma once

#include "sysrisk/series.hpp"

#include <vector>

namespace sysrisk {

/// Convert prices to simple returns: r(t_i) = p(t_i)/p(t_{i-1}) - 1,
/// stamped with the later date. Output length is len(p) - 1.
ReturnSeries prices_to_returns(const PriceSeries& prices);

/// Align several return series onto the intersection of their dates,
/// sorted ascending, preserving input asset order. Throws DataError if
/// the intersection is empty or shorter than 2 dates.
AlignedPanel align(const std::vector<ReturnSeries>& series);

/// Compound consecutive non-overlapping blocks of `period` returns into
/// one return per block, prod(1+r) - 1, stamped with the block's last
/// date. A trailing partial block is dropped; period 1 is the identity.
AlignedPanel aggregate(const AlignedPanel& panel, std::size_t period);

/// Restrict a panel to dates within [from, to] inclusive. Throws
/// DataError if fewer than 2 dates remain.
AlignedPanel clip_date_range(const AlignedPanel& panel, const TradingDate& from,
                             const TradingDate& to);

} // namespace sysrisk
