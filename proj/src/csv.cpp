#include "sysrisk/csv.hpp"

#include "sysrisk/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

namespace sysrisk {

namespace {

// getline tolerant of trailing \r (CRLF input).
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || field.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                        field + "'");
    }
    return value;
}

TradingDate parse_date_field(const std::string& field, std::size_t line_no) {
    try {
        return TradingDate::parse(field);
    } catch (const DataError& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

std::string read_header(std::istream& in) {
    std::string header;
    if (!read_line(in, header)) throw DataError("empty input: missing CSV header");
    return header;
}

} // namespace

const char* to_string(CsvFormat f) {
    switch (f) {
        case CsvFormat::Prices: return "prices";
        case CsvFormat::Returns: return "returns";
        case CsvFormat::Constituents: return "constituents";
        case CsvFormat::Panel: return "panel";
    }
    return "unknown";
}

CsvFormat detect_format(std::istream& in) {
    const std::string header = read_header(in);
    if (header == "date,price") return CsvFormat::Prices;
    if (header == "date,return") return CsvFormat::Returns;
    if (header == "date,firm_id,sic,market_cap,return") return CsvFormat::Constituents;
    if (header.rfind("date,", 0) == 0) return CsvFormat::Panel;
    throw DataError("unrecognized CSV header '" + header + "'");
}

PriceSeries parse_price_csv(std::istream& in, const std::string& asset_id) {
    const std::string header = read_header(in);
    if (header != "date,price") {
        throw DataError("expected header 'date,price', got '" + header + "'");
    }
    PriceSeries series;
    series.asset_id = asset_id;
    std::string line;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw DataError("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
        }
        const TradingDate date = parse_date_field(fields[0], line_no);
        const double price = parse_number(fields[1], line_no, "price");
        if (price <= 0.0) {
            throw DataError("line " + std::to_string(line_no) + ": non-positive price " +
                            fields[1]);
        }
        series.points.push_back({date, price});
    }
    std::stable_sort(series.points.begin(), series.points.end(),
                     [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        if (series.points[i].date == series.points[i - 1].date) {
            throw DataError("duplicate date " + series.points[i].date.to_string() + " in '" +
                            asset_id + "'");
        }
    }
    if (series.points.size() < 2) {
        throw DataError("price series '" + asset_id + "' needs at least 2 rows, has " +
                        std::to_string(series.points.size()));
    }
    series.validate();
    return series;
}

ReturnSeries parse_return_csv(std::istream& in, const std::string& asset_id) {
    const std::string header = read_header(in);
    if (header != "date,return") {
        throw DataError("expected header 'date,return', got '" + header + "'");
    }
    ReturnSeries series;
    series.asset_id = asset_id;
    std::string line;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw DataError("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
        }
        const TradingDate date = parse_date_field(fields[0], line_no);
        const double value = parse_number(fields[1], line_no, "return");
        if (value <= -1.0) {
            throw DataError("line " + std::to_string(line_no) + ": return <= -1: " + fields[1]);
        }
        series.points.push_back({date, value});
    }
    std::stable_sort(series.points.begin(), series.points.end(),
                     [](const ReturnPoint& a, const ReturnPoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        if (series.points[i].date == series.points[i - 1].date) {
            throw DataError("duplicate date " + series.points[i].date.to_string() + " in '" +
                            asset_id + "'");
        }
    }
    series.validate();
    return series;
}

std::vector<ConstituentRecord> parse_constituents_csv(std::istream& in) {
    const std::string header = read_header(in);
    if (header != "date,firm_id,sic,market_cap,return") {
        throw DataError("expected header 'date,firm_id,sic,market_cap,return', got '" + header +
                        "'");
    }
    std::vector<ConstituentRecord> records;
    std::set<std::pair<std::string, std::int64_t>> seen;
    std::string line;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw DataError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                            std::to_string(fields.size()));
        }
        ConstituentRecord rec;
        rec.date = parse_date_field(fields[0], line_no);
        rec.firm_id = fields[1];
        if (rec.firm_id.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty firm_id");
        }
        const double sic = parse_number(fields[2], line_no, "sic");
        rec.sic = static_cast<int>(sic);
        if (sic != rec.sic || rec.sic < 0 || rec.sic > 9999) {
            throw DataError("line " + std::to_string(line_no) + ": sic out of range 0..9999: " +
                            fields[2]);
        }
        rec.market_cap = parse_number(fields[3], line_no, "market_cap");
        if (rec.market_cap <= 0.0) {
            throw DataError("line " + std::to_string(line_no) + ": non-positive market_cap");
        }
        rec.ret = parse_number(fields[4], line_no, "return");
        if (rec.ret <= -1.0) {
            throw DataError("line " + std::to_string(line_no) + ": return <= -1");
        }
        if (!seen.insert({rec.firm_id, rec.date.serial()}).second) {
            throw DataError("line " + std::to_string(line_no) + ": duplicate (firm_id, date) (" +
                            rec.firm_id + ", " + rec.date.to_string() + ")");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

AlignedPanel parse_panel_csv(std::istream& in) {
    const std::string header = read_header(in);
    const auto cols = split_fields(header);
    if (cols.size() < 2 || cols[0] != "date") {
        throw DataError("expected panel header 'date,<asset>,...', got '" + header + "'");
    }
    AlignedPanel panel;
    panel.asset_ids.assign(cols.begin() + 1, cols.end());
    panel.returns.assign(panel.asset_ids.size(), {});
    std::string line;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != cols.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(cols.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        panel.dates.push_back(parse_date_field(fields[0], line_no));
        for (std::size_t n = 0; n < panel.asset_ids.size(); ++n) {
            panel.returns[n].push_back(parse_number(fields[n + 1], line_no, "return"));
        }
    }
    panel.validate();
    return panel;
}

void write_return_series_csv(std::ostream& out, const ReturnSeries& series) {
    out << "date,return\n";
    for (const auto& p : series.points) {
        out << p.date.to_string() << ',' << format_double(p.value) << '\n';
    }
}

void write_panel_csv(std::ostream& out, const AlignedPanel& panel) {
    out << "date";
    for (const auto& id : panel.asset_ids) out << ',' << id;
    out << '\n';
    for (std::size_t t = 0; t < panel.dates.size(); ++t) {
        out << panel.dates[t].to_string();
        for (std::size_t n = 0; n < panel.asset_ids.size(); ++n) {
            out << ',' << format_double(panel.returns[n][t]);
        }
        out << '\n';
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace sysrisk
