#ifndef UGRAV_INGEST_HPP
#define UGRAV_INGEST_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ugrav/domain.hpp"
#include "ugrav/errors.hpp"
#include "ugrav/linalg.hpp"

namespace ugrav {

/// One long-format observation: a bilateral flow plus its partial effect.
struct LongRecord {
    std::string origin;
    std::string destination;
    double flow = 0.0;
    double partial = 0.0;
    std::optional<std::string> group;
};

/// One square slice of a panel, aligned to a sorted LocationIndex.
struct PanelSlice {
    LocationIndex index;
    TradeMatrix X;
    Matrix partial;
    std::optional<std::string> group;
};

/// Build a square slice from long-format rows. All rows must share the same
/// group value; every ordered (origin, destination) pair must appear exactly
/// once, including the diagonal.
inline PanelSlice parse_long_format(const std::vector<LongRecord>& rows) {
    if (rows.empty()) throw NonSquare("empty record set");
    std::set<std::string> labels;
    for (const auto& r : rows) {
        if (r.origin.empty() || r.destination.empty()) throw MissingValue("empty location id");
        if (!std::isfinite(r.flow) || !std::isfinite(r.partial))
            throw MissingValue("non-finite flow or partial for (" + r.origin + ", " +
                               r.destination + ")");
        labels.insert(r.origin);
        labels.insert(r.destination);
    }

    PanelSlice slice;
    slice.group = rows.front().group;
    slice.index = LocationIndex(std::vector<std::string>(labels.begin(), labels.end()));
    const std::size_t n = slice.index.size();
    if (rows.size() != n * n)
        throw NonSquare("expected " + std::to_string(n * n) + " records for " + std::to_string(n) +
                        " locations, got " + std::to_string(rows.size()));

    slice.X.X = Matrix(n, n);
    slice.partial = Matrix(n, n);
    Matrix seen(n, n);
    for (const auto& r : rows) {
        const auto i = slice.index.find(r.origin);
        const auto j = slice.index.find(r.destination);
        if (seen(i, j) != 0.0)
            throw NonSquare("duplicate pair (" + r.origin + ", " + r.destination + ")");
        seen(i, j) = 1.0;
        if (r.flow < 0.0)
            throw ValidationError("negative flow for (" + r.origin + ", " + r.destination + ")");
        slice.X.X(i, j) = r.flow;
        slice.partial(i, j) = r.partial;
    }
    return slice;
}

/// B_ij = exp(partial_ij); partials are log-form effects, so B encodes
/// tau_hat^(-theta) without needing theta.
inline ShockMatrix shock_from_partial(const Matrix& partial) {
    ShockMatrix B;
    B.B = Matrix(partial.rows(), partial.cols());
    for (std::size_t i = 0; i < partial.rows(); ++i)
        for (std::size_t j = 0; j < partial.cols(); ++j) {
            const double b = std::exp(partial(i, j));
            if (!std::isfinite(b) || b <= 0.0)
                throw Overflow("exp(partial) not finite at (" + std::to_string(i) + ", " +
                               std::to_string(j) + ")");
            B.B(i, j) = b;
        }
    return B;
}

struct GroupError {
    std::string group;
    std::string message;
};

/// Split rows by group value and parse each group independently. Slices are
/// ordered by group value; location sets may differ across slices. A group
/// that fails to parse is recorded in `failures` without aborting the others.
inline std::vector<PanelSlice> split_groups(const std::vector<LongRecord>& rows,
                                            std::vector<GroupError>& failures) {
    bool any_group = false, any_nogroup = false;
    for (const auto& r : rows) (r.group ? any_group : any_nogroup) = true;
    if (any_group && any_nogroup)
        throw ValidationError("group value present on some rows but missing on others");

    std::map<std::string, std::vector<LongRecord>> by_group;
    if (any_group) {
        for (const auto& r : rows) by_group[*r.group].push_back(r);
    } else {
        by_group[""] = rows;
    }
    std::vector<PanelSlice> slices;
    slices.reserve(by_group.size());
    for (auto& [key, group_rows] : by_group) {
        try {
            slices.push_back(parse_long_format(group_rows));
        } catch (const ValidationError& e) {
            failures.push_back({key, e.what()});
        }
    }
    return slices;
}

/// Strict variant: any failing group throws NonSquare.
inline std::vector<PanelSlice> split_groups(const std::vector<LongRecord>& rows) {
    std::vector<GroupError> failures;
    auto slices = split_groups(rows, failures);
    if (!failures.empty())
        throw NonSquare("group '" + failures.front().group + "': " + failures.front().message);
    return slices;
}

// ---------------------------------------------------------------------------
// CSV input

/// Column-name configuration for the long-format input file.
struct CsvColumns {
    std::string origin = "exp_id";
    std::string destination = "imp_id";
    std::string flow = "flow";
    std::string partial = "partial";
    std::optional<std::string> group;  ///< set to enable group splitting
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

/// Read long-format records from a CSV stream with a header row.
inline std::vector<LongRecord> read_long_csv(std::istream& in, const CsvColumns& cols) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty input");
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
        return -1;
    };
    const auto c_o = col(cols.origin), c_d = col(cols.destination);
    const auto c_f = col(cols.flow), c_p = col(cols.partial);
    if (c_o < 0) throw IoError("missing column: " + cols.origin);
    if (c_d < 0) throw IoError("missing column: " + cols.destination);
    if (c_f < 0) throw IoError("missing column: " + cols.flow);
    if (c_p < 0) throw IoError("missing column: " + cols.partial);
    std::ptrdiff_t c_g = -1;
    if (cols.group) {
        c_g = col(*cols.group);
        if (c_g < 0) throw IoError("missing column: " + *cols.group);
    }

    std::vector<LongRecord> rows;
    std::size_t lineno = 1;
    auto parse_num = [&](const std::string& s) {
        if (s.empty()) throw MissingValue("missing numeric value at line " + std::to_string(lineno));
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw MissingValue("bad numeric value '" + s + "' at line " + std::to_string(lineno));
        }
        if (pos != s.size())
            throw MissingValue("bad numeric value '" + s + "' at line " + std::to_string(lineno));
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IoError("line " + std::to_string(lineno) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        LongRecord r;
        r.origin = fields[c_o];
        r.destination = fields[c_d];
        r.flow = parse_num(fields[c_f]);
        r.partial = parse_num(fields[c_p]);
        if (c_g >= 0) r.group = fields[c_g];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<LongRecord> read_long_csv_file(const std::string& path, const CsvColumns& cols) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return read_long_csv(in, cols);
}

/// Read a location,value shifter file; locations absent from the index
/// default to 1. Unknown locations are an error.
inline Vec read_shifter_csv_file(const std::string& path, const LocationIndex& index) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Vec out(index.size(), 1.0);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 'location,value'");
        if (first) {
            first = false;
            // optional header row
            try {
                std::stod(fields[1]);
            } catch (const std::exception&) {
                continue;
            }
        }
        const auto i = index.find(fields[0]);
        if (i < 0) throw ValidationError(path + ": unknown location '" + fields[0] + "'");
        try {
            out[i] = std::stod(fields[1]);
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad value '" + fields[1] + "'");
        }
        if (!(out[i] > 0.0) || !std::isfinite(out[i]))
            throw ValidationError(path + ": shifter for '" + fields[0] + "' must be > 0");
    }
    return out;
}

}  // namespace ugrav

#endif  // UGRAV_INGEST_HPP
