#include "relrep/io/csv.hpp"

#include "relrep/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>

namespace relrep::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool blank(const CsvLine& row) {
    return std::all_of(row.fields.begin(), row.fields.end(),
                       [](const std::string& f) { return trim(f).empty(); });
}

const std::string& cell(const CsvLine& row, std::size_t column, std::string_view name) {
    if (column >= row.fields.size()) {
        throw RowError(row.line, "missing value for column " + std::string(name));
    }
    return row.fields[column];
}

} // namespace

std::vector<CsvLine> read_csv(std::istream& in) {
    std::vector<CsvLine> rows;
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    CsvLine current;
    std::string field;
    std::size_t line = 1;
    current.line = line;
    bool in_quotes = false;
    bool any = false;

    auto end_record = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        if (!blank(current)) rows.push_back(std::move(current));
        current = CsvLine{};
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            any = true;
            break;
        case ',':
            current.fields.push_back(std::move(field));
            field.clear();
            any = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            ++line;
            current.line = line;
            break;
        default:
            field.push_back(c);
            any = true;
        }
    }
    if (in_quotes) throw RowError(current.line, "unterminated quoted field");
    if (any || !field.empty()) end_record();
    return rows;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

CsvHeader::CsvHeader(const CsvLine& header) {
    names_.reserve(header.fields.size());
    for (const std::string& f : header.fields) names_.emplace_back(trim(f));
}

bool CsvHeader::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t CsvHeader::require(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw SchemaError("missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

double parse_cell_real(const CsvLine& row, std::size_t column, std::string_view name) {
    std::string_view text = trim(cell(row, column, name));
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw RowError(row.line, "column " + std::string(name) + ": '" + std::string(text)
                                     + "' is not a number");
    }
    return value;
}

int parse_cell_int(const CsvLine& row, std::size_t column, std::string_view name) {
    const std::string_view text = trim(cell(row, column, name));
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw RowError(row.line, "column " + std::string(name) + ": '" + std::string(text)
                                     + "' is not an integer");
    }
    return value;
}

bool parse_cell_bool(const CsvLine& row, std::size_t column, std::string_view name) {
    const std::string_view text = trim(cell(row, column, name));
    if (text.empty() || text == "false" || text == "FALSE" || text == "0") return false;
    if (text == "true" || text == "TRUE" || text == "1") return true;
    throw RowError(row.line, "column " + std::string(name) + ": '" + std::string(text)
                                 + "' is not a boolean");
}

std::vector<StudyRecord> ingest_csv(std::istream& in, bool sign_align) {
    const std::vector<CsvLine> rows = read_csv(in);
    if (rows.empty()) throw SchemaError("missing header row");

    const CsvHeader header(rows.front());
    const std::size_t c_study = header.require("Study");
    const std::size_t c_to = header.require("to");
    const std::size_t c_no = header.require("no");
    const std::size_t c_tr = header.require("tr");
    const std::size_t c_nr = header.require("nr");
    const std::size_t c_type = header.require("testType");
    const bool has_dropout = header.has("dropout");
    const std::size_t c_dropout = has_dropout ? header.require("dropout") : 0;

    std::vector<StudyRecord> out;
    out.reserve(rows.size() - 1);
    for (auto it = std::next(rows.begin()); it != rows.end(); ++it) {
        const CsvLine& row = *it;
        StudyRecord rec;
        rec.line = row.line;
        rec.study_id = std::string(trim(cell(row, c_study, "Study")));
        rec.t_orig = parse_cell_real(row, c_to, "to");
        rec.n_orig = parse_cell_int(row, c_no, "no");
        rec.t_repl = parse_cell_real(row, c_tr, "tr");
        rec.n_repl = parse_cell_int(row, c_nr, "nr");
        const std::string_view type = trim(cell(row, c_type, "testType"));
        try {
            rec.test_type = parse_test_kind(type);
        } catch (const UsageError&) {
            throw SchemaError("line " + std::to_string(row.line) + ": unknown testType '"
                              + std::string(type) + "' (expected single or paired)");
        }
        if (has_dropout && c_dropout < row.fields.size()) {
            rec.dropout = parse_cell_bool(row, c_dropout, "dropout");
        }
        if (rec.n_orig < 2 || rec.n_repl < 2) {
            throw RowError(row.line, "sample sizes must be at least 2");
        }
        if (sign_align && rec.t_orig < 0.0) {
            rec.t_orig = -rec.t_orig;
            rec.t_repl = -rec.t_repl;
            rec.sign_flipped = true;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<StudyRecord> ingest_csv_file(const std::filesystem::path& path, bool sign_align) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file " + path.string());
    return ingest_csv(in, sign_align);
}

std::vector<PoolRecord> ingest_pool_csv(std::istream& in, bool sign_align) {
    const std::vector<CsvLine> rows = read_csv(in);
    if (rows.empty()) throw SchemaError("missing header row");

    const CsvHeader header(rows.front());
    const std::size_t c_study = header.require("Study");
    const std::size_t c_t = header.require("t");
    const std::size_t c_n = header.require("n");
    const std::size_t c_type = header.require("testType");
    const bool has_role = header.has("role");
    const std::size_t c_role = has_role ? header.require("role") : 0;

    std::vector<PoolRecord> out;
    for (auto it = std::next(rows.begin()); it != rows.end(); ++it) {
        const CsvLine& row = *it;
        PoolRecord rec;
        rec.line = row.line;
        rec.study_id = std::string(trim(cell(row, c_study, "Study")));
        rec.t = parse_cell_real(row, c_t, "t");
        rec.n = parse_cell_int(row, c_n, "n");
        const std::string_view type = trim(cell(row, c_type, "testType"));
        try {
            rec.test_type = parse_test_kind(type);
        } catch (const UsageError&) {
            throw SchemaError("line " + std::to_string(row.line) + ": unknown testType '"
                              + std::string(type) + "'");
        }
        if (has_role && c_role < row.fields.size()) {
            const std::string_view role = trim(row.fields[c_role]);
            if (role == "original") {
                rec.original = true;
            } else if (!role.empty() && role != "replication") {
                throw SchemaError("line " + std::to_string(row.line) + ": unknown role '"
                                  + std::string(role) + "'");
            }
        }
        if (rec.n < 2) throw RowError(row.line, "sample size must be at least 2");
        out.push_back(std::move(rec));
    }

    const auto originals = std::count_if(out.begin(), out.end(),
                                         [](const PoolRecord& r) { return r.original; });
    if (originals > 1) throw SchemaError("at most one study may have role 'original'");
    std::stable_partition(out.begin(), out.end(), [](const PoolRecord& r) { return r.original; });
    if (sign_align && originals == 1 && out.front().t < 0.0) {
        for (PoolRecord& r : out) r.t = -r.t;
    }
    return out;
}

} // namespace relrep::io
