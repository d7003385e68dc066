#pragma once

#include "relrep/stat_kernel.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace relrep::io {

/// One parsed CSV record with its 1-based physical line number.
struct CsvLine {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// RFC 4180-style reader: comma separated, optional double quotes, "" escapes.
/// Blank lines are skipped.
std::vector<CsvLine> read_csv(std::istream& in);

std::string csv_escape(std::string_view field);

/// Column lookup by exact header name.
class CsvHeader {
public:
    explicit CsvHeader(const CsvLine& header);

    bool has(std::string_view name) const;
    /// Throws SchemaError naming the column when absent.
    std::size_t require(std::string_view name) const;
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
};

/// One original/replication pair as given in the input table.
struct StudyRecord {
    std::string study_id;
    double t_orig = 0.0;
    int n_orig = 0;
    double t_repl = 0.0;
    int n_repl = 0;
    TestKind test_type = TestKind::single;
    bool dropout = false;
    bool sign_flipped = false;
    std::size_t line = 0;
};

/// Reads `Study,to,no,tr,nr,testType[,dropout]`. With `sign_align`, rows with a
/// negative original statistic have both statistics negated.
/// Throws SchemaError (missing column, unknown test type) or RowError (bad number, n < 2).
std::vector<StudyRecord> ingest_csv(std::istream& in, bool sign_align = true);
std::vector<StudyRecord> ingest_csv_file(const std::filesystem::path& path, bool sign_align = true);

/// One study of a multi-replication set: `Study,t,n,testType[,role]`,
/// role in {original, replication} (default replication).
struct PoolRecord {
    std::string study_id;
    double t = 0.0;
    int n = 0;
    TestKind test_type = TestKind::single;
    bool original = false;
    std::size_t line = 0;
};

/// Returns the records with the original (at most one) moved to the front. With
/// `sign_align`, a negative original statistic flips the sign of every study.
std::vector<PoolRecord> ingest_pool_csv(std::istream& in, bool sign_align = true);

double parse_cell_real(const CsvLine& row, std::size_t column, std::string_view name);
int parse_cell_int(const CsvLine& row, std::size_t column, std::string_view name);
bool parse_cell_bool(const CsvLine& row, std::size_t column, std::string_view name);

} // namespace relrep::io
