#ifndef REVMINE_REPORTS_HPP
#define REVMINE_REPORTS_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/experiments.hpp"

namespace revmine {

enum class ReportFormat { csv, markdown, json };

/// Accepts csv, markdown, md, json; throws ConfigError otherwise.
ReportFormat parse_report_format(std::string_view name);
std::string to_string(ReportFormat format);

/// Result tables: one row per category plus an Average row, metric columns in
/// the fixed order exact_token, partial_token, exact_type, partial_type, each
/// as (p, r, f1).
///   markdown  percentages with one decimal, Average row bold, one section
///             per result
///   csv       raw fractions (4 decimals); leading category column, then the
///             12 metrics, then procedure and size columns so several results
///             can share one file
///   json      versioned schema, raw doubles, full provenance and per-fold
///             totals
void write_report(const std::vector<ExperimentResult>& results, ReportFormat format,
                  std::ostream& out);
void emit_report(const std::vector<ExperimentResult>& results, ReportFormat format,
                 const std::string& path);

/// Tidy min/avg/max series of the aggregate F1 across results that share a
/// procedure: columns procedure, match, unit, min_f1, avg_f1, max_f1.
void write_series_csv(const std::vector<ExperimentResult>& results, std::ostream& out);
void emit_series_csv(const std::vector<ExperimentResult>& results, const std::string& path);

/// Tidy sweep series: columns cutoff, match, unit, min_f1, avg_f1, max_f1.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Corpus statistics table: columns category, reviews, sentences,
/// feature_tokens, feature_types, single_word, multi_word, type_token_ratio,
/// features_per_review; one row per category (when per_category) plus Total.
void write_stats(const CorpusStats& stats, bool per_category, ReportFormat format,
                 std::ostream& out);

}  // namespace revmine

#endif  // REVMINE_REPORTS_HPP
