#include "revmine/reports.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kReportVersion = 1;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string percent(double value) { return fixed(100.0 * value, 1); }

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

const std::array<const char*, 3> kMetricSuffixes = {"p", "r", "f1"};

double metric(const EvalScores& scores, int which) {
  switch (which) {
    case 0: return scores.precision;
    case 1: return scores.recall;
    default: return scores.f1;
  }
}

void write_markdown(const std::vector<ExperimentResult>& results, std::ostream& out) {
  for (const ExperimentResult& result : results) {
    out << "## " << to_string(result.procedure) << " (size " << result.size_label
        << ", k_folds " << result.k_folds << ", seed " << result.seed << ")\n\n";
    out << "config " << result.config_hash << ", corpus " << result.corpus_fingerprint;
    for (const std::string& fp : result.external_fingerprints) out << ", external " << fp;
    out << "\n\n";

    out << "| category |";
    for (int m = 0; m < kNumEvalModes; ++m) {
      for (const char* suffix : kMetricSuffixes) {
        out << " " << eval_mode_name(m) << "_" << suffix << " |";
      }
    }
    out << "\n|---|";
    for (int i = 0; i < kNumEvalModes * 3; ++i) out << "---|";
    out << "\n";

    for (const CategoryResult& cr : result.per_category) {
      out << "| " << cr.category << " |";
      for (int m = 0; m < kNumEvalModes; ++m) {
        for (int w = 0; w < 3; ++w) {
          out << " " << percent(metric(cr.scores[static_cast<std::size_t>(m)], w)) << " |";
        }
      }
      out << "\n";
    }
    out << "| **Average** |";
    for (int m = 0; m < kNumEvalModes; ++m) {
      for (int w = 0; w < 3; ++w) {
        out << " **" << percent(metric(result.average[static_cast<std::size_t>(m)], w))
            << "** |";
      }
    }
    out << "\n\n";
  }
}

void write_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << "category";
  for (int m = 0; m < kNumEvalModes; ++m) {
    for (const char* suffix : kMetricSuffixes) out << "," << eval_mode_name(m) << "_" << suffix;
  }
  out << ",procedure,size\n";

  auto row = [&](const std::string& name, const std::array<EvalScores, kNumEvalModes>& scores,
                 const ExperimentResult& result) {
    out << csv_field(name);
    for (int m = 0; m < kNumEvalModes; ++m) {
      for (int w = 0; w < 3; ++w) {
        out << "," << fixed(metric(scores[static_cast<std::size_t>(m)], w), 4);
      }
    }
    out << "," << to_string(result.procedure) << "," << result.size_label << "\n";
  };
  for (const ExperimentResult& result : results) {
    for (const CategoryResult& cr : result.per_category) row(cr.category, cr.scores, result);
    row("Average", result.average, result);
  }
}

ordered_json scores_json(const EvalScores& scores) {
  ordered_json j;
  j["tp"] = scores.tp;
  j["fp"] = scores.fp;
  j["fn"] = scores.fn;
  j["precision"] = scores.precision;
  j["recall"] = scores.recall;
  j["f1"] = scores.f1;
  return j;
}

ordered_json mode_block(const std::array<EvalScores, kNumEvalModes>& scores) {
  ordered_json j;
  for (int m = 0; m < kNumEvalModes; ++m) {
    j[eval_mode_name(m)] = scores_json(scores[static_cast<std::size_t>(m)]);
  }
  return j;
}

void write_json(const std::vector<ExperimentResult>& results, std::ostream& out) {
  ordered_json doc;
  doc["format"] = "revmine-report";
  doc["version"] = kReportVersion;
  doc["results"] = ordered_json::array();
  for (const ExperimentResult& result : results) {
    ordered_json r;
    r["procedure"] = to_string(result.procedure);
    r["size"] = result.size_label;
    r["k_folds"] = result.k_folds;
    r["seed"] = result.seed;
    r["annotator"] = result.annotator;
    r["avg_train_feature_tokens"] = result.avg_train_feature_tokens;
    r["corpus_feature_tokens"] = result.corpus_feature_tokens;
    r["config_hash"] = result.config_hash;
    r["corpus_fingerprint"] = result.corpus_fingerprint;
    r["external_fingerprints"] = result.external_fingerprints;
    r["average"] = mode_block(result.average);
    r["per_category"] = ordered_json::array();
    for (const CategoryResult& cr : result.per_category) {
      ordered_json c;
      c["category"] = cr.category;
      c["folds_counted"] = cr.folds_counted;
      c["scores"] = mode_block(cr.scores);
      r["per_category"].push_back(std::move(c));
    }
    r["folds"] = ordered_json::array();
    for (const FoldResult& fr : result.folds) {
      ordered_json f;
      f["fold"] = fr.fold;
      f["held_out"] = fr.held_out;
      f["train_reviews"] = fr.train_reviews;
      f["test_reviews"] = fr.test_reviews;
      f["train_feature_tokens"] = fr.train_feature_tokens;
      ordered_json totals;
      for (int m = 0; m < kNumEvalModes; ++m) {
        totals[eval_mode_name(m)] = scores_json(fr.reports[static_cast<std::size_t>(m)].total);
      }
      f["totals"] = std::move(totals);
      r["folds"].push_back(std::move(f));
    }
    doc["results"].push_back(std::move(r));
  }
  out << doc.dump(2) << "\n";
}

template <typename WriteFn>
void emit_to(const std::string& path, WriteFn write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown report format '" + std::string(name) +
                    "' (expected csv, markdown, or json)");
}

std::string to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::markdown: return "markdown";
    case ReportFormat::json: return "json";
  }
  return "csv";
}

void write_report(const std::vector<ExperimentResult>& results, ReportFormat format,
                  std::ostream& out) {
  if (results.empty()) throw ConfigError("report needs at least one result");
  switch (format) {
    case ReportFormat::csv: write_csv(results, out); break;
    case ReportFormat::markdown: write_markdown(results, out); break;
    case ReportFormat::json: write_json(results, out); break;
  }
}

void emit_report(const std::vector<ExperimentResult>& results, ReportFormat format,
                 const std::string& path) {
  emit_to(path, [&](std::ostream& out) { write_report(results, format, out); });
}

void write_series_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  if (results.empty()) throw ConfigError("series needs at least one result");
  out << "procedure,match,unit,min_f1,avg_f1,max_f1\n";
  std::vector<Procedure> order;
  std::map<Procedure, std::vector<const ExperimentResult*>> grouped;
  for (const ExperimentResult& result : results) {
    if (!grouped.count(result.procedure)) order.push_back(result.procedure);
    grouped[result.procedure].push_back(&result);
  }
  for (Procedure procedure : order) {
    for (int m = 0; m < kNumEvalModes; ++m) {
      double lo = 1.0, hi = 0.0, sum = 0.0;
      const auto& group = grouped[procedure];
      for (const ExperimentResult* result : group) {
        const double f1 = result->average[static_cast<std::size_t>(m)].f1;
        lo = std::min(lo, f1);
        hi = std::max(hi, f1);
        sum += f1;
      }
      out << to_string(procedure) << "," << to_string(kEvalModes[static_cast<std::size_t>(m)].first)
          << "," << to_string(kEvalModes[static_cast<std::size_t>(m)].second) << ","
          << fixed(lo, 4) << "," << fixed(sum / static_cast<double>(group.size()), 4) << ","
          << fixed(hi, 4) << "\n";
    }
  }
}

void emit_series_csv(const std::vector<ExperimentResult>& results, const std::string& path) {
  emit_to(path, [&](std::ostream& out) { write_series_csv(results, out); });
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "cutoff,match,unit,min_f1,avg_f1,max_f1\n";
  for (const SweepRow& row : rows) {
    out << row.cutoff << "," << to_string(row.match) << "," << to_string(row.unit) << ","
        << fixed(row.min_f1, 4) << "," << fixed(row.avg_f1, 4) << "," << fixed(row.max_f1, 4)
        << "\n";
  }
}

void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  emit_to(path, [&](std::ostream& out) { write_sweep_csv(rows, out); });
}

void write_stats(const CorpusStats& stats, bool per_category, ReportFormat format,
                 std::ostream& out) {
  const char* header =
      "category,reviews,sentences,feature_tokens,feature_types,single_word,multi_word,"
      "type_token_ratio,features_per_review";
  auto print_csv = [&](const std::string& name, const DatasetStats& s) {
    out << csv_field(name) << "," << s.n_reviews << "," << s.n_sentences << ","
        << s.feature_tokens << "," << s.feature_types << "," << s.single_word << ","
        << s.multi_word << "," << fixed(s.type_token_ratio, 4) << ","
        << fixed(s.features_per_review, 4) << "\n";
  };
  auto print_md = [&](const std::string& name, const DatasetStats& s) {
    out << "| " << name << " | " << s.n_reviews << " | " << s.n_sentences << " | "
        << s.feature_tokens << " | " << s.feature_types << " | " << s.single_word << " | "
        << s.multi_word << " | " << fixed(s.type_token_ratio, 2) << " | "
        << fixed(s.features_per_review, 2) << " |\n";
  };

  switch (format) {
    case ReportFormat::csv:
      out << header << "\n";
      if (per_category) {
        for (const auto& [category, s] : stats.per_category) print_csv(category, s);
      }
      print_csv("Total", stats.total);
      break;
    case ReportFormat::markdown:
      out << "| category | reviews | sentences | feature_tokens | feature_types | "
             "single_word | multi_word | type_token_ratio | features_per_review |\n";
      out << "|---|---|---|---|---|---|---|---|---|\n";
      if (per_category) {
        for (const auto& [category, s] : stats.per_category) print_md(category, s);
      }
      print_md("Total", stats.total);
      break;
    case ReportFormat::json: {
      ordered_json doc;
      doc["format"] = "revmine-stats";
      doc["version"] = 1;
      auto block = [](const DatasetStats& s) {
        ordered_json j;
        j["reviews"] = s.n_reviews;
        j["sentences"] = s.n_sentences;
        j["feature_tokens"] = s.feature_tokens;
        j["feature_types"] = s.feature_types;
        j["single_word"] = s.single_word;
        j["multi_word"] = s.multi_word;
        j["type_token_ratio"] = s.type_token_ratio;
        j["features_per_review"] = s.features_per_review;
        return j;
      };
      if (per_category) {
        doc["per_category"] = ordered_json::object();
        for (const auto& [category, s] : stats.per_category) {
          doc["per_category"][category] = block(s);
        }
      }
      doc["total"] = block(stats.total);
      out << doc.dump(2) << "\n";
      break;
    }
  }
}

}  // namespace revmine
