#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cortexc/types.hpp"

namespace cortexc {

// Monotonic elapsed run time in minutes. Throws Error("unfinished-run").
double development_time(const PipelineRun& run);

// 100 * passed checks / applicable checks across all reports; nullopt when
// the run has no applicable check results at all.
std::optional<double> accuracy(const PipelineRun& run);

// L = -(1/N) * sum_i sum_j y_ij * log p_ij + lambda * ||theta||^2.
// Validates the LossInput invariants (rows sum to 1 within 1e-9, labels
// one-hot, probs in (0,1]); throws Error("invariant-violation").
double regularized_cross_entropy(const LossInput& input);

struct SurveyRecord {
    std::string respondent_id;
    std::string task_name;
    std::string criterion; // readability | usability | satisfaction
    int score = 0;         // 1..5
};

// Mean score per (task_name, criterion). Throws Error("out-of-range-score")
// or Error("invalid-criterion").
std::map<std::pair<std::string, std::string>, double> ingest_survey(
    const std::vector<SurveyRecord>& rows);

// CSV with header respondent_id,task_name,criterion,score.
std::vector<SurveyRecord> load_survey_csv(const std::string& path);

struct BenchRow {
    std::string task_name;
    PipelineMode pipeline = PipelineMode::modular;
    double dev_time_min = 0.0;
    std::optional<double> accuracy_pct;
    std::string run_id;
};

BenchRow bench_row_from_run(const std::string& task_name, const PipelineRun& run);

using SurveyMeans = std::map<std::pair<std::string, std::string>, double>;

// Plain-text table (Task | Pipeline | DevTime(min) | Accuracy(%)), one row
// per (task, pipeline) sorted by task then pipeline, with an optional survey
// means section. Throws Error("empty-report") on no rows.
std::string bench_report(const std::vector<BenchRow>& rows,
                         const std::optional<SurveyMeans>& survey = std::nullopt);

// Same data as a JSON document.
nlohmann::json bench_report_json(const std::vector<BenchRow>& rows,
                                 const std::optional<SurveyMeans>& survey = std::nullopt);

} // namespace cortexc
