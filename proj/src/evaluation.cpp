#include "cortexc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cortexc/json_io.hpp"

namespace cortexc {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

double development_time(const PipelineRun& run) {
    if (!run.finished()) {
        fail("unfinished-run", "run \"" + run.run_id + "\" is not finished");
    }
    int64_t elapsed = *run.finished_at_ms - run.started_at_ms;
    if (elapsed < 0) {
        fail("invariant-violation", "finished_at_ms precedes started_at_ms");
    }
    return static_cast<double>(elapsed) / 60000.0;
}

std::optional<double> accuracy(const PipelineRun& run) {
    int64_t total = 0;
    int64_t passed = 0;
    for (const auto& report : run.reports) {
        for (const auto& result : report.results) {
            ++total;
            if (result.passed) ++passed;
        }
    }
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(passed) / static_cast<double>(total);
}

double regularized_cross_entropy(const LossInput& input) {
    const auto& probs = input.probs;
    const auto& labels = input.labels;
    if (probs.size() != labels.size() || probs.empty()) {
        fail("invariant-violation", "probs and labels must be non-empty and the same N");
    }
    if (input.lambda < 0 || input.theta_sq_norm < 0) {
        fail("invariant-violation", "lambda and theta_sq_norm must be non-negative");
    }
    const std::size_t n = probs.size();
    const std::size_t m = probs[0].size();

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (probs[i].size() != m || labels[i].size() != m || m == 0) {
            fail("invariant-violation", "row " + std::to_string(i) + " has inconsistent width");
        }
        double row_sum = 0.0;
        int ones = 0;
        for (std::size_t j = 0; j < m; ++j) {
            double p = probs[i][j];
            if (!(p > 0.0) || p > 1.0) {
                fail("invariant-violation",
                     "prob[" + std::to_string(i) + "][" + std::to_string(j) + "] not in (0,1]");
            }
            row_sum += p;
            int y = labels[i][j];
            if (y != 0 && y != 1) {
                fail("invariant-violation", "labels must be 0/1");
            }
            ones += y;
            if (y == 1) {
                sum += std::log(p);
            }
        }
        if (std::fabs(row_sum - 1.0) > 1e-9) {
            fail("invariant-violation",
                 "prob row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
        }
        if (ones != 1) {
            fail("invariant-violation",
                 "label row " + std::to_string(i) + " is not one-hot");
        }
    }
    return -sum / static_cast<double>(n) + input.lambda * input.theta_sq_norm;
}

std::map<std::pair<std::string, std::string>, double> ingest_survey(
    const std::vector<SurveyRecord>& rows) {
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& row : rows) {
        if (row.score < 1 || row.score > 5) {
            fail("out-of-range-score", "respondent \"" + row.respondent_id + "\" scored " +
                                           std::to_string(row.score) + " (must be 1..5)");
        }
        if (row.criterion != "readability" && row.criterion != "usability" &&
            row.criterion != "satisfaction") {
            fail("invalid-criterion", "unknown criterion \"" + row.criterion + "\"");
        }
        auto& slot = acc[{row.task_name, row.criterion}];
        slot.first += row.score;
        slot.second += 1;
    }
    std::map<std::pair<std::string, std::string>, double> means;
    for (const auto& [key, slot] : acc) {
        means[key] = slot.first / slot.second;
    }
    return means;
}

std::vector<SurveyRecord> load_survey_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) {
        fail("parse-error", "survey file \"" + path + "\" is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "respondent_id,task_name,criterion,score") {
        fail("parse-error", "survey file \"" + path +
                                "\" must start with header "
                                "respondent_id,task_name,criterion,score");
    }
    std::vector<SurveyRecord> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (fields.size() < 3) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) break;
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        fields.push_back(line.substr(pos));
        if (fields.size() != 4) {
            fail("parse-error", "survey row \"" + line + "\" does not have 4 fields");
        }
        SurveyRecord r;
        r.respondent_id = fields[0];
        r.task_name = fields[1];
        r.criterion = fields[2];
        try {
            r.score = std::stoi(fields[3]);
        } catch (const std::exception&) {
            fail("parse-error", "survey row \"" + line + "\" has a non-numeric score");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

BenchRow bench_row_from_run(const std::string& task_name, const PipelineRun& run) {
    BenchRow row;
    row.task_name = task_name;
    row.pipeline = run.spec.mode;
    row.dev_time_min = development_time(run);
    row.accuracy_pct = accuracy(run);
    row.run_id = run.run_id;
    return row;
}

namespace {

std::vector<BenchRow> sorted_rows(std::vector<BenchRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.task_name != b.task_name) return a.task_name < b.task_name;
        return static_cast<int>(a.pipeline) < static_cast<int>(b.pipeline);
    });
    return rows;
}

} // namespace

std::string bench_report(const std::vector<BenchRow>& input_rows,
                         const std::optional<SurveyMeans>& survey) {
    if (input_rows.empty()) {
        fail("empty-report", "no bench rows to report");
    }
    auto rows = sorted_rows(input_rows);
    std::string out;
    out += "Task | Pipeline | DevTime(min) | Accuracy(%)\n";
    out += "-----|----------|--------------|------------\n";
    for (const auto& r : rows) {
        out += r.task_name;
        out += " | ";
        out += to_string(r.pipeline);
        out += " | ";
        out += fixed(r.dev_time_min, 2);
        out += " | ";
        out += r.accuracy_pct ? fixed(*r.accuracy_pct, 1) : std::string("n/a");
        out += "\n";
    }
    if (survey) {
        out += "\nSurvey means (scale 1-5):\n";
        out += "Task | Criterion | Mean\n";
        for (const auto& [key, mean] : *survey) {
            out += key.first + " | " + key.second + " | " + fixed(mean, 2) + "\n";
        }
    }
    return out;
}

nlohmann::json bench_report_json(const std::vector<BenchRow>& input_rows,
                                 const std::optional<SurveyMeans>& survey) {
    auto rows = sorted_rows(input_rows);
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j = {{"task_name", r.task_name},
                            {"pipeline", to_string(r.pipeline)},
                            {"dev_time_min", r.dev_time_min},
                            {"run_id", r.run_id}};
        if (r.accuracy_pct) {
            j["accuracy_pct"] = *r.accuracy_pct;
        } else {
            j["accuracy_pct"] = nullptr;
        }
        jrows.push_back(std::move(j));
    }
    nlohmann::json out = {{"rows", jrows}};
    if (survey) {
        nlohmann::json means = nlohmann::json::array();
        for (const auto& [key, mean] : *survey) {
            means.push_back({{"task_name", key.first},
                             {"criterion", key.second},
                             {"mean", mean}});
        }
        out["survey_means"] = means;
    }
    return out;
}

} // namespace cortexc
