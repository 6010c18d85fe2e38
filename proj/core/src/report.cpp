#include <wleng/harness.hpp>

#include <wleng/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace wleng {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

const AlgorithmSummary& ComparisonReport::at(Algorithm a) const {
    for (const auto& s : algorithms) {
        if (s.algorithm == a) return s;
    }
    throw ValidationError("report has no entry for " + std::string(to_string(a)));
}

ComparisonReport summarize(const std::vector<IterationResult>& raw) {
    if (raw.empty()) throw ValidationError("cannot summarise an empty result set");

    std::vector<Algorithm> order;
    std::map<Algorithm, std::vector<std::size_t>> counts;
    std::map<std::size_t, std::size_t> best_by_iteration;
    for (const auto& r : raw) {
        if (!counts.contains(r.algorithm)) order.push_back(r.algorithm);
        counts[r.algorithm].push_back(r.placed_count);
        auto [it, inserted] = best_by_iteration.emplace(r.iteration, r.placed_count);
        if (!inserted) it->second = std::max(it->second, r.placed_count);
    }

    ComparisonReport report;
    report.iterations = best_by_iteration.size();
    for (Algorithm a : order) {
        const auto& c = counts[a];
        AlgorithmSummary s;
        s.algorithm = a;
        double sum = 0.0;
        for (std::size_t v : c) sum += static_cast<double>(v);
        s.mean = sum / static_cast<double>(c.size());
        s.min = *std::min_element(c.begin(), c.end());
        s.max = *std::max_element(c.begin(), c.end());
        report.algorithms.push_back(s);
    }
    for (const auto& r : raw) {
        if (r.placed_count == best_by_iteration[r.iteration]) {
            for (auto& s : report.algorithms) {
                if (s.algorithm == r.algorithm) ++s.wins;
            }
        }
    }
    std::optional<double> random_mean;
    for (const auto& s : report.algorithms) {
        if (s.algorithm == Algorithm::Random) random_mean = s.mean;
    }
    for (auto& s : report.algorithms) {
        s.win_rate = static_cast<double>(s.wins) / static_cast<double>(report.iterations);
        if (s.algorithm == Algorithm::Random && random_mean && *random_mean > 0) {
            s.normalized_mean = 1.0;
        } else if (random_mean && *random_mean > 0) {
            s.normalized_mean = s.mean / *random_mean;
        }
    }
    return report;
}

std::string results_csv(const std::vector<IterationResult>& raw) {
    std::string out = "algorithm,iteration,placed_count,stop_reason\n";
    for (const auto& r : raw) {
        out += std::string(to_string(r.algorithm)) + "," + std::to_string(r.iteration) + "," +
               std::to_string(r.placed_count) + "," + std::string(to_string(r.stop_reason)) + "\n";
    }
    return out;
}

std::vector<IterationResult> parse_results_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "algorithm,iteration,placed_count,stop_reason") {
        throw ValidationError("results csv: unexpected header");
    }
    std::vector<IterationResult> raw;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        const std::string where = "results csv line " + std::to_string(line_no);
        if (cols.size() != 4) throw ValidationError(where + ": expected 4 columns");
        IterationResult r;
        auto a = parse_algorithm(cols[0]);
        auto s = parse_stop_reason(cols[3]);
        if (!a) throw ValidationError(where + ": unknown algorithm '" + cols[0] + "'");
        if (!s) throw ValidationError(where + ": unknown stop reason '" + cols[3] + "'");
        try {
            r.iteration = std::stoull(cols[1]);
            r.placed_count = std::stoull(cols[2]);
        } catch (const std::exception&) {
            throw ValidationError(where + ": non-numeric count");
        }
        r.algorithm = *a;
        r.stop_reason = *s;
        raw.push_back(r);
    }
    return raw;
}

std::string summary_json(const ComparisonReport& report) {
    nlohmann::ordered_json doc;
    doc["iterations"] = report.iterations;
    doc["win_rule"] = "an algorithm wins an iteration when it places the most workloads; ties credit every tied "
                      "algorithm";
    doc["normalization"] = "mean placed_count divided by the Random mean";
    doc["algorithms"] = nlohmann::ordered_json::array();
    for (const auto& s : report.algorithms) {
        nlohmann::ordered_json j;
        j["algorithm"] = std::string(to_string(s.algorithm));
        j["mean"] = s.mean;
        j["min"] = s.min;
        j["max"] = s.max;
        if (s.normalized_mean) {
            j["normalized_mean"] = *s.normalized_mean;
        } else {
            j["normalized_mean"] = nullptr;
        }
        j["win_rate"] = s.win_rate;
        j["wins"] = s.wins;
        doc["algorithms"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::string plot_csv(const std::vector<IterationResult>& raw) {
    const ComparisonReport report = summarize(raw);
    std::optional<double> random_mean;
    for (const auto& s : report.algorithms) {
        if (s.algorithm == Algorithm::Random && s.mean > 0) random_mean = s.mean;
    }
    std::string out = "algorithm,iteration,placed_count,normalized_to_random_mean\n";
    for (const auto& r : raw) {
        out += std::string(to_string(r.algorithm)) + "," + std::to_string(r.iteration) + "," +
               std::to_string(r.placed_count) + ",";
        if (random_mean) out += format_double(static_cast<double>(r.placed_count) / *random_mean);
        out += "\n";
    }
    return out;
}

ReportFiles emit_report(const std::vector<IterationResult>& raw) {
    ReportFiles files;
    files.report = summarize(raw);
    files.summary = summary_json(files.report);
    files.plot = plot_csv(raw);
    return files;
}

std::string reward_log_csv(const std::vector<RewardWindow>& log) {
    std::string out = "window_index,total_reward,placements_failed\n";
    for (const auto& w : log) {
        out += std::to_string(w.index) + "," + format_double(w.total_reward) + "," +
               std::to_string(w.placements_failed) + "\n";
    }
    return out;
}

} // namespace wleng
