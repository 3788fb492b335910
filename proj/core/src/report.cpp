#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "pam/bench.hpp"

namespace pam::bench {

namespace detail {

// Shortest round-trip decimal form; locale-free and reproducible.
std::string format_number(double v) {
    std::array<char, 40> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace detail

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace

void emit_report(const std::vector<TrialRecord>& records, const ExperimentConfig& config,
                 const std::string& path) {
    std::string csv = "experiment,axis,trial,seed,metric,value,wall_ms\n";
    for (const auto& r : records) {
        csv += r.experiment;
        csv += ',';
        csv += r.axis;
        csv += ',';
        csv += std::to_string(r.trial);
        csv += ',';
        csv += std::to_string(r.seed);
        csv += ',';
        csv += r.metric;
        csv += ',';
        csv += detail::format_number(r.value);
        csv += ',';
        csv += detail::format_number(r.wall_ms);
        csv += '\n';
    }

    // One summary row per (axis, metric) in first-appearance order. The trial
    // column reads "summary", the seed column carries the aggregate count and
    // wall_ms the population standard deviation of value.
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : records) {
        const auto key = std::make_pair(r.axis, r.metric);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            keys.push_back(key);
        }
    }
    for (const auto& [axis, metric] : keys) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : records) {
            if (r.axis == axis && r.metric == metric) {
                sum += r.value;
                ++n;
            }
        }
        const double mean = sum / n;
        double var = 0.0;
        for (const auto& r : records) {
            if (r.axis == axis && r.metric == metric) {
                var += (r.value - mean) * (r.value - mean);
            }
        }
        var /= n;
        csv += to_string(config.experiment);
        csv += ',';
        csv += axis;
        csv += ",summary,";
        csv += std::to_string(n);
        csv += ',';
        csv += metric;
        csv += ',';
        csv += detail::format_number(mean);
        csv += ',';
        csv += detail::format_number(std::sqrt(var));
        csv += '\n';
    }

    write_file(path, csv);
    write_file(manifest_path(path), manifest_text(config));
}

} // namespace pam::bench
