#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pam/bench.hpp"
#include "pam/version.hpp"

namespace pam::bench {

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::Capacity: return "capacity";
    case Experiment::Correlation: return "correlation";
    case Experiment::Forgetting: return "forgetting";
    case Experiment::Possibilities: return "possibilities";
    case Experiment::Noise: return "noise";
    case Experiment::Efficiency: return "efficiency";
    case Experiment::ValidateIou: return "validate-iou";
    }
    return "?";
}

std::string to_string(ModelKind m) {
    return m == ModelKind::Pam ? "pam" : "ahn";
}

std::string to_string(GenMode m) {
    return m == GenMode::Offline ? "offline" : "online";
}

Experiment parse_experiment(const std::string& name) {
    for (Experiment e : {Experiment::Capacity, Experiment::Correlation, Experiment::Forgetting,
                         Experiment::Possibilities, Experiment::Noise, Experiment::Efficiency,
                         Experiment::ValidateIou}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw ConfigError("unknown experiment '" + name +
                      "' (expected capacity|correlation|forgetting|possibilities|noise|"
                      "efficiency|validate-iou)");
}

ModelKind parse_model(const std::string& name) {
    if (name == "pam") {
        return ModelKind::Pam;
    }
    if (name == "ahn") {
        return ModelKind::Ahn;
    }
    throw ConfigError("unknown model '" + name + "' (expected pam|ahn)");
}

GenMode parse_mode(const std::string& name) {
    if (name == "offline") {
        return GenMode::Offline;
    }
    if (name == "online") {
        return GenMode::Online;
    }
    throw ConfigError("unknown mode '" + name + "' (expected offline|online)");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : value) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) {
                parts.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        parts.push_back(cur);
    }
    return parts;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("expected integer for '" + key + "', got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("trailing");
        }
        return out;
    } catch (const std::exception&) {
        throw ConfigError("expected number for '" + key + "', got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on") {
        return true;
    }
    if (value == "0" || value == "false" || value == "off") {
        return false;
    }
    throw ConfigError("expected boolean for '" + key + "', got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& part : split_list(value)) {
        out.push_back(static_cast<int>(parse_int(key, part)));
    }
    if (out.empty()) {
        throw ConfigError("empty list for '" + key + "'");
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& part : split_list(value)) {
        out.push_back(parse_real(key, part));
    }
    if (out.empty()) {
        throw ConfigError("empty list for '" + key + "'");
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            os << ",";
        }
        os << values[i];
    }
    return os.str();
}

} // namespace

void apply_key_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "experiment") {
        config.experiment = parse_experiment(value);
    } else if (key == "model") {
        config.model = parse_model(value);
    } else if (key == "mode") {
        config.mode = parse_mode(value);
    } else if (key == "nc") {
        config.nc_sweep = parse_int_list(key, value);
        config.n_c = config.nc_sweep.front();
    } else if (key == "nk") {
        config.n_k = static_cast<int>(parse_int(key, value));
    } else if (key == "w") {
        config.w = static_cast<int>(parse_int(key, value));
    } else if (key == "d") {
        config.degree = static_cast<int>(parse_int(key, value));
    } else if (key == "beta") {
        config.beta = parse_real(key, value);
    } else if (key == "sample_width") {
        config.sample_width = static_cast<int>(parse_int(key, value));
    } else if (key == "trials") {
        config.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "jobs") {
        config.jobs = static_cast<int>(parse_int(key, value));
    } else if (key == "emit_times") {
        config.emit_times = parse_bool(key, value);
    } else if (key == "corr") {
        config.corr_sweep = parse_real_list(key, value);
    } else if (key == "noise") {
        config.noise_sweep = parse_real_list(key, value);
    } else if (key == "len") {
        config.len_sweep = parse_int_list(key, value);
    } else if (key == "seqs") {
        config.sequences = static_cast<int>(parse_int(key, value));
    } else if (key == "gens") {
        config.generations = static_cast<int>(parse_int(key, value));
    } else if (key == "max_t") {
        config.max_t = static_cast<int>(parse_int(key, value));
    } else if (key == "threshold") {
        config.threshold = parse_real(key, value);
    } else if (key == "out") {
        config.out = value;
    } else if (key == "artifact_version") {
        // informational; accepted so manifests can be re-run as configs
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        apply_key_value(config, key, value);
    }
    return config;
}

std::string manifest_text(const ExperimentConfig& config) {
    std::ostringstream os;
    os << "artifact_version = " << kVersion << "\n";
    os << "experiment = " << to_string(config.experiment) << "\n";
    os << "model = " << to_string(config.model) << "\n";
    os << "mode = " << to_string(config.mode) << "\n";
    os << "nc = " << join(config.nc_sweep) << "\n";
    os << "nk = " << config.n_k << "\n";
    os << "w = " << config.w << "\n";
    os << "d = " << config.degree << "\n";
    os << "beta = " << config.beta << "\n";
    os << "sample_width = " << config.sample_width << "\n";
    os << "trials = " << config.trials << "\n";
    os << "seed = " << config.seed << "\n";
    os << "jobs = " << config.jobs << "\n";
    os << "emit_times = " << (config.emit_times ? "true" : "false") << "\n";
    if (!config.corr_sweep.empty()) {
        os << "corr = " << join(config.corr_sweep) << "\n";
    }
    if (!config.noise_sweep.empty()) {
        os << "noise = " << join(config.noise_sweep) << "\n";
    }
    if (!config.len_sweep.empty()) {
        os << "len = " << join(config.len_sweep) << "\n";
    }
    os << "seqs = " << config.sequences << "\n";
    os << "gens = " << config.generations << "\n";
    os << "max_t = " << config.max_t << "\n";
    os << "threshold = " << config.threshold << "\n";
    os << "out = " << config.out << "\n";
    return os.str();
}

std::string manifest_path(const std::string& csv_path) {
    return csv_path + ".manifest";
}

void ExperimentConfig::validate() const {
    if (trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (jobs < 1) {
        throw ConfigError("jobs must be >= 1");
    }
    if (nc_sweep.empty()) {
        throw ConfigError("nc must have at least one value");
    }
    for (int nc : nc_sweep) {
        if (nc < 2) {
            throw ConfigError("nc values must be >= 2");
        }
        if (model == ModelKind::Pam && w > nc) {
            throw ConfigError("w = " + std::to_string(w) + " exceeds nc = " + std::to_string(nc));
        }
    }
    if (model == ModelKind::Pam) {
        if (n_k < 1) {
            throw ConfigError("nk must be >= 1 for the pam model");
        }
        if (w < 1) {
            throw ConfigError("w must be >= 1");
        }
        if (sample_width < 1) {
            throw ConfigError("sample_width must be >= 1");
        }
    } else {
        if (degree < 1 && beta <= 0.0) {
            throw ConfigError("ahn needs d >= 1 or beta > 0");
        }
        if (beta < 0.0) {
            throw ConfigError("beta must be positive when given");
        }
    }
    for (double c : corr_sweep) {
        if (c < 0.0 || c >= 1.0) {
            throw ConfigError("corr values must be in [0, 1)");
        }
    }
    for (double f : noise_sweep) {
        if (f < 0.0 || f > 1.0) {
            throw ConfigError("noise values must be in [0, 1]");
        }
    }
    for (int t : len_sweep) {
        if (t < 2) {
            throw ConfigError("len values must be >= 2");
        }
    }
    if (threshold <= 0.0 || threshold > 1.0) {
        throw ConfigError("threshold must be in (0, 1]");
    }
    if (max_t < 2) {
        throw ConfigError("max_t must be >= 2");
    }
    if (experiment == Experiment::Forgetting && sequences < 2) {
        throw ConfigError("forgetting needs seqs >= 2");
    }
    if (experiment == Experiment::Possibilities && generations < 1) {
        throw ConfigError("possibilities needs gens >= 1");
    }
    if (out.empty()) {
        throw ConfigError("out path must not be empty");
    }
}

} // namespace pam::bench
