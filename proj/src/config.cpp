// Copyright 2026 The oqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace oqsim {

namespace {

struct Entry {
    std::string value;
    int line;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model",        "n",
        "rows",         "cols",
        "J",            "gamma",
        "h",            "disorder_seed",
        "disorder_repeats", "dt",
        "T",            "strategy",
        "truncation_eps", "sampler",
        "trajectories", "sampler_seed",
        "observables",  "reference",
        "reference_substeps", "initial_state",
        "ledger",       "memory_limit_gb",
        "entropy_reject",
        "long_running",
    };
    return keys;
}

class Reader {
  public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }
    const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

    double real(const std::string& key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const std::string& s = raw(key);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw ConfigError(key + ": expected a real number, got '" + s + "'", line(key));
        }
        return v;
    }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const std::string& s = raw(key);
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigError(key + ": expected an integer, got '" + s + "'", line(key));
        }
        return v;
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
        const long long v = integer(key, static_cast<long long>(fallback));
        if (v < 0) {
            throw ConfigError(key + ": seeds must be non-negative", line(key));
        }
        return static_cast<std::uint64_t>(v);
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const std::string& s = raw(key);
        if (s == "true" || s == "1" || s == "yes") {
            return true;
        }
        if (s == "false" || s == "0" || s == "no") {
            return false;
        }
        throw ConfigError(key + ": expected true or false, got '" + s + "'", line(key));
    }

    void require(const std::string& key, bool ok, const std::string& what) const {
        if (!ok) {
            throw ConfigError(key + ": " + what, line(key));
        }
    }

  private:
    std::map<std::string, Entry> entries_;
};

// Splits on whitespace and on commas outside parentheses.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        }
        if ((c == ' ' || c == '\t' || (c == ',' && depth == 0))) {
            if (depth == 0) {
                if (!cur.empty()) {
                    out.push_back(cur);
                }
                cur.clear();
                continue;
            }
            if (c != ',') {
                continue;
            }
        }
        cur.push_back(c);
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

InitialStateConfig parse_initial_state(const std::string& s, int line) {
    InitialStateConfig init;
    auto arg = [&](std::string_view head) -> std::optional<std::string> {
        if (s.rfind(std::string(head) + "(", 0) == 0 && s.back() == ')') {
            return s.substr(head.size() + 1, s.size() - head.size() - 2);
        }
        return std::nullopt;
    };
    if (s == "staggered") {
        init.kind = InitialStateConfig::Kind::staggered;
    } else if (s == "plus") {
        init.kind = InitialStateConfig::Kind::product;
        init.theta = M_PI / 4.0;
    } else if (auto a = arg("random_product")) {
        init.kind = InitialStateConfig::Kind::random_product;
        long long v = -1;
        const auto [ptr, ec] = std::from_chars(a->data(), a->data() + a->size(), v);
        if (ec != std::errc() || ptr != a->data() + a->size() || v < 0) {
            throw ConfigError("initial_state: random_product needs a non-negative integer seed", line);
        }
        init.seed = static_cast<std::uint64_t>(v);
    } else if (auto a = arg("computational")) {
        init.kind = InitialStateConfig::Kind::computational;
        init.bits = *a;
        if (init.bits.empty() || init.bits.find_first_not_of("01") != std::string::npos) {
            throw ConfigError("initial_state: computational needs a bitstring such as 0101", line);
        }
    } else if (auto a = arg("product")) {
        init.kind = InitialStateConfig::Kind::product;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(a->data(), a->data() + a->size(), v);
        if (ec != std::errc() || ptr != a->data() + a->size() || !std::isfinite(v)) {
            throw ConfigError("initial_state: product needs an angle in radians", line);
        }
        init.theta = v;
    } else {
        throw ConfigError("initial_state: unknown value '" + s +
                              "' (expected staggered, plus, random_product(seed), computational(bits), product(theta))",
                          line);
    }
    return init;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Keep the shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char shortbuf[64];
        std::snprintf(shortbuf, sizeof shortbuf, "%.*g", prec, v);
        if (std::strtod(shortbuf, nullptr) == v) {
            return shortbuf;
        }
    }
    return buf;
}

ExperimentConfig build(const Reader& r, std::string name) {
    ExperimentConfig cfg;
    cfg.name = std::move(name);
    const NumericPolicy& policy = default_policy();

    r.require("model", r.has("model"), "is required");
    const std::string& model = r.raw("model");
    if (model == "xy_chain") {
        cfg.model = ExperimentConfig::Model::xy_chain;
    } else if (model == "xy_grid") {
        cfg.model = ExperimentConfig::Model::xy_grid;
    } else if (model == "heisenberg_disordered") {
        cfg.model = ExperimentConfig::Model::heisenberg_disordered;
    } else {
        throw ConfigError("model: unknown value '" + model + "' (expected xy_chain, xy_grid, heisenberg_disordered)",
                          r.line("model"));
    }
    const bool grid = cfg.model == ExperimentConfig::Model::xy_grid;
    const bool heis = cfg.model == ExperimentConfig::Model::heisenberg_disordered;

    if (grid) {
        r.require("n", !r.has("n"), "not used by xy_grid (set rows and cols)");
        r.require("rows", r.has("rows"), "is required for xy_grid");
        r.require("cols", r.has("cols"), "is required for xy_grid");
        cfg.rows = static_cast<int>(r.integer("rows", 0));
        cfg.cols = static_cast<int>(r.integer("cols", 0));
        r.require("rows", cfg.rows >= 1, "must be >= 1");
        r.require("cols", cfg.cols >= 1, "must be >= 1");
        cfg.n = cfg.rows * cfg.cols;
        r.require("cols", cfg.n >= 2 && cfg.n <= policy.max_qubits,
                  "rows * cols must lie in [2, " + std::to_string(policy.max_qubits) + "]");
    } else {
        r.require("rows", !r.has("rows"), "only used by xy_grid");
        r.require("cols", !r.has("cols"), "only used by xy_grid");
        r.require("n", r.has("n"), "is required");
        const long long n = r.integer("n", 0);
        const long long n_min = heis ? 2 : 1;
        r.require("n", n >= n_min && n <= policy.max_qubits,
                  "must lie in [" + std::to_string(n_min) + ", " + std::to_string(policy.max_qubits) + "]");
        cfg.n = static_cast<int>(n);
        cfg.rows = 1;
        cfg.cols = cfg.n;
    }

    cfg.coupling = r.real("J", -1.0);
    cfg.gamma = r.real("gamma", 0.1);
    r.require("gamma", cfg.gamma >= 0.0, "must be >= 0");
    if (heis) {
        cfg.disorder = r.real("h", 10.0);
        r.require("h", cfg.disorder >= 0.0, "must be >= 0");
        cfg.disorder_seed = r.seed("disorder_seed", 1);
        const long long reps = r.integer("disorder_repeats", 1);
        r.require("disorder_repeats", reps >= 1 && reps <= 100000, "must lie in [1, 100000]");
        cfg.disorder_repeats = static_cast<int>(reps);
    } else {
        for (const char* key : {"h", "disorder_seed", "disorder_repeats"}) {
            r.require(key, !r.has(key), "only used by heisenberg_disordered");
        }
        cfg.disorder = 0.0;
    }

    r.require("dt", r.has("dt"), "is required");
    r.require("T", r.has("T"), "is required");
    cfg.dt = r.real("dt", 0.0);
    cfg.total_time = r.real("T", 0.0);
    r.require("dt", cfg.dt > 0.0, "must be > 0");
    r.require("T", cfg.total_time >= cfg.dt, "must be >= dt");
    {
        const double ratio = cfg.total_time / cfg.dt;
        r.require("T", std::abs(std::round(ratio) * cfg.dt - cfg.total_time) < 1e-9,
                  "must be an integer multiple of dt");
        r.require("T", ratio <= 1e7, "more than 1e7 steps");
    }

    const std::string strategy = r.has("strategy") ? r.raw("strategy") : (heis ? "adjoint_direct" : "reconstructed");
    if (strategy == "reconstructed") {
        cfg.strategy.kind = Strategy::Kind::reconstructed;
    } else if (strategy == "adjoint_direct") {
        cfg.strategy.kind = Strategy::Kind::adjoint_direct;
    } else {
        throw ConfigError("strategy: unknown value '" + strategy + "' (expected reconstructed, adjoint_direct)",
                          r.line("strategy"));
    }
    cfg.strategy.truncation_eps = r.real("truncation_eps", 1e-12);
    r.require("truncation_eps", cfg.strategy.truncation_eps >= 0.0 && cfg.strategy.truncation_eps < 1.0,
              "must lie in [0, 1)");

    const std::string sampler = r.has("sampler") ? r.raw("sampler") : "exact_channel";
    if (sampler == "exact_channel") {
        cfg.sampler.kind = SamplerConfig::Kind::exact_channel;
        r.require("trajectories", !r.has("trajectories"), "only used with sampler = trajectories");
        r.require("sampler_seed", !r.has("sampler_seed"), "only used with sampler = trajectories");
    } else if (sampler == "trajectories") {
        cfg.sampler.kind = SamplerConfig::Kind::trajectories;
        const long long m = r.integer("trajectories", 10000);
        r.require("trajectories", m >= 1, "must be >= 1");
        cfg.sampler.trajectories = static_cast<std::uint64_t>(m);
        cfg.sampler.seed = r.seed("sampler_seed", 1);
    } else {
        throw ConfigError("sampler: unknown value '" + sampler + "' (expected exact_channel, trajectories)",
                          r.line("sampler"));
    }

    if (r.has("observables")) {
        for (const auto& tok : split_list(r.raw("observables"))) {
            try {
                cfg.observables.push_back(ObservableSpec::parse(tok));
                cfg.observables.back().validate(cfg.n);
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("observables: ") + e.what(), r.line("observables"));
            }
        }
        r.require("observables", !cfg.observables.empty(), "must list at least one observable");
    } else if (heis) {
        std::vector<int> half;
        for (int i = 0; i < cfg.n / 2; ++i) {
            half.push_back(i);
        }
        if (cfg.n % 2 == 0) {
            cfg.observables.emplace_back(ImbalanceObservable{});
        }
        cfg.observables.emplace_back(EntropyObservable{half});
    } else if (cfg.n == 1) {
        cfg.observables.emplace_back(PauliObservable{PauliString("X")});
        cfg.observables.emplace_back(EntropyObservable{});
    } else {
        cfg.observables.emplace_back(CorrelationObservable{0, 1});
        cfg.observables.emplace_back(CorrelationObservable{0, cfg.n - 1});
        cfg.observables.emplace_back(EntropyObservable{});
    }
    if (cfg.sampler.kind == SamplerConfig::Kind::trajectories) {
        for (const auto& o : cfg.observables) {
            r.require("observables", o.is_linear(),
                      o.name() + " needs full density matrices and cannot be estimated from trajectories");
        }
    }

    cfg.reference = r.boolean("reference", false);
    const long long subs = r.integer("reference_substeps", 10);
    r.require("reference_substeps", subs >= 1 && subs <= 10000, "must lie in [1, 10000]");
    cfg.reference_substeps = static_cast<int>(subs);

    if (r.has("initial_state")) {
        cfg.initial_state = parse_initial_state(r.raw("initial_state"), r.line("initial_state"));
    } else {
        cfg.initial_state.kind = heis ? InitialStateConfig::Kind::staggered : InitialStateConfig::Kind::random_product;
    }
    if (cfg.initial_state.kind == InitialStateConfig::Kind::computational) {
        r.require("initial_state", static_cast<int>(cfg.initial_state.bits.size()) == cfg.n,
                  "bitstring length must equal the number of qubits");
    }

    if (r.has("ledger")) {
        const std::string& l = r.raw("ledger");
        if (l == "matrices") {
            cfg.ledger = ReconstructionLedger::Storage::matrices;
        } else if (l == "scalars") {
            cfg.ledger = ReconstructionLedger::Storage::scalars;
        } else if (l != "auto") {
            throw ConfigError("ledger: unknown value '" + l + "' (expected auto, matrices, scalars)", r.line("ledger"));
        }
    }
    if (cfg.ledger == ReconstructionLedger::Storage::scalars && cfg.strategy.kind == Strategy::Kind::reconstructed) {
        for (const auto& o : cfg.observables) {
            r.require("ledger", o.is_linear(), "scalar ledger cannot reconstruct " + o.name());
        }
    }

    cfg.entropy_reject = r.real("entropy_reject", policy.entropy_reject);
    r.require("entropy_reject", cfg.entropy_reject <= 0.0, "must be <= 0");
    cfg.memory_limit_gb = r.real("memory_limit_gb", 8.0);
    r.require("memory_limit_gb", cfg.memory_limit_gb > 0.0, "must be > 0");
    cfg.long_running = r.boolean("long_running", false);
    return cfg;
}

}  // namespace

const char* model_name(ExperimentConfig::Model model) {
    switch (model) {
        case ExperimentConfig::Model::xy_chain: return "xy_chain";
        case ExperimentConfig::Model::xy_grid: return "xy_grid";
        case ExperimentConfig::Model::heisenberg_disordered: return "heisenberg_disordered";
    }
    return "?";
}

long ExperimentConfig::steps() const { return std::lround(total_time / dt); }

NumericPolicy ExperimentConfig::policy() const {
    NumericPolicy p = default_policy();
    p.entropy_reject = entropy_reject;
    return p;
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << "model = " << model_name(model) << '\n';
    if (model == Model::xy_grid) {
        os << "rows = " << rows << '\n' << "cols = " << cols << '\n';
    } else {
        os << "n = " << n << '\n';
    }
    os << "J = " << format_real(coupling) << '\n';
    os << "gamma = " << format_real(gamma) << '\n';
    if (model == Model::heisenberg_disordered) {
        os << "h = " << format_real(disorder) << '\n';
        os << "disorder_seed = " << disorder_seed << '\n';
        os << "disorder_repeats = " << disorder_repeats << '\n';
    }
    os << "dt = " << format_real(dt) << '\n';
    os << "T = " << format_real(total_time) << '\n';
    os << "strategy = " << strategy_name(strategy.kind) << '\n';
    os << "truncation_eps = " << format_real(strategy.truncation_eps) << '\n';
    if (sampler.kind == SamplerConfig::Kind::trajectories) {
        os << "sampler = trajectories\n";
        os << "trajectories = " << sampler.trajectories << '\n';
        os << "sampler_seed = " << sampler.seed << '\n';
    } else {
        os << "sampler = exact_channel\n";
    }
    os << "observables =";
    for (const auto& o : observables) {
        os << ' ' << o.name();
    }
    os << '\n';
    os << "reference = " << (reference ? "true" : "false") << '\n';
    os << "reference_substeps = " << reference_substeps << '\n';
    os << "initial_state = ";
    switch (initial_state.kind) {
        case InitialStateConfig::Kind::staggered: os << "staggered"; break;
        case InitialStateConfig::Kind::random_product: os << "random_product(" << initial_state.seed << ')'; break;
        case InitialStateConfig::Kind::computational: os << "computational(" << initial_state.bits << ')'; break;
        case InitialStateConfig::Kind::product: os << "product(" << format_real(initial_state.theta) << ')'; break;
    }
    os << '\n';
    os << "ledger = ";
    if (!ledger) {
        os << "auto";
    } else {
        os << (*ledger == ReconstructionLedger::Storage::matrices ? "matrices" : "scalars");
    }
    os << '\n';
    os << "entropy_reject = " << format_real(entropy_reject) << '\n';
    os << "memory_limit_gb = " << format_real(memory_limit_gb) << '\n';
    os << "long_running = " << (long_running ? "true" : "false") << '\n';
    return os.str();
}

ExperimentConfig parse_config(std::istream& in, std::string name) {
    std::map<std::string, Entry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value', got '" + body + "'", lineno);
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("missing key before '='", lineno);
        }
        if (known_keys().count(key) == 0) {
            throw ConfigError("unknown key '" + key + "'", lineno);
        }
        if (value.empty()) {
            throw ConfigError(key + ": missing value", lineno);
        }
        if (entries.count(key) != 0) {
            throw ConfigError("duplicate key '" + key + "' (first set on line " +
                                  std::to_string(entries.at(key).line) + ")",
                              lineno);
        }
        entries.emplace(key, Entry{value, lineno});
    }
    return build(Reader(std::move(entries)), std::move(name));
}

ExperimentConfig parse_config_text(std::string_view text, std::string name) {
    std::istringstream in{std::string(text)};
    return parse_config(in, std::move(name));
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    if (path.extension() == ".json") {
        nlohmann::json meta;
        try {
            in >> meta;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("metadata file is not valid JSON: ") + e.what());
        }
        if (!meta.contains("config_text") || !meta["config_text"].is_string()) {
            throw ConfigError("metadata file has no config_text block");
        }
        std::string name = meta.value("name", path.parent_path().filename().string());
        return parse_config_text(meta["config_text"].get<std::string>(), std::move(name));
    }
    return parse_config(in, path.stem().string());
}

}  // namespace oqsim
