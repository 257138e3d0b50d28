#include "mfshe/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mfshe/errors.hpp"

namespace mfshe::harness {

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::LinearDimension: return "linear-dimension";
        case ExperimentKind::LinearLimsup: return "linear-limsup";
        case ExperimentKind::PamDimension: return "pam-dimension";
        case ExperimentKind::Validation: return "validation";
    }
    return "?";
}

namespace {

ExperimentKind kind_from(const std::string& s) {
    if (s == "linear-dimension") return ExperimentKind::LinearDimension;
    if (s == "linear-limsup") return ExperimentKind::LinearLimsup;
    if (s == "pam-dimension") return ExperimentKind::PamDimension;
    if (s == "validation") return ExperimentKind::Validation;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    try {
        (void)model();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    if (id.empty()) problems.emplace_back("experiment.id is empty");
    if (out_dir.empty()) problems.emplace_back("output.dir is empty");
    if (shell_min < 0 || shell_max < shell_min)
        problems.emplace_back("shells: need 0 <= min <= max");
    if (replicas < 1) problems.emplace_back("shells.replicas must be >= 1");
    if (scheme != "block-independent" && scheme != "circulant-exact" &&
        scheme != "spectral-torus")
        problems.emplace_back("sampler.scheme unknown: " + scheme);
    if (gauge_kind != "linear-she" && gauge_kind != "pam")
        problems.emplace_back("gauge.kind unknown: " + gauge_kind);

    for (double g : gammas)
        if (!(g >= 0.0)) problems.emplace_back("gauge.gammas must be >= 0");
    if (!(spacing > 0.0)) problems.emplace_back("sampler.spacing must be > 0");
    if (block < 1) problems.emplace_back("sampler.block must be >= 1");
    if (!problems.empty()) {
        std::string msg = "invalid config:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "[experiment]\n"
       << "kind = " << kind_name(kind) << "\n"
       << "id = " << id << "\n"
       << "seed = " << seed << "\n\n"
       << "[model]\n"
       << "alpha = " << alpha << "\n"
       << "beta = " << beta << "\n"
       << "d = " << d << "\n"
       << "t = " << t << "\n\n"
       << "[sampler]\n"
       << "scheme = " << scheme << "\n"
       << "block = " << block << "\n"
       << "spacing = " << spacing << "\n"
       << "grid_n = " << grid_n << "\n"
       << "torus_L = " << torus_side << "\n"
       << "dt = " << dt << "\n\n"
       << "[shells]\n"
       << "min = " << shell_min << "\n"
       << "max = " << shell_max << "\n"
       << "replicas = " << replicas << "\n\n"
       << "[gauge]\n"
       << "kind = " << gauge_kind << "\n"
       << "gammas = ";
    for (std::size_t i = 0; i < gammas.size(); ++i)
        os << (i ? "," : "") << gammas[i];
    os << "\n\n"
       << "[output]\n"
       << "dir = " << out_dir << "\n"
       << "workers = " << workers << "\n";
    return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.gammas.clear();
    std::istringstream is(text);
    std::string line, section;
    std::map<std::string, bool> seen;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("bad section: " + line);
            section = line.substr(1, line.size() - 2);
            if (section != "experiment" && section != "model" &&
                section != "sampler" && section != "shells" &&
                section != "gauge" && section != "output")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;
        seen[qual] = true;
        if (qual == "experiment.kind") cfg.kind = kind_from(val);
        else if (qual == "experiment.id") cfg.id = val;
        else if (qual == "experiment.seed") cfg.seed = std::stoull(val);
        else if (qual == "model.alpha") cfg.alpha = std::stod(val);
        else if (qual == "model.beta") cfg.beta = std::stod(val);
        else if (qual == "model.d") cfg.d = std::stoi(val);
        else if (qual == "model.t") cfg.t = std::stod(val);
        else if (qual == "sampler.scheme") cfg.scheme = val;
        else if (qual == "sampler.block") cfg.block = std::stoll(val);
        else if (qual == "sampler.spacing") cfg.spacing = std::stod(val);
        else if (qual == "sampler.grid_n") cfg.grid_n = std::stoi(val);
        else if (qual == "sampler.torus_L") cfg.torus_side = std::stod(val);
        else if (qual == "sampler.dt") cfg.dt = std::stod(val);
        else if (qual == "shells.min") cfg.shell_min = std::stoi(val);
        else if (qual == "shells.max") cfg.shell_max = std::stoi(val);
        else if (qual == "shells.replicas") cfg.replicas = std::stoi(val);
        else if (qual == "gauge.kind") cfg.gauge_kind = val;
        else if (qual == "gauge.gammas") cfg.gammas = parse_list(val);
        else if (qual == "output.dir") cfg.out_dir = val;
        else if (qual == "output.workers") cfg.workers = std::stoi(val);
        else throw ConfigError("unknown key '" + qual + "'");
    }
    const char* required[] = {"experiment.kind", "model.alpha", "model.beta",
                              "model.d", "model.t", "output.dir"};
    std::string missing;
    for (const char* r : required)
        if (!seen.count(r)) missing += std::string("\n  - missing ") + r;
    if (!missing.empty()) throw ConfigError("invalid config:" + missing);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return from_text(buf.str());
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write config " + path);
    os << to_text();
}

void apply_env_overrides(ExperimentConfig& cfg) {
    if (const char* s = std::getenv("MFSHE_SEED")) cfg.seed = std::stoull(s);
    if (const char* w = std::getenv("MFSHE_WORKERS")) cfg.workers = std::stoi(w);
}

} // namespace mfshe::harness
