#include "config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "nmme/errors.hpp"

namespace nmme::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct IniData {
    // section -> key -> value; consumed keys are tracked to reject typos
    std::map<std::string, std::map<std::string, std::string>> values;
    mutable std::map<std::string, std::map<std::string, bool>> used;

    bool has(const std::string& sec, const std::string& key) const {
        auto s = values.find(sec);
        return s != values.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key) const {
        auto s = values.find(sec);
        if (s == values.end() || !s->second.count(key))
            throw ConfigError("config: missing required key [" + sec + "] " + key);
        used[sec][key] = true;
        return s->second.at(key);
    }
    std::string get_or(const std::string& sec, const std::string& key,
                       const std::string& fallback) const {
        if (!has(sec, key)) return fallback;
        return get(sec, key);
    }
    void check_consumed() const {
        for (const auto& [sec, kv] : values)
            for (const auto& [key, value] : kv)
                if (!used[sec].count(key))
                    throw ConfigError("config: unknown or unused key [" + sec + "] " + key + " = " +
                                      value);
    }
};

IniData parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    IniData ini;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
        if (!ini.values[section].emplace(key, value).second)
            throw ConfigError("config: duplicate key [" + section + "] " + key);
    }
    return ini;
}

double to_double(const std::string& sec, const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + sec + "] " + key + " is not a number: " + raw);
    }
}

long to_long(const std::string& sec, const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + sec + "] " + key + " is not an integer: " + raw);
    }
}

std::vector<double> split_numbers(const std::string& sec, const std::string& key,
                                  const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(to_double(sec, key, trim(part)));
    return out;
}

SpectralModel parse_bath(const IniData& ini) {
    const std::string model = ini.get("bath", "model");
    if (model == "null") return NullBath{};
    if (model == "ohmic-exp")
        return OhmicExp{to_double("bath", "eta", ini.get("bath", "eta")),
                        to_double("bath", "omega_c", ini.get("bath", "omega_c"))};
    if (model == "lorentzian")
        return LorentzianExtended{to_double("bath", "gamma0", ini.get("bath", "gamma0")),
                                  to_double("bath", "lambda", ini.get("bath", "lambda")),
                                  to_double("bath", "omega_center", ini.get("bath", "omega_center"))};
    if (model == "flat-cutoff")
        return FlatCutoff{to_double("bath", "gamma", ini.get("bath", "gamma")),
                          to_double("bath", "omega_max", ini.get("bath", "omega_max"))};
    if (model == "tabulated") {
        auto [omega, j] = read_two_column_csv(ini.get("bath", "table"));
        return Tabulated{std::move(omega), std::move(j)};
    }
    throw ConfigError("config: unknown bath model '" + model + "'");
}

InitialState parse_initial(const std::string& raw) {
    const auto colon = raw.find(':');
    const std::string tag = colon == std::string::npos ? raw : raw.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : raw.substr(colon + 1);
    if (tag == "excited") return ExcitedState{};
    if (tag == "ground") return GroundState{};
    if (tag == "fock") return FockState{int(to_long("scenario", "initial", args))};
    if (tag == "coherent") {
        auto v = split_numbers("scenario", "initial", args);
        if (v.size() == 1) v.push_back(0.0);
        if (v.size() != 2) throw ConfigError("config: coherent initial state needs re[,im]");
        return CoherentState{cplx(v[0], v[1])};
    }
    if (tag == "bloch") {
        const auto v = split_numbers("scenario", "initial", args);
        if (v.size() != 2) throw ConfigError("config: bloch initial state needs theta,phi");
        return BlochState{v[0], v[1]};
    }
    throw ConfigError("config: unknown initial state '" + raw + "'");
}

Drive parse_drive(const std::string& raw) {
    const auto colon = raw.find(':');
    const std::string tag = colon == std::string::npos ? raw : raw.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : raw.substr(colon + 1);
    if (tag == "constant") return ConstantDrive{to_double("scenario", "drive", args)};
    if (tag == "sinusoid") {
        const auto v = split_numbers("scenario", "drive", args);
        if (v.size() != 3) throw ConfigError("config: sinusoid drive needs amplitude,omega,phase");
        return SinusoidDrive{v[0], v[1], v[2]};
    }
    if (tag == "table") {
        auto [t, value] = read_two_column_csv(args);
        return TabulatedDrive{std::move(t), std::move(value)};
    }
    throw ConfigError("config: unknown drive '" + raw + "'");
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open table file " + path);
    std::vector<double> a, b;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("config: " + path + ": expected two comma-separated columns at line " +
                              std::to_string(lineno));
        try {
            a.push_back(std::stod(trim(line.substr(0, comma))));
            b.push_back(std::stod(trim(line.substr(comma + 1))));
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header line
            throw ConfigError("config: " + path + ": bad number at line " + std::to_string(lineno));
        }
    }
    if (a.size() < 2) throw ConfigError("config: " + path + ": need at least two rows");
    return {std::move(a), std::move(b)};
}

RunConfig parse_config_file(const std::string& path) {
    const IniData ini = parse_ini(path);
    RunConfig cfg;

    const std::string kind = ini.get("scenario", "kind");
    if (kind == "cavity")
        cfg.scenario.kind = ScenarioKind::cavity;
    else if (kind == "driven-cavity")
        cfg.scenario.kind = ScenarioKind::driven_cavity;
    else if (kind == "two-state")
        cfg.scenario.kind = ScenarioKind::two_state;
    else
        throw ConfigError("config: unknown scenario kind '" + kind + "'");

    cfg.scenario.omega0 = to_double("scenario", "omega0", ini.get("scenario", "omega0"));
    if (cfg.scenario.kind != ScenarioKind::two_state)
        cfg.scenario.n_max = int(to_long("scenario", "n_max", ini.get("scenario", "n_max")));
    cfg.scenario.initial = parse_initial(ini.get("scenario", "initial"));
    if (cfg.scenario.kind == ScenarioKind::driven_cavity)
        cfg.scenario.drive = parse_drive(ini.get("scenario", "drive"));

    cfg.scenario.bath = parse_bath(ini);
    const std::string beta = ini.get("bath", "beta");
    if (beta == "zero-T" || beta == "inf" || beta == "zero")
        cfg.scenario.temperature = Temperature::zero();
    else
        cfg.scenario.temperature = Temperature::inverse(to_double("bath", "beta", beta));

    const double horizon = to_double("grid", "T", ini.get("grid", "T"));
    const long steps = to_long("grid", "N", ini.get("grid", "N"));
    if (horizon <= 0.0 || steps < 2) throw ConfigError("config: grid needs T > 0 and N >= 2");
    try {
        cfg.grid = TimeGrid::from_horizon(horizon, int(steps));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const std::string method = ini.get("method", "method");
    if (method == "integral")
        cfg.method = RunMethod::integral;
    else if (method == "green")
        cfg.method = RunMethod::green;
    else if (method == "both")
        cfg.method = RunMethod::both;
    else if (method == "unravel")
        cfg.method = RunMethod::unravel;
    else
        throw ConfigError("config: unknown method '" + method + "'");

    const std::string solver = ini.get_or("method", "solver", "dense");
    if (solver == "dense")
        cfg.policy.method = SolveMethod::dense_collocation;
    else if (solver == "picard")
        cfg.policy.method = SolveMethod::picard;
    else
        throw ConfigError("config: unknown solver '" + solver + "'");
    cfg.policy.picard_tol =
        to_double("method", "picard_tol", ini.get_or("method", "picard_tol", "1e-10"));
    cfg.policy.picard_max_iter =
        int(to_long("method", "picard_max_iter", ini.get_or("method", "picard_max_iter", "200")));
    cfg.policy.relaxation =
        to_double("method", "relaxation", ini.get_or("method", "relaxation", "1"));
    cfg.n_traj = to_long("method", "n_traj", ini.get_or("method", "n_traj", "10000"));
    cfg.seed = std::uint64_t(to_long("method", "seed", ini.get_or("method", "seed", "1")));

    cfg.out_dir = ini.get_or("output", "dir", ".");
    const std::string dump = ini.get_or("output", "dump_tables", "false");
    if (dump == "true" || dump == "1")
        cfg.dump_tables = true;
    else if (dump == "false" || dump == "0")
        cfg.dump_tables = false;
    else
        throw ConfigError("config: [output] dump_tables must be true or false");

    ini.check_consumed();

    try {
        cfg.scenario.validate();
        cfg.policy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

}  // namespace nmme::cli
