#include "delab/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace delab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

struct Raw {
    std::string value;
    int line;
};

const char* const kKnownKeys[] = {
    "gamma",        "lambda",          "mu",
    "damping.kind", "damping.table",   "epsilon",
    "shape.phi",    "shape.psi",       "u_minus",
    "v_minus",      "delta0",          "grid.x_left",
    "grid.x_right", "grid.n_cells",    "cfl",
    "t_max",        "record_interval", "gradient_threshold",
    "vacuum_floor", "sweep.epsilons",  "sweep.mesh_levels",
    "analysis.k_threshold", "analysis.phi_smallness", "analysis.riccati_coeff",
    "output.dir",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

} // namespace

std::string ParsedConfig::error_summary() const {
    std::ostringstream out;
    for (const auto& e : errors) {
        out << "line " << e.line << ": " << e.message << "\n";
    }
    return out.str();
}

ParsedConfig parse_config(const std::string& text) {
    ParsedConfig cfg;
    std::map<std::string, Raw> values;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            cfg.errors.push_back({line_no, "expected 'key = value', got '" + stripped + "'"});
            continue;
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            cfg.errors.push_back({line_no, "missing key before '='"});
            continue;
        }
        if (!known_key(key)) {
            cfg.errors.push_back({line_no, "unknown key '" + key + "'"});
            continue;
        }
        if (value.empty()) {
            cfg.errors.push_back({line_no, "missing value for '" + key + "'"});
            continue;
        }
        values[key] = Raw{value, line_no}; // duplicate keys: the last one wins
    }

    auto take = [&](const char* key) -> const Raw* {
        auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };
    auto number = [&](const char* key, double fallback) {
        const Raw* raw = take(key);
        if (!raw) return fallback;
        try {
            std::size_t used = 0;
            double v = std::stod(raw->value, &used);
            if (used != raw->value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            cfg.errors.push_back({raw->line, "bad number for '" + std::string(key) + "': '" +
                                                 raw->value + "'"});
            return fallback;
        }
    };
    auto integer = [&](const char* key, int fallback) {
        double v = number(key, fallback);
        return static_cast<int>(v);
    };
    auto text_of = [&](const char* key, const std::string& fallback) {
        const Raw* raw = take(key);
        return raw ? raw->value : fallback;
    };
    auto line_of = [&](const char* key) {
        const Raw* raw = take(key);
        return raw ? raw->line : 0;
    };

    double gamma = number("gamma", 3.0);
    double lambda = number("lambda", 0.0);
    double mu = number("mu", 1.0);
    std::string kind = text_of("damping.kind", "power_time");
    std::string table = text_of("damping.table", "");
    double epsilon = number("epsilon", 0.1);
    std::string phi_text = text_of("shape.phi", "zero");
    std::string psi_text = text_of("shape.psi", "gaussian");
    double u_minus = number("u_minus", 1.0);
    double v_minus = number("v_minus", 0.0);
    double delta0 = number("delta0", 0.05);
    double x_left = number("grid.x_left", -24.0);
    double x_right = number("grid.x_right", 24.0);
    int n_cells = integer("grid.n_cells", 2000);
    double cfl = number("cfl", 0.4);
    double t_max = number("t_max", 12.0);
    double record_interval = number("record_interval", 0.05);
    double gradient_threshold = number("gradient_threshold", 0.0);
    double vacuum_floor = number("vacuum_floor", 1e-10);
    cfg.sweep_mesh_levels = integer("sweep.mesh_levels", 2);
    cfg.thresholds.k_threshold = number("analysis.k_threshold", cfg.thresholds.k_threshold);
    cfg.thresholds.phi_smallness = number("analysis.phi_smallness", cfg.thresholds.phi_smallness);
    cfg.thresholds.riccati_coeff = number("analysis.riccati_coeff", cfg.thresholds.riccati_coeff);
    cfg.output_dir = text_of("output.dir", ".");

    if (!(gamma > 1.0)) {
        cfg.errors.push_back({line_of("gamma"), "gamma must exceed 1"});
    }
    if (lambda < 0.0) cfg.errors.push_back({line_of("lambda"), "lambda must be nonnegative"});
    if (mu < 0.0) cfg.errors.push_back({line_of("mu"), "mu must be nonnegative"});
    if (!(epsilon > 0.0)) {
        cfg.errors.push_back({line_of("epsilon"), "epsilon must be positive"});
    }
    if (!(u_minus > 0.0)) cfg.errors.push_back({line_of("u_minus"), "u_minus must be positive"});
    if (!(delta0 > 0.0)) cfg.errors.push_back({line_of("delta0"), "delta0 must be positive"});
    if (n_cells < 16) {
        cfg.errors.push_back({line_of("grid.n_cells"), "n_cells >= 16 required"});
    }
    if (!(x_right > x_left)) {
        cfg.errors.push_back({line_of("grid.x_right"), "grid needs x_right > x_left"});
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        cfg.errors.push_back({line_of("cfl"), "cfl must lie in (0, 1]"});
    }
    if (!(t_max > 0.0)) cfg.errors.push_back({line_of("t_max"), "t_max must be positive"});
    if (!(record_interval > 0.0)) {
        cfg.errors.push_back({line_of("record_interval"), "record_interval must be positive"});
    }
    if (gradient_threshold < 0.0) {
        cfg.errors.push_back(
            {line_of("gradient_threshold"), "gradient_threshold must be nonnegative"});
    }
    if (!(vacuum_floor > 0.0)) {
        cfg.errors.push_back({line_of("vacuum_floor"), "vacuum_floor must be positive"});
    }
    if (cfg.sweep_mesh_levels < 2) {
        cfg.errors.push_back({line_of("sweep.mesh_levels"), "sweep.mesh_levels >= 2 required"});
    }

    Shape phi = Shape::zero(), psi = Shape::gaussian();
    try {
        phi = Shape::parse(phi_text);
    } catch (const std::exception& e) {
        cfg.errors.push_back({line_of("shape.phi"), e.what()});
    }
    try {
        psi = Shape::parse(psi_text);
    } catch (const std::exception& e) {
        cfg.errors.push_back({line_of("shape.psi"), e.what()});
    }

    DampingModel model = DampingModel::none();
    if (kind == "none") {
        model = DampingModel::none();
    } else if (kind == "power_time") {
        if (lambda >= 0.0 && mu >= 0.0) model = DampingModel::power_time(lambda, mu);
    } else if (kind == "space_power") {
        if (lambda >= 0.0 && mu >= 0.0) model = DampingModel::space_power(lambda, mu);
    } else if (kind == "tabulated") {
        if (table.empty()) {
            cfg.errors.push_back(
                {line_of("damping.kind"), "damping.kind = tabulated requires damping.table"});
        } else {
            try {
                model = DampingModel::tabulated_from_file(table);
            } catch (const std::exception& e) {
                cfg.errors.push_back({line_of("damping.table"), e.what()});
            }
        }
    } else {
        cfg.errors.push_back({line_of("damping.kind"),
                              "unknown damping.kind '" + kind +
                                  "' (none, power_time, space_power, tabulated)"});
    }

    if (const Raw* raw = take("sweep.epsilons")) {
        std::istringstream list(raw->value);
        std::string item;
        double prev = 0.0;
        while (std::getline(list, item, ',')) {
            std::string v = trim(item);
            if (v.empty()) continue;
            try {
                double e = std::stod(v);
                if (!(e > 0.0)) throw std::invalid_argument("nonpositive");
                if (e < prev) {
                    cfg.errors.push_back({raw->line, "sweep.epsilons must be ascending"});
                    break;
                }
                prev = e;
                cfg.sweep_epsilons.push_back(e);
            } catch (const std::exception&) {
                cfg.errors.push_back({raw->line, "bad epsilon '" + v + "' in sweep.epsilons"});
                break;
            }
        }
    }

    if (!cfg.ok()) return cfg;

    cfg.run.gamma = gamma;
    cfg.run.model = model;
    cfg.run.family.epsilon = epsilon;
    cfg.run.family.phi = phi;
    cfg.run.family.psi = psi;
    cfg.run.family.u_minus = u_minus;
    cfg.run.family.v_minus = v_minus;
    cfg.run.family.delta0 = delta0;
    cfg.run.grid = Grid1D{x_left, x_right, n_cells};
    cfg.run.cfl = cfl;
    cfg.run.t_max = t_max;
    cfg.run.record_interval = record_interval;
    cfg.run.gradient_threshold = gradient_threshold;
    cfg.run.vacuum_floor = vacuum_floor;

    // Semantic check: the domain must contain the data support inflated by
    // the fastest signal over the horizon.
    try {
        double need = required_domain_radius(cfg.run);
        if (cfg.run.grid.x_right < need || cfg.run.grid.x_left > -need) {
            std::ostringstream msg;
            msg << "domain too small for t_max: needs half-width >= " << need;
            cfg.errors.push_back({0, msg.str()});
        }
    } catch (const std::exception& e) {
        cfg.errors.push_back({0, e.what()});
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParsedConfig cfg;
        cfg.errors.push_back({0, "cannot open config file: " + path});
        return cfg;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace delab
