#include "noregret/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace noregret {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_error(const std::string& message) {
    throw std::invalid_argument("config: " + message);
}

}  // namespace

KvConfig KvConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        config_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

KvConfig KvConfig::parse_string(const std::string& text, const std::string& origin) {
    KvConfig kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                config_error(origin + ":" + std::to_string(line_no) + ": unterminated section");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty()) {
                config_error(origin + ":" + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            config_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            config_error(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        const std::string full_key = section.empty() ? key : section + "." + key;
        if (kv.values_.count(full_key) != 0) {
            config_error(origin + ": duplicate key '" + full_key + "'");
        }
        kv.values_[full_key] = value;
    }
    return kv;
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string KvConfig::get_string(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        config_error(origin_ + ": missing required key '" + key + "'");
    }
    consumed_.insert(key);
    return it->second;
}

std::optional<std::string> KvConfig::maybe_string(const std::string& key) {
    if (!has(key)) {
        return std::nullopt;
    }
    return get_string(key);
}

double KvConfig::get_double(const std::string& key, std::optional<double> fallback) {
    const auto text = maybe_string(key);
    if (!text) {
        if (fallback) {
            return *fallback;
        }
        config_error(origin_ + ": missing required key '" + key + "'");
    }
    try {
        size_t consumed = 0;
        const double v = std::stod(*text, &consumed);
        if (consumed != text->size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        config_error(origin_ + ": key '" + key + "' is not a number: '" + *text + "'");
    }
}

Index KvConfig::get_index(const std::string& key, std::optional<Index> fallback) {
    const auto text = maybe_string(key);
    if (!text) {
        if (fallback) {
            return *fallback;
        }
        config_error(origin_ + ": missing required key '" + key + "'");
    }
    try {
        size_t consumed = 0;
        const long long v = std::stoll(*text, &consumed);
        if (consumed != text->size()) {
            throw std::invalid_argument("trailing characters");
        }
        return static_cast<Index>(v);
    } catch (const std::exception&) {
        config_error(origin_ + ": key '" + key + "' is not an integer: '" + *text + "'");
    }
}

std::uint64_t KvConfig::get_u64(const std::string& key) {
    const std::string text = get_string(key);
    try {
        size_t consumed = 0;
        const unsigned long long v = std::stoull(text, &consumed);
        if (consumed != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        config_error(origin_ + ": key '" + key + "' is not an unsigned integer: '" + text + "'");
    }
}

bool KvConfig::get_bool(const std::string& key, std::optional<bool> fallback) {
    const auto text = maybe_string(key);
    if (!text) {
        if (fallback) {
            return *fallback;
        }
        config_error(origin_ + ": missing required key '" + key + "'");
    }
    if (*text == "true" || *text == "1") {
        return true;
    }
    if (*text == "false" || *text == "0") {
        return false;
    }
    config_error(origin_ + ": key '" + key + "' is not a boolean: '" + *text + "'");
}

VectorXd KvConfig::get_vector(const std::string& key) {
    const auto v = maybe_vector(key);
    if (!v) {
        config_error(origin_ + ": missing required key '" + key + "'");
    }
    return *v;
}

std::optional<VectorXd> KvConfig::maybe_vector(const std::string& key) {
    const auto text = maybe_string(key);
    if (!text) {
        return std::nullopt;
    }
    std::istringstream in(*text);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        try {
            size_t consumed = 0;
            values.push_back(std::stod(token, &consumed));
            if (consumed != token.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            config_error(origin_ + ": key '" + key + "' has non-numeric entry '" + token + "'");
        }
    }
    if (values.empty()) {
        config_error(origin_ + ": key '" + key + "' is empty");
    }
    VectorXd result(static_cast<Index>(values.size()));
    for (Index i = 0; i < result.size(); ++i) {
        result[i] = values[static_cast<size_t>(i)];
    }
    return result;
}

void KvConfig::finish() const {
    std::vector<std::string> unconsumed;
    for (const auto& [key, value] : values_) {
        if (consumed_.count(key) == 0) {
            unconsumed.push_back(key);
        }
    }
    if (!unconsumed.empty()) {
        std::string joined;
        for (const auto& key : unconsumed) {
            joined += (joined.empty() ? "" : ", ") + key;
        }
        config_error(origin_ + ": unknown key(s): " + joined);
    }
}

DynamicsConfig::DynamicsConfig() {
    const double angle = 0.7;
    transition = MatrixXd(2, 2);
    transition << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    transition *= 0.9;
    x0 = VectorXd::Zero(2);
    direction = VectorXd::Zero(2);
    direction[0] = 1.0;
}

Index DynamicsConfig::state_dimension() const {
    return system == "linear" ? transition.rows() : y0.size();
}

std::vector<Scenario> PendulumExperimentConfig::scenarios() const {
    if (scenario == "all") {
        return {Scenario::TrueModel, Scenario::ZeroModel, Scenario::GpAdaptive};
    }
    return {scenario_from_name(scenario)};
}

void ExperimentConfig::validate() const {
    const bool known = kind == "regress" || kind == "pendulum" || kind == "dynamics" ||
                       kind == "ipcheck";
    if (!known) {
        config_error("unknown experiment kind '" + kind +
                     "' (expected regress, pendulum, dynamics or ipcheck)");
    }
    for (const auto& format : formats) {
        if (format != "csv" && format != "json" && format != "plotdata") {
            config_error("unknown format '" + format + "'");
        }
    }
    require(plot_grid >= 2, "config: plot_grid must be >= 2");
    if (kind == "regress") {
        if (!seed) {
            config_error("regress draws random inputs; a seed is mandatory");
        }
        require(regress.has_value(), "config: regress section missing");
        regress->validate();
    } else if (kind == "pendulum") {
        require(pendulum.has_value(), "config: pendulum section missing");
        if (pendulum->scenario != "all") {
            scenario_from_name(pendulum->scenario);
        }
        ControllerConfig controller = pendulum->controller;
        controller.validate(pendulum->params, pendulum->mix);
    } else if (kind == "dynamics") {
        require(dynamics.has_value(), "config: dynamics section missing");
        const auto& dyn = *dynamics;
        if (dyn.system != "linear" && dyn.system != "affine" && dyn.system != "sine") {
            config_error("unknown dynamics system '" + dyn.system + "'");
        }
        if (dyn.disturbance_kind != "example1" && dyn.disturbance_kind != "constant" &&
            dyn.disturbance_kind != "csv") {
            config_error("unknown disturbance kind '" + dyn.disturbance_kind + "'");
        }
        require(dyn.horizon >= 1, "config: dynamics horizon must be >= 1");
        if (dyn.system != "linear") {
            require(dyn.lambda >= 0.0 && dyn.lambda < 1.0,
                    "config: contraction lambda must be in [0, 1)");
            require(dyn.y0.size() == 1, "config: affine/sine systems are scalar");
        }
    } else {
        require(ipcheck.has_value(), "config: ipcheck section missing");
        require(!ipcheck->input.empty(), "config: ipcheck.input is required");
        IpQuery{ipcheck->epsilon, ipcheck->duration, ipcheck->start, ipcheck->target}.validate();
    }
}

namespace {

FeasibleSetXd parse_feasible_set(KvConfig& kv, const std::string& section, Index dim,
                                 const FeasibleSetXd& fallback) {
    const auto type = kv.maybe_string(section + ".type");
    if (!type) {
        return fallback;
    }
    auto broadcast = [dim](const VectorXd& v, const std::string& what) {
        if (v.size() == dim) {
            return v;
        }
        if (v.size() == 1) {
            return VectorXd(VectorXd::Constant(dim, v[0]));
        }
        config_error(what + " has dimension " + std::to_string(v.size()) + ", expected " +
                     std::to_string(dim) + " (or a single broadcast value)");
    };
    if (*type == "box") {
        const VectorXd lower = broadcast(kv.get_vector(section + ".lower"), section + ".lower");
        const VectorXd upper = broadcast(kv.get_vector(section + ".upper"), section + ".upper");
        return FeasibleSetXd::box(lower, upper);
    }
    if (*type == "ball") {
        const VectorXd center =
            broadcast(kv.get_vector(section + ".center"), section + ".center");
        return FeasibleSetXd::ball(center, kv.get_double(section + ".radius"));
    }
    config_error(section + ".type must be 'box' or 'ball'");
}

RbfFeatureMap parse_feature_map(KvConfig& kv, const std::string& section,
                                const RbfFeatureMap& fallback) {
    if (!kv.has(section + ".centers")) {
        return fallback;
    }
    RbfFeatureMap map;
    const VectorXd centers = kv.get_vector(section + ".centers");
    map.centers = centers;  // m x 1: scalar inputs in the key-value format
    map.scales = kv.get_vector(section + ".scales");
    map.validate();
    return map;
}

RegressionExperimentConfig parse_regress(KvConfig& kv) {
    RegressionExperimentConfig cfg;
    cfg.hypothesis_map = parse_feature_map(kv, "regress.hypothesis", cfg.hypothesis_map);
    cfg.target_map = parse_feature_map(kv, "regress.target", cfg.hypothesis_map);
    cfg.horizon = kv.get_index("regress.horizon", cfg.horizon);
    cfg.eta0 = kv.get_double("regress.eta0", cfg.eta0);
    cfg.paper_literal_gradient =
        kv.get_bool("regress.paper_literal_gradient", cfg.paper_literal_gradient);
    if (kv.has("regress.input_lower") || kv.has("regress.input_upper")) {
        cfg.input_lower = kv.get_vector("regress.input_lower");
        cfg.input_upper = kv.get_vector("regress.input_upper");
    }
    const Index m = cfg.hypothesis_map.count();
    cfg.feasible_set = parse_feasible_set(
        kv, "regress.feasible_set", m,
        FeasibleSetXd::box(VectorXd::Constant(m, -10.0), VectorXd::Constant(m, 10.0)));
    cfg.theta_star = kv.maybe_vector("regress.theta_star");
    cfg.theta_init = kv.maybe_vector("regress.theta_init");
    return cfg;
}

PendulumExperimentConfig parse_pendulum(KvConfig& kv) {
    PendulumExperimentConfig cfg;
    cfg.scenario = kv.maybe_string("pendulum.scenario").value_or(cfg.scenario);
    cfg.params.mass = kv.get_double("pendulum.mass", cfg.params.mass);
    cfg.params.length = kv.get_double("pendulum.length", cfg.params.length);
    cfg.params.gravity = kv.get_double("pendulum.gravity", cfg.params.gravity);
    cfg.params.friction = kv.get_double("pendulum.friction", cfg.params.friction);
    cfg.params.time_step = kv.get_double("pendulum.tau", cfg.params.time_step);
    cfg.params.horizon = kv.get_index("pendulum.horizon", cfg.params.horizon);

    if (kv.has("pendulum.mixture.weights")) {
        cfg.mix.weights = kv.get_vector("pendulum.mixture.weights");
        cfg.mix.centers = kv.get_vector("pendulum.mixture.centers");
        cfg.mix.scales = kv.get_vector("pendulum.mixture.scales");
    }
    cfg.mix.exponent_sign = kv.get_double("pendulum.exponent_sign", cfg.mix.exponent_sign);

    cfg.controller.kp = kv.get_double("pendulum.kp", cfg.controller.kp);
    cfg.controller.kd = kv.get_double("pendulum.kd", cfg.controller.kd);
    if (kv.has("pendulum.target")) {
        const VectorXd target = kv.get_vector("pendulum.target");
        if (target.size() != 2) {
            config_error("pendulum.target must have two entries");
        }
        cfg.controller.target = Vector2d(target[0], target[1]);
    }
    cfg.controller.eta0 = kv.get_double("pendulum.eta0", cfg.controller.eta0);
    const Index m = cfg.mix.weights.size();
    if (kv.has("pendulum.theta0")) {
        cfg.controller.theta0 = kv.get_vector("pendulum.theta0");
    } else {
        cfg.controller.theta0 = VectorXd::Zero(m);
    }
    cfg.controller.theta_set = parse_feasible_set(
        kv, "pendulum.theta_set", m,
        FeasibleSetXd::box(VectorXd::Constant(m, -20.0), VectorXd::Constant(m, 20.0)));
    return cfg;
}

DynamicsConfig parse_dynamics(KvConfig& kv) {
    DynamicsConfig cfg;
    cfg.system = kv.maybe_string("dynamics.system").value_or(cfg.system);
    cfg.horizon = kv.get_index("dynamics.horizon", cfg.horizon);
    cfg.tail_tol = kv.get_double("dynamics.tail_tol", cfg.tail_tol);
    if (cfg.system == "linear") {
        if (kv.has("dynamics.matrix")) {
            const Index dim = kv.get_index("dynamics.dim");
            const VectorXd entries = kv.get_vector("dynamics.matrix");
            if (entries.size() != dim * dim) {
                config_error("dynamics.matrix needs dim*dim row-major entries");
            }
            cfg.transition = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                            Eigen::Dynamic, Eigen::RowMajor>>(
                entries.data(), dim, dim);
            cfg.x0 = VectorXd::Zero(dim);
        }
        if (kv.has("dynamics.x0")) {
            cfg.x0 = kv.get_vector("dynamics.x0");
            if (cfg.x0.size() != cfg.transition.rows()) {
                config_error("dynamics.x0 dimension != matrix dimension");
            }
        }
    } else {
        cfg.lambda = kv.get_double("dynamics.lambda", cfg.lambda);
        if (cfg.system == "affine") {
            cfg.offset = kv.get_double("dynamics.offset", cfg.offset);
        }
        cfg.y0 = VectorXd::Constant(1, kv.get_double("dynamics.y0", 0.0));
    }

    cfg.disturbance_kind =
        kv.maybe_string("dynamics.disturbance.kind").value_or(cfg.disturbance_kind);
    cfg.scale = kv.get_double("dynamics.disturbance.scale", cfg.scale);
    cfg.bound = kv.get_double("dynamics.disturbance.bound", cfg.bound);
    cfg.input = kv.maybe_string("dynamics.disturbance.input").value_or("");
    const Index dim = cfg.state_dimension();
    if (kv.has("dynamics.disturbance.direction")) {
        cfg.direction = kv.get_vector("dynamics.disturbance.direction");
        if (cfg.direction.size() != dim) {
            config_error("dynamics.disturbance.direction dimension != state dimension");
        }
    } else {
        cfg.direction = VectorXd::Zero(dim);
        cfg.direction[0] = 1.0;
    }

    cfg.ip_epsilon = kv.get_double("dynamics.ip.epsilon", cfg.ip_epsilon);
    if (kv.has("dynamics.ip.durations")) {
        const VectorXd durations = kv.get_vector("dynamics.ip.durations");
        cfg.ip_durations.clear();
        for (Index i = 0; i < durations.size(); ++i) {
            cfg.ip_durations.push_back(static_cast<Index>(durations[i]));
        }
    }
    return cfg;
}

IpcheckConfig parse_ipcheck(KvConfig& kv) {
    IpcheckConfig cfg;
    cfg.input = kv.get_string("ipcheck.input");
    const bool has_point = kv.has("ipcheck.target");
    const bool has_interval = kv.has("ipcheck.target_interval");
    if (has_point && has_interval) {
        config_error("ipcheck: give either target or target_interval, not both");
    }
    if (has_interval) {
        cfg.target = IpTarget::interval(kv.get_double("ipcheck.target_interval"));
    } else if (has_point) {
        cfg.target = IpTarget::point(kv.get_double("ipcheck.target"));
    }
    cfg.epsilon = kv.get_double("ipcheck.epsilon", cfg.epsilon);
    cfg.duration = kv.get_index("ipcheck.duration", cfg.duration);
    cfg.start = kv.get_index("ipcheck.start", cfg.start);
    return cfg;
}

}  // namespace

ExperimentConfig experiment_config_from_kv(KvConfig& kv) {
    ExperimentConfig cfg;
    cfg.kind = kv.get_string("kind");
    if (kv.has("seed")) {
        cfg.seed = kv.get_u64("seed");
    }
    if (const auto formats = kv.maybe_string("formats")) {
        cfg.formats.clear();
        std::istringstream in(*formats);
        std::string token;
        while (in >> token) {
            cfg.formats.push_back(token);
        }
    }
    cfg.plot_grid = kv.get_index("plot_grid", cfg.plot_grid);

    if (cfg.kind == "regress") {
        cfg.regress = parse_regress(kv);
    } else if (cfg.kind == "pendulum") {
        cfg.pendulum = parse_pendulum(kv);
    } else if (cfg.kind == "dynamics") {
        cfg.dynamics = parse_dynamics(kv);
    } else if (cfg.kind == "ipcheck") {
        cfg.ipcheck = parse_ipcheck(kv);
    }
    kv.finish();
    cfg.validate();
    return cfg;
}

namespace {

using nlohmann::json;

json vector_to_json(const VectorXd& v) {
    json array = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        array.push_back(v[i]);
    }
    return array;
}

VectorXd vector_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) {
        config_error(what + ": expected an array");
    }
    VectorXd v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) {
        v[i] = j[static_cast<size_t>(i)].get<double>();
    }
    return v;
}

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) {
        config_error(what + ": expected a non-empty array of rows");
    }
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j[0].size());
    MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        if (static_cast<Index>(j[static_cast<size_t>(r)].size()) != cols) {
            config_error(what + ": ragged rows");
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = j[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
        }
    }
    return m;
}

json feasible_set_to_json(const FeasibleSetXd& set) {
    json j;
    if (set.is_box()) {
        j["type"] = "box";
        j["lower"] = vector_to_json(set.as_box().lower);
        j["upper"] = vector_to_json(set.as_box().upper);
    } else {
        j["type"] = "ball";
        j["center"] = vector_to_json(set.as_ball().center);
        j["radius"] = set.as_ball().radius;
    }
    return j;
}

FeasibleSetXd feasible_set_from_json(const json& j, const std::string& what) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "box") {
        return FeasibleSetXd::box(vector_from_json(j.at("lower"), what + ".lower"),
                                  vector_from_json(j.at("upper"), what + ".upper"));
    }
    if (type == "ball") {
        return FeasibleSetXd::ball(vector_from_json(j.at("center"), what + ".center"),
                                   j.at("radius").get<double>());
    }
    config_error(what + ".type must be 'box' or 'ball'");
}

json feature_map_to_json(const RbfFeatureMap& map) {
    json j;
    j["centers"] = matrix_to_json(map.centers);
    j["scales"] = vector_to_json(map.scales);
    return j;
}

RbfFeatureMap feature_map_from_json(const json& j, const std::string& what) {
    RbfFeatureMap map;
    map.centers = matrix_from_json(j.at("centers"), what + ".centers");
    map.scales = vector_from_json(j.at("scales"), what + ".scales");
    map.validate();
    return map;
}

json optional_vector_to_json(const std::optional<VectorXd>& v) {
    return v ? vector_to_json(*v) : json(nullptr);
}

std::optional<VectorXd> optional_vector_from_json(const json& j, const std::string& what) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return vector_from_json(j, what);
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& config) {
    json j;
    j["kind"] = config.kind;
    j["seed"] = config.seed ? json(*config.seed) : json(nullptr);
    j["formats"] = config.formats;
    j["plot_grid"] = config.plot_grid;
    if (config.regress) {
        const auto& r = *config.regress;
        json jr;
        jr["horizon"] = r.horizon;
        jr["eta0"] = r.eta0;
        jr["paper_literal_gradient"] = r.paper_literal_gradient;
        jr["input_lower"] = vector_to_json(r.input_lower);
        jr["input_upper"] = vector_to_json(r.input_upper);
        jr["hypothesis"] = feature_map_to_json(r.hypothesis_map);
        jr["target"] = feature_map_to_json(r.target_map);
        jr["feasible_set"] = feasible_set_to_json(r.feasible_set);
        jr["theta_star"] = optional_vector_to_json(r.theta_star);
        jr["theta_init"] = optional_vector_to_json(r.theta_init);
        j["regress"] = jr;
    }
    if (config.pendulum) {
        const auto& p = *config.pendulum;
        json jp;
        jp["scenario"] = p.scenario;
        jp["mass"] = p.params.mass;
        jp["length"] = p.params.length;
        jp["gravity"] = p.params.gravity;
        jp["friction"] = p.params.friction;
        jp["tau"] = p.params.time_step;
        jp["horizon"] = p.params.horizon;
        jp["mixture"] = {{"weights", vector_to_json(p.mix.weights)},
                         {"centers", vector_to_json(p.mix.centers)},
                         {"scales", vector_to_json(p.mix.scales)}};
        jp["exponent_sign"] = p.mix.exponent_sign;
        jp["kp"] = p.controller.kp;
        jp["kd"] = p.controller.kd;
        jp["target"] = vector_to_json(p.controller.target);
        jp["eta0"] = p.controller.eta0;
        jp["theta0"] = vector_to_json(p.controller.theta0);
        jp["theta_set"] = feasible_set_to_json(p.controller.theta_set);
        j["pendulum"] = jp;
    }
    if (config.dynamics) {
        const auto& d = *config.dynamics;
        json jd;
        jd["system"] = d.system;
        jd["horizon"] = d.horizon;
        jd["tail_tol"] = d.tail_tol;
        if (d.system == "linear") {
            jd["matrix"] = matrix_to_json(d.transition);
            jd["x0"] = vector_to_json(d.x0);
        } else {
            jd["lambda"] = d.lambda;
            if (d.system == "affine") {
                jd["offset"] = d.offset;
            }
            jd["y0"] = d.y0[0];
        }
        jd["disturbance"] = {{"kind", d.disturbance_kind},
                             {"scale", d.scale},
                             {"bound", d.bound},
                             {"input", d.input},
                             {"direction", vector_to_json(d.direction)}};
        jd["ip"] = {{"epsilon", d.ip_epsilon}, {"durations", d.ip_durations}};
        j["dynamics"] = jd;
    }
    if (config.ipcheck) {
        const auto& c = *config.ipcheck;
        json jc;
        jc["input"] = c.input;
        if (c.target.kind == IpTarget::Kind::Point) {
            jc["target"] = c.target.value;
            jc["target_interval"] = json(nullptr);
        } else {
            jc["target"] = json(nullptr);
            jc["target_interval"] = c.target.value;
        }
        jc["epsilon"] = c.epsilon;
        jc["duration"] = c.duration;
        jc["start"] = c.start;
        j["ipcheck"] = jc;
    }
    return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.kind = j.at("kind").get<std::string>();
    if (!j.at("seed").is_null()) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.formats = j.at("formats").get<std::vector<std::string>>();
    cfg.plot_grid = j.at("plot_grid").get<Index>();

    if (j.contains("regress")) {
        const auto& jr = j.at("regress");
        RegressionExperimentConfig r;
        r.horizon = jr.at("horizon").get<Index>();
        r.eta0 = jr.at("eta0").get<double>();
        r.paper_literal_gradient = jr.at("paper_literal_gradient").get<bool>();
        r.input_lower = vector_from_json(jr.at("input_lower"), "regress.input_lower");
        r.input_upper = vector_from_json(jr.at("input_upper"), "regress.input_upper");
        r.hypothesis_map = feature_map_from_json(jr.at("hypothesis"), "regress.hypothesis");
        r.target_map = feature_map_from_json(jr.at("target"), "regress.target");
        r.feasible_set = feasible_set_from_json(jr.at("feasible_set"), "regress.feasible_set");
        r.theta_star = optional_vector_from_json(jr.at("theta_star"), "regress.theta_star");
        r.theta_init = optional_vector_from_json(jr.at("theta_init"), "regress.theta_init");
        cfg.regress = std::move(r);
    }
    if (j.contains("pendulum")) {
        const auto& jp = j.at("pendulum");
        PendulumExperimentConfig p;
        p.scenario = jp.at("scenario").get<std::string>();
        p.params.mass = jp.at("mass").get<double>();
        p.params.length = jp.at("length").get<double>();
        p.params.gravity = jp.at("gravity").get<double>();
        p.params.friction = jp.at("friction").get<double>();
        p.params.time_step = jp.at("tau").get<double>();
        p.params.horizon = jp.at("horizon").get<Index>();
        p.mix.weights = vector_from_json(jp.at("mixture").at("weights"), "pendulum.mixture");
        p.mix.centers = vector_from_json(jp.at("mixture").at("centers"), "pendulum.mixture");
        p.mix.scales = vector_from_json(jp.at("mixture").at("scales"), "pendulum.mixture");
        p.mix.exponent_sign = jp.at("exponent_sign").get<double>();
        p.controller.kp = jp.at("kp").get<double>();
        p.controller.kd = jp.at("kd").get<double>();
        const VectorXd target = vector_from_json(jp.at("target"), "pendulum.target");
        require(target.size() == 2, "pendulum.target must have two entries");
        p.controller.target = Vector2d(target[0], target[1]);
        p.controller.eta0 = jp.at("eta0").get<double>();
        p.controller.theta0 = vector_from_json(jp.at("theta0"), "pendulum.theta0");
        p.controller.theta_set =
            feasible_set_from_json(jp.at("theta_set"), "pendulum.theta_set");
        p.controller.scenario = Scenario::GpAdaptive;
        cfg.pendulum = std::move(p);
    }
    if (j.contains("dynamics")) {
        const auto& jd = j.at("dynamics");
        DynamicsConfig d;
        d.system = jd.at("system").get<std::string>();
        d.horizon = jd.at("horizon").get<Index>();
        d.tail_tol = jd.at("tail_tol").get<double>();
        if (d.system == "linear") {
            d.transition = matrix_from_json(jd.at("matrix"), "dynamics.matrix");
            d.x0 = vector_from_json(jd.at("x0"), "dynamics.x0");
        } else {
            d.lambda = jd.at("lambda").get<double>();
            if (d.system == "affine") {
                d.offset = jd.at("offset").get<double>();
            }
            d.y0 = VectorXd::Constant(1, jd.at("y0").get<double>());
        }
        const auto& jdist = jd.at("disturbance");
        d.disturbance_kind = jdist.at("kind").get<std::string>();
        d.scale = jdist.at("scale").get<double>();
        d.bound = jdist.at("bound").get<double>();
        d.input = jdist.at("input").get<std::string>();
        d.direction = vector_from_json(jdist.at("direction"), "dynamics.disturbance.direction");
        d.ip_epsilon = jd.at("ip").at("epsilon").get<double>();
        d.ip_durations = jd.at("ip").at("durations").get<std::vector<Index>>();
        cfg.dynamics = std::move(d);
    }
    if (j.contains("ipcheck")) {
        const auto& jc = j.at("ipcheck");
        IpcheckConfig c;
        c.input = jc.at("input").get<std::string>();
        if (!jc.at("target").is_null()) {
            c.target = IpTarget::point(jc.at("target").get<double>());
        } else if (!jc.at("target_interval").is_null()) {
            c.target = IpTarget::interval(jc.at("target_interval").get<double>());
        }
        c.epsilon = jc.at("epsilon").get<double>();
        c.duration = jc.at("duration").get<Index>();
        c.start = jc.at("start").get<Index>();
        cfg.ipcheck = std::move(c);
    }
    cfg.validate();
    return cfg;
}

}  // namespace noregret
