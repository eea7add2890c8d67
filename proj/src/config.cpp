#include "bbmb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace bbmb {
namespace {

std::string join_lines(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  " + s;
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::optional<double> parse_plain(std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Reals, optionally written as a ratio "a/b".
std::optional<double> parse_real(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return parse_plain(s);
    const auto a = parse_plain(s.substr(0, slash));
    const auto b = parse_plain(s.substr(slash + 1));
    if (!a || !b || *b == 0.0) return std::nullopt;
    return *a / *b;
}

std::optional<std::size_t> parse_count(std::string_view s) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "experiment", "x_left", "x_right", "mu", "gamma", "kappa", "nu", "T", "M", "N",
        "snapshots", "energy", "posterior", "output", "initial", "mu_nu", "perturbation",
        "reference_spatial_errors", "reference_temporal_errors", "reference_spatial_orders",
        "reference_temporal_orders", "expected_spatial_order", "expected_temporal_order",
        "reference_energy", "error_tolerance", "order_tolerance", "spatial_order_tolerance",
        "temporal_order_tolerance", "magnitude_only", "energy_drift_tolerance",
        "plateau_tolerance", "gap_bound", "gap_linearity_tolerance"};
    return keys;
}

class Reader {
public:
    Reader(std::map<std::string, std::string> kv, std::vector<std::string>& errors)
        : kv_(std::move(kv)), errors_(errors) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    void real(const std::string& key, double& out) {
        if (!has(key)) return;
        if (auto v = parse_real(kv_.at(key)))
            out = *v;
        else
            errors_.push_back(key + ": not a number: '" + kv_.at(key) + "'");
    }

    void real(const std::string& key, std::optional<double>& out) {
        if (!has(key)) return;
        double v = 0.0;
        real(key, v);
        out = v;
    }

    void reals(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        out.clear();
        for (const auto& item : split_list(kv_.at(key))) {
            if (auto v = parse_real(item))
                out.push_back(*v);
            else
                errors_.push_back(key + ": not a number: '" + item + "'");
        }
    }

    void counts(const std::string& key, std::vector<std::size_t>& out) {
        if (!has(key)) return;
        out.clear();
        for (const auto& item : split_list(kv_.at(key))) {
            if (auto v = parse_count(item))
                out.push_back(*v);
            else
                errors_.push_back(key + ": not a non-negative integer: '" + item + "'");
        }
    }

    void flag(const std::string& key, bool& out) {
        if (!has(key)) return;
        const std::string& v = kv_.at(key);
        if (v == "on" || v == "true" || v == "1")
            out = true;
        else if (v == "off" || v == "false" || v == "0")
            out = false;
        else
            errors_.push_back(key + ": expected on/off, got '" + v + "'");
    }

    void text(const std::string& key, std::string& out) {
        if (has(key)) out = kv_.at(key);
    }

    void pairs(const std::string& key, std::vector<std::pair<double, double>>& out) {
        if (!has(key)) return;
        out.clear();
        for (const auto& item : split_list(kv_.at(key))) {
            const auto colon = item.find(':');
            std::optional<double> a, b;
            if (colon != std::string::npos) {
                a = parse_real(std::string_view(item).substr(0, colon));
                b = parse_real(std::string_view(item).substr(colon + 1));
            }
            if (a && b)
                out.emplace_back(*a, *b);
            else
                errors_.push_back(key + ": expected mu:nu, got '" + item + "'");
        }
    }

private:
    std::map<std::string, std::string> kv_;
    std::vector<std::string>& errors_;
};

void check_chain(const char* key, const std::vector<std::size_t>& v, std::size_t min,
                 std::vector<std::string>& errors) {
    if (v.empty()) {
        errors.push_back(std::string(key) + " missing");
        return;
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] < min)
            errors.push_back(std::string(key) + ": entries must be at least " + std::to_string(min));
        if (j > 0 && v[j] != 2 * v[j - 1])
            errors.push_back(std::string(key) + ": not a halving chain (" + std::to_string(v[j - 1]) +
                             " followed by " + std::to_string(v[j]) + ")");
    }
}

void apply_preset(ExperimentConfig& c) {
    switch (c.experiment) {
        case ExperimentKind::example1:
            c.x_left = 0.0, c.x_right = 2.0;
            c.mu = c.gamma = c.kappa = c.nu = 1.0;
            c.T = 1.0;
            break;
        case ExperimentKind::example2:
            c.x_left = -25.0, c.x_right = 25.0;
            c.mu = c.gamma = c.kappa = c.nu = 1.0;
            c.T = 1.0;
            break;
        case ExperimentKind::example3:
            c.x_left = -50.0, c.x_right = 50.0;
            c.mu = c.gamma = c.kappa = c.nu = 1.0;
            c.T = 1.0;
            break;
        case ExperimentKind::custom:
            break;
    }
}

std::optional<std::function<double(double)>> custom_initial(const std::string& shape, double x_left,
                                                           double x_right) {
    const auto parts = split_list(shape);
    if (parts.size() != 3) return std::nullopt;
    const auto amp = parse_real(parts[1]);
    const auto arg = parse_real(parts[2]);
    if (!amp || !arg) return std::nullopt;
    const double a = *amp, w = *arg;
    const double mid = 0.5 * (x_left + x_right);
    const double L = x_right - x_left;
    if (parts[0] == "sech2" && w > 0.0)
        return [=](double x) {
            const double c = std::cosh((x - mid) / w);
            return a / (c * c);
        };
    if (parts[0] == "sine")
        return [=](double x) { return a * std::sin(2.0 * std::numbers::pi * w * (x - x_left) / L); };
    return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join_lines(violations)), violations_(std::move(violations)) {}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::example1: return "example1";
        case ExperimentKind::example2: return "example2";
        case ExperimentKind::example3: return "example3";
        case ExperimentKind::custom: return "custom";
    }
    return "custom";
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::string> errors;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (!known_keys().count(key)) {
            errors.push_back("unknown key '" + key + "'");
            continue;
        }
        if (!kv.emplace(key, value).second) errors.push_back("duplicate key '" + key + "'");
    }

    ExperimentConfig c;
    if (!kv.count("experiment")) {
        errors.push_back("experiment missing");
    } else {
        const std::string& e = kv.at("experiment");
        if (e == "example1") c.experiment = ExperimentKind::example1;
        else if (e == "example2") c.experiment = ExperimentKind::example2;
        else if (e == "example3") c.experiment = ExperimentKind::example3;
        else if (e == "custom") c.experiment = ExperimentKind::custom;
        else errors.push_back("experiment: unknown value '" + e + "'");
    }
    apply_preset(c);

    Reader r(std::move(kv), errors);
    r.real("x_left", c.x_left);
    r.real("x_right", c.x_right);
    r.real("mu", c.mu);
    r.real("gamma", c.gamma);
    r.real("kappa", c.kappa);
    r.real("nu", c.nu);
    r.real("T", c.T);
    r.counts("M", c.M);
    r.counts("N", c.N);
    r.reals("snapshots", c.snapshots);
    r.flag("energy", c.energy);
    r.flag("posterior", c.posterior);
    r.text("output", c.output_dir);
    r.text("initial", c.initial);
    r.pairs("mu_nu", c.mu_nu);
    r.real("perturbation", c.perturbation);
    r.reals("reference_spatial_errors", c.reference_spatial_errors);
    r.reals("reference_temporal_errors", c.reference_temporal_errors);
    r.reals("reference_spatial_orders", c.reference_spatial_orders);
    r.reals("reference_temporal_orders", c.reference_temporal_orders);
    r.real("expected_spatial_order", c.expected_spatial_order);
    r.real("expected_temporal_order", c.expected_temporal_order);
    r.reals("reference_energy", c.reference_energy);
    r.real("error_tolerance", c.error_tolerance);
    double order_tol = 0.25;
    r.real("order_tolerance", order_tol);
    c.spatial_order_tolerance = c.temporal_order_tolerance = order_tol;
    r.real("spatial_order_tolerance", c.spatial_order_tolerance);
    r.real("temporal_order_tolerance", c.temporal_order_tolerance);
    r.flag("magnitude_only", c.magnitude_only);
    r.real("energy_drift_tolerance", c.energy_drift_tolerance);
    r.real("plateau_tolerance", c.plateau_tolerance);
    r.real("gap_bound", c.gap_bound);
    r.real("gap_linearity_tolerance", c.gap_linearity_tolerance);

    if (c.experiment == ExperimentKind::custom) {
        for (const char* key : {"x_left", "x_right"})
            if (!r.has(key)) errors.push_back(std::string(key) + " missing (required for custom)");
        if (!r.has("initial"))
            errors.push_back("initial missing (required for custom)");
        else if (!custom_initial(c.initial, c.x_left, c.x_right))
            errors.push_back("initial: expected 'sech2 <amplitude> <width>' or 'sine <amplitude> <wavenumber>'");
    }
    if (!(c.x_right > c.x_left)) errors.push_back("domain: x_left must be less than x_right");
    if (!(c.mu > 0.0)) errors.push_back("mu must be positive");
    if (c.gamma < 0.0) errors.push_back("gamma must be non-negative");
    if (!(c.T > 0.0)) errors.push_back("T must be positive");
    check_chain("M", c.M, kMinNodes, errors);
    check_chain("N", c.N, 2, errors);
    for (double t : c.snapshots)
        if (t < 0.0 || t > c.T) errors.push_back("snapshots: time " + std::to_string(t) + " outside [0, T]");
    for (const auto& [mu, nu] : c.mu_nu)
        if (!(mu > 0.0)) errors.push_back("mu_nu: mu must be positive");
    if (!c.reference_energy.empty() && c.reference_energy.size() != std::max<std::size_t>(1, c.mu_nu.size()))
        errors.push_back("reference_energy: need one value per mu_nu pair");
    if (c.perturbation < 0.0) errors.push_back("perturbation must be non-negative");
    for (double tol : {c.error_tolerance, c.spatial_order_tolerance, c.temporal_order_tolerance,
                       c.energy_drift_tolerance, c.plateau_tolerance, c.gap_bound,
                       c.gap_linearity_tolerance})
        if (!(tol > 0.0)) {
            errors.push_back("tolerances must be positive");
            break;
        }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Problem ExperimentConfig::problem() const { return problem(mu, nu); }

Problem ExperimentConfig::problem(double mu_override, double nu_override) const {
    Problem p;
    switch (experiment) {
        case ExperimentKind::example1:
            p = manufactured_problem(mu_override, gamma, kappa, nu_override);
            break;
        case ExperimentKind::example2:
            p = soliton_problem(mu_override, nu_override);
            break;
        case ExperimentKind::example3:
            p = double_well_problem();
            break;
        case ExperimentKind::custom:
            p.name = "custom";
            p.initial = *custom_initial(initial, x_left, x_right);
            break;
    }
    p.x_left = x_left;
    p.x_right = x_right;
    p.params.mu = mu_override;
    p.params.gamma = gamma;
    p.params.kappa = kappa;
    p.params.nu = nu_override;
    return p;
}

}  // namespace bbmb
