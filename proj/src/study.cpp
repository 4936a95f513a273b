#include "hdgoc/study.hpp"

#include "hdgoc/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hdgoc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': '" + value + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for '" + key + "': '" + value + "'");
    }
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

} // namespace

void StudyConfig::validate() const
{
    (void)make_problem(problem, 1.0);
    if (k < 0 || k > kMaxStudyDegree) {
        throw ConfigError("k must be in [0, " + std::to_string(kMaxStudyDegree) + "], got " + std::to_string(k));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma must be positive");
    }
    if (!std::isfinite(tau2)) {
        throw ConfigError("tau2 must be finite");
    }
    if (levels.empty()) {
        throw ConfigError("at least one level is required");
    }
    if (levels.front() == 0) {
        throw ConfigError("levels must be positive");
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i] <= levels[i - 1]) {
            throw ConfigError("levels must be strictly increasing");
        }
        const std::size_t ratio = levels[i] / levels.front();
        if (levels[i] % levels.front() != 0 || (ratio & (ratio - 1)) != 0) {
            throw ConfigError("level " + std::to_string(levels[i]) + " is not a power-of-two multiple of " +
                              std::to_string(levels.front()));
        }
    }
}

void apply_setting(StudyConfig& config, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "problem") {
        config.problem = value;
    } else if (key == "k") {
        config.k = static_cast<int>(parse_integer(key, value));
    } else if (key == "levels") {
        config.levels.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const long long n = parse_integer(key, trim(item));
            if (n <= 0) {
                throw ConfigError("levels must be positive");
            }
            config.levels.push_back(static_cast<std::size_t>(n));
        }
    } else if (key == "gamma") {
        config.gamma = parse_double(key, value);
    } else if (key == "tau2") {
        config.tau2 = parse_double(key, value);
    } else if (key == "output_format") {
        if (value == "csv") {
            config.output_format = OutputFormat::Csv;
        } else if (value == "markdown") {
            config.output_format = OutputFormat::Markdown;
        } else {
            throw ConfigError("output_format must be csv or markdown, got '" + value + "'");
        }
    } else if (key == "output_path") {
        config.output_path = value.empty() ? std::nullopt : std::optional<std::string>(value);
    } else if (key == "seed") {
        const long long s = parse_integer(key, value);
        if (s < 0) {
            throw ConfigError("seed must be non-negative");
        }
        config.seed = static_cast<std::uint64_t>(s);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_text(StudyConfig& config, const std::string& text)
{
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

void apply_config_file(StudyConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str());
}

LevelResult run_level(const StudyConfig& config, std::size_t n)
{
    const ProblemData problem = make_problem(config.problem, config.gamma);
    const Mesh mesh = build_uniform(n);
    const Discretization disc(mesh, problem, config.k, StabilizationConfig::constant(config.tau2));
    disc.check_stabilization();
    const DiscreteSolution sol = solve(disc);

    LevelResult r;
    r.n = n;
    r.h = mesh.h;
    for (std::size_t v = 0; v < kAllVariables.size(); ++v) {
        r.errors[v] = l2_error(sol, problem, kAllVariables[v]);
    }
    r.cost = compute_cost(sol, problem);
    r.trace_dofs = 2 * disc.trace_size();
    return r;
}

ConvergenceReport run_study(const StudyConfig& config, const LevelCallback& on_level)
{
    config.validate();
    ConvergenceReport report;
    report.problem = config.problem;
    report.k = config.k;
    report.gamma = config.gamma;
    report.tau2 = config.tau2;

    for (std::size_t n : config.levels) {
        const std::string where = "level n=" + std::to_string(n) + ", k=" + std::to_string(config.k) + ": ";
        LevelResult r;
        try {
            r = run_level(config, n);
        } catch (const StabilizationInvalid& e) {
            throw StabilizationInvalid(where + e.what());
        } catch (const SolverFailure& e) {
            throw SolverFailure(where + e.what(), e.residual());
        } catch (const LocalSingularity& e) {
            throw SolverFailure(where + e.what(), std::nan(""));
        }
        report.levels.push_back(r.n);
        report.h.push_back(r.h);
        report.errors.push_back(r.errors);
        if (on_level) {
            on_level(r);
        }
    }
    report.finalize_rates();
    return report;
}

std::string format_csv(const ConvergenceReport& report)
{
    std::string out = "level,h,err_q,err_p,err_y,err_z,err_u,rate_q,rate_p,rate_y,rate_z,rate_u\n";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        out += std::to_string(report.levels[i]);
        out += ',' + sci(report.h[i]);
        for (double e : report.errors[i]) {
            out += ',' + sci(e);
        }
        for (const auto& r : report.rates[i]) {
            out += ',';
            if (r) {
                out += sci(*r);
            }
        }
        out += '\n';
    }
    return out;
}

std::string format_markdown(const ConvergenceReport& report)
{
    static constexpr std::array<const char*, 5> labels{"‖q−q_h‖", "‖p−p_h‖", "‖y−y_h‖", "‖z−z_h‖", "‖u−u_h‖"};
    std::ostringstream out;
    out << "Problem " << report.problem << ", k = " << report.k << ", γ = " << report.gamma
        << ", τ₂ = " << report.tau2 << "\n\n";
    out << "| h/√2 |";
    for (std::size_t n : report.levels) {
        out << " 1/" << n << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    char buf[32];
    for (std::size_t v = 0; v < labels.size(); ++v) {
        out << "| " << labels[v] << " |";
        for (const auto& e : report.errors) {
            std::snprintf(buf, sizeof buf, "%.4e", e[v]);
            out << ' ' << buf << " |";
        }
        out << "\n| order |";
        for (const auto& r : report.rates) {
            if (r[v]) {
                std::snprintf(buf, sizeof buf, "%.2f", *r[v]);
                out << ' ' << buf << " |";
            } else {
                out << " - |";
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace hdgoc
