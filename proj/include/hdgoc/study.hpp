#pragma once

#include "hdgoc/analysis.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hdgoc {

enum class OutputFormat { Csv, Markdown };

struct StudyConfig {
    std::string problem{"example1"};
    int k{1};
    std::vector<std::size_t> levels{8, 16, 32, 64};
    double gamma{1.0};
    double tau2{1.0};
    OutputFormat output_format{OutputFormat::Csv};
    std::optional<std::string> output_path;
    std::uint64_t seed{12345};

    /// Throws ConfigError: levels must be strictly increasing power-of-two multiples
    /// of the first, 0 <= k <= 4, gamma > 0, problem known.
    void validate() const;
};

inline constexpr int kMaxStudyDegree = 4;

/// Applies one key=value setting (keys as in StudyConfig; levels comma separated).
void apply_setting(StudyConfig& config, const std::string& key, const std::string& value);

/// Flat key=value text; blank lines and '#' comments ignored.
void apply_config_text(StudyConfig& config, const std::string& text);
void apply_config_file(StudyConfig& config, const std::string& path);

/// Result of solving at a single mesh level.
struct LevelResult {
    std::size_t n{0};
    double h{0.0};
    std::array<double, 5> errors{};
    double cost{0.0};
    std::size_t trace_dofs{0};
};

[[nodiscard]] LevelResult run_level(const StudyConfig& config, std::size_t n);

using LevelCallback = std::function<void(const LevelResult&)>;

/// Solves every level in order and fills errors and rates. Numerical errors are
/// rethrown with the level and degree prepended.
[[nodiscard]] ConvergenceReport run_study(const StudyConfig& config, const LevelCallback& on_level = {});

/// Header: level,h,err_q,err_p,err_y,err_z,err_u,rate_q,rate_p,rate_y,rate_z,rate_u
[[nodiscard]] std::string format_csv(const ConvergenceReport& report);
[[nodiscard]] std::string format_markdown(const ConvergenceReport& report);

} // namespace hdgoc
