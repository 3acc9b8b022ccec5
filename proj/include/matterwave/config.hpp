#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matterwave/params.hpp"

namespace matterwave {

enum class ScenarioKind { single_decay, steady_state_scan, lattice_decay, superradiance, hopping, meanfield, rates_table };

[[nodiscard]] std::string to_string(ScenarioKind k);
[[nodiscard]] std::optional<ScenarioKind> scenario_kind_from(const std::string& s);
[[nodiscard]] const std::vector<ScenarioKind>& all_scenario_kinds();

/// Model block. Exactly one of detuning / detuning_alpha2 / xi picks the detuning.
struct ModelSpec {
    double rabi = 1.0;
    double trap = 50.0;
    double detuning = 0.0;
    std::optional<double> detuning_alpha2;  // detuning in units of alpha^2
    std::optional<double> xi;               // detuning from xi, sign from `band`
    std::string band = "above";             // above | below (only with xi)
    double mass = 1.0;
    double spacing = 1.0;
    Vec3 laser_k{0.0, 0.0, 0.0};
    std::optional<Vec3> laser_k_k0;  // laser_k in units of k0
    int dim = 1;
    std::vector<int> shape{1};
    bool periodic = false;

    bool operator==(const ModelSpec&) const = default;
};

/// Run block; which keys apply depends on the scenario kind (see docs/formats.md).
struct RunSpec {
    double T = 0.0;   // 0 = kind default; units depend on the kind
    double dt = 0.0;  // 0 = automatic
    int stride = 1;
    std::vector<double> detunings_alpha2;
    std::vector<double> ratios;  // rabi / trap
    std::vector<double> xi_values;
    std::vector<double> signs;   // rates_table: +1 above, -1 below the band
    std::vector<double> xi_bracket{0.5, 1.5};
    bool volterra = true;
    bool richardson = true;
    bool diagonal_control = true;
    std::string initial = "symmetric";  // lattice_decay: symmetric | site
    int initial_site = -1;              // -1 = central site
    int n_max = 8;
    double y0_re = 1e-6;
    double y0_im = 0.0;
    double z0 = 1.0;
    double tail_fraction = 0.25;
    double plateau_fraction = 0.25;

    bool operator==(const RunSpec&) const = default;
};

struct OutputSpec {
    std::string directory = ".";
    bool csv = true;
    bool json = true;

    bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::single_decay;
    std::string name;         // file prefix; defaults to the kind
    std::string description;
    ModelSpec model;
    RunSpec run;
    OutputSpec output;

    bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigIssue {
    int line = 0;  // 0 when not tied to a line
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    [[nodiscard]] const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Parses and validates the sectioned key = value format. Collects every problem
/// before throwing ConfigError.
[[nodiscard]] ScenarioConfig parse_config(const std::string& text);

/// Canonical text form: every key that applies to the kind, doubles in shortest round-trip form.
[[nodiscard]] std::string serialize_config(const ScenarioConfig& c);

/// Sets "section.key" (or a top-level key) from its text form, then revalidates.
void set_config_value(ScenarioConfig& c, const std::string& dotted_key, const std::string& value);

/// Validation problems (empty when valid); parse_config already applies these.
[[nodiscard]] std::vector<ConfigIssue> validate_config(const ScenarioConfig& c);

/// ModelParams with the detuning and laser wave vector resolved.
[[nodiscard]] ModelParams resolve_model(const ModelSpec& m);
/// Detuning set to d alpha^2.
[[nodiscard]] ModelParams with_detuning_alpha2(ModelParams p, double d);
/// Detuning with |detuning| fixed by xi and the given sign.
[[nodiscard]] ModelParams with_xi(ModelParams p, double xi, double sign);

/// Keys accepted for a kind, as "section.key", in canonical order.
[[nodiscard]] std::vector<std::string> config_keys(ScenarioKind k);

}  // namespace matterwave
