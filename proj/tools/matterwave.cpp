#include <cctype>
#include <functional>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "matterwave/config.hpp"
#include "matterwave/params.hpp"
#include "matterwave/scenario.hpp"

namespace fs = std::filesystem;
using namespace matterwave;

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

// A path to a file, or the name of a built-in scenario.
std::string load_text(const std::string& source)
{
    if (fs::is_regular_file(source)) {
        std::ifstream in(source, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        if (!in && !in.eof()) throw std::runtime_error("cannot read " + source);
        return os.str();
    }
    if (const auto* b = find_builtin(source)) return b->text;
    throw ConfigError({{0, "'" + source + "' is neither a file nor a built-in scenario (see list-scenarios)"}});
}

void report(const std::vector<fs::path>& written)
{
    for (const auto& p : written) std::cout << p.string() << "\n";
}

int guarded(const std::function<void()>& body)
{
    try {
        body();
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigFailure;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigFailure;
    }
}

std::string dir_label(const std::string& value)
{
    std::string s;
    for (char ch : value) s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Matter-wave emission from lattice-trapped atoms"};
    app.set_version_flag("--version", "matterwave " + version_string() + " (conventions " + conventions_hash() + ")");
    app.require_subcommand(1);

    std::string source, out_dir;
    auto* run = app.add_subcommand("run", "Run one scenario file or built-in scenario");
    run->add_option("config", source, "scenario file or built-in name")->required();
    run->add_option("--out", out_dir, "output directory (default: output.directory of the config)");

    std::string key;
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "Run a scenario once per value of one key");
    sweep->add_option("config", source, "scenario file or built-in name")->required();
    sweep->add_option("--key", key, "dotted key, e.g. model.trap or run.T")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", out_dir, "parent output directory");

    bool show_text = false;
    auto* list = app.add_subcommand("list-scenarios", "List the built-in scenarios");
    list->add_flag("--show", show_text, "print the scenario files too");

    CLI11_PARSE(app, argc, argv);

    if (*list) {
        for (const auto& b : builtin_scenarios()) {
            std::string description;
            try {
                description = parse_config(b.text).description;
            } catch (const ConfigError&) {
            }
            std::cout << b.name << (description.empty() ? "" : "  " + description) << "\n";
            if (show_text) std::cout << b.text << "\n";
        }
        return kOk;
    }

    if (*run)
        return guarded([&] {
            const ScenarioConfig c = parse_config(load_text(source));
            const ScenarioResult r = run_scenario(c);
            report(write_outputs(r, c, out_dir.empty() ? fs::path(c.output.directory) : fs::path(out_dir)));
        });

    return guarded([&] {
        const ScenarioConfig base = parse_config(load_text(source));
        std::vector<ScenarioConfig> configs;
        for (const auto& v : values) {
            ScenarioConfig c = base;
            set_config_value(c, key, v);
            configs.push_back(std::move(c));
        }
        const fs::path parent = out_dir.empty() ? fs::path(base.output.directory) : fs::path(out_dir);
        std::vector<std::future<ScenarioResult>> runs;
        for (const auto& c : configs) runs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
        // Collect every result before writing so that one failure leaves no partial sweep.
        std::vector<ScenarioResult> results;
        for (auto& f : runs) results.push_back(f.get());
        for (std::size_t i = 0; i < configs.size(); ++i)
            report(write_outputs(results[i], configs[i], parent / (key + "=" + dir_label(values[i]))));
    });
}
