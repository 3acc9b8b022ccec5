#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "matterwave/config.hpp"
#include "matterwave/scenario.hpp"

using namespace matterwave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("matterwave_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

const char* kSmallSuperradiance = "scenario = superradiance\nname = sr\n[model]\ndim = 1\nshape = 12\n"
                                  "[run]\nT = 1\nstride = 20\nxi_values = 0.3, 3.33\n";

}  // namespace

TEST_CASE("CSV layout")
{
    const auto c = parse_config("scenario = rates_table\n[model]\ndetuning = 0.5\n");
    ResultTable t;
    t.name = "empty";
    t.add_column("a", "first");
    t.add_column("b", "second");
    const auto lines = lines_of(format_csv(t, c));
    REQUIRE_FALSE(lines.empty());
    CHECK(lines.back() == "a,b");
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) CHECK(lines[i].rfind("# ", 0) == 0);
    CHECK(lines[0] == "# matterwave " + version_string());
    CHECK(lines[1] == "# conventions " + conventions_hash());
    CHECK(lines[2] == "# scenario rates_table");
    CHECK(lines[3] == "# table empty");

    t.add_row({1.0, -0.125});
    t.add_row({std::nan(""), 1e-300});
    const auto full = lines_of(format_csv(t, c));
    CHECK(full[full.size() - 2] == "1.00000000000e+00,-1.25000000000e-01");
    CHECK(full.back() == "nan,1.00000000000e-300");
    CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
    CHECK_THROWS_AS(t.add_column("c", "late"), std::logic_error);

    const std::string hash = conventions_hash();
    CHECK(hash.size() == 16);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("built-in scenarios parse")
{
    const auto& all = builtin_scenarios();
    for (const char* name : {"fig2", "fig2_inset", "fig3", "fig3_inset", "markov", "regime_a", "regime_c", "hopping",
                             "rates"}) {
        CAPTURE(name);
        const auto* b = find_builtin(name);
        REQUIRE(b != nullptr);
        CHECK(parse_config(b->text).name == name);
    }
    CHECK(all.size() == 9);
    CHECK(find_builtin("fig4") == nullptr);

    const auto fig2 = parse_config(find_builtin("fig2")->text);
    CHECK(fig2.run.detunings_alpha2 == std::vector<double>{-8.0, -1.0, -0.2, 0.2, 8.0});
    const auto fig3 = parse_config(find_builtin("fig3")->text);
    CHECK(fig3.run.xi_values == std::vector<double>{0.9, 1.25, 2.0, 3.33});
    CHECK(fig3.model.shape == std::vector<int>{100});
}

TEST_CASE("single_decay tables")
{
    const auto c = parse_config("scenario = single_decay\n[run]\nT = 2\nstride = 10\ndetunings_alpha2 = -1, 8\n");
    const auto r = run_scenario(c);
    REQUIRE(r.tables.size() == 1);
    const auto& t = r.tables[0];
    CHECK(t.columns == std::vector<std::string>{"t_alpha2", "P_volterra[D=-1]", "P_ideal[D=-1]", "P_volterra[D=8]",
                                                "P_ideal[D=8]"});
    CHECK(t.rows.front()[0] == 0.0);
    CHECK(t.rows.back()[0] == doctest::Approx(2.0).epsilon(1e-12));
    for (const auto& row : t.rows) {
        CHECK(std::abs(row[1] - row[2]) < 0.05);
        CHECK(std::abs(row[3] - row[4]) < 0.05);
    }
    CHECK(r.summary["detunings"][0]["pole_case"] == "real_pole");
    CHECK(r.summary["detunings"][1]["regime"] == "quasi_markov");
}

TEST_CASE("superradiance summary carries the initial slope sign per xi")
{
    const auto c = parse_config(kSmallSuperradiance);
    const auto r = run_scenario(c);
    const auto& per = r.summary["xi"];
    REQUIRE(per.size() == 2);
    CHECK(per[0]["xi"] == 0.3);
    CHECK(per[0]["slope_sign"] == -1);
    CHECK(per[1]["slope_sign"] == 1);
    CHECK(per[1]["rate_nonmonotone"] == true);
    CHECK(r.summary["diagonal_control_monotone"] == true);
    CHECK(r.summary["slope_sign_change_xi"].is_number());
    // Total and per-atom columns for each xi plus the control.
    CHECK(r.tables[0].columns.size() == 1 + 2 * 2 + 1);
    CHECK(r.tables[0].rows.front()[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("outputs are written and reruns are byte-identical")
{
    const fs::path a = scratch("a"), b = scratch("b");
    for (const std::string text :
         {std::string(kSmallSuperradiance),
          std::string("scenario = hopping\n[model]\nxi = 1\nband = below\nshape = 6\n[run]\nT = 20\n"),
          std::string("scenario = rates_table\n[model]\nspacing = 3\n[run]\nxi_values = 1\nsigns = 1, -1\nn_max = 2\n")}) {
        const auto c = parse_config(text);
        const auto pa = write_outputs(run_scenario(c), c, a);
        const auto pb = write_outputs(run_scenario(c), c, b);
        REQUIRE(pa.size() == pb.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            CAPTURE(pa[i]);
            CHECK(pa[i].filename() == pb[i].filename());
            CHECK(slurp(pa[i]) == slurp(pb[i]));
            CHECK_FALSE(slurp(pa[i]).empty());
        }
    }
    CHECK(fs::exists(a / "sr_emission_rate.csv"));
    CHECK(fs::exists(a / "sr_summary.json"));
    const auto j = nlohmann::json::parse(slurp(a / "sr_summary.json"));
    CHECK(j["scenario"] == "superradiance");
    CHECK(j["conventions"] == conventions_hash());

    auto c = parse_config("scenario = hopping\n[model]\nxi = 1\nband = below\nshape = 3\n[output]\nformats = json\n");
    CHECK(write_outputs(run_scenario(c), c, a).size() == 1);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("invalid configs are rejected by run_scenario")
{
    ScenarioConfig c;
    c.kind = ScenarioKind::rates_table;
    c.name = "x";
    CHECK_THROWS_AS((void)run_scenario(c), ConfigError);
}

#ifdef MATTERWAVE_CLI
TEST_CASE("command line exit codes")
{
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const std::string cli = MATTERWAVE_CLI;
    auto status = [&](const std::string& args) {
        const int s = std::system((cli + " " + args + " >" + (dir / "log").string() + " 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };

    CHECK(status("--version") == 0);
    CHECK(status("list-scenarios") == 0);
    CHECK(status("run " + write("ok.cfg", "scenario = hopping\n[model]\nxi = 1\nband = below\nshape = 4\n") +
                 " --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "hopping_hopping.csv"));
    CHECK(status("run " + write("bad.cfg", "scenario = hopping\n[model]\ndetunning = 1\n")) == 1);
    CHECK(slurp(dir / "log").find("line 3") != std::string::npos);
    CHECK(status("run no_such_scenario") == 1);
    // A time step far beyond the stable range of the collective integrator.
    CHECK(status("run " + write("unstable.cfg", "scenario = lattice_decay\n[model]\nxi = 1\nshape = 8\n[run]\ndt = 50\n") +
                 " --out " + (dir / "unstable").string()) == 2);

    CHECK(status("sweep " + dir.string() + "/ok.cfg --key run.T --values 5,10 --out " + (dir / "sweep").string()) == 0);
    CHECK(fs::exists(dir / "sweep" / "run.T=5" / "hopping_summary.json"));
    CHECK(fs::exists(dir / "sweep" / "run.T=10" / "hopping_summary.json"));
    CHECK(status("sweep " + dir.string() + "/ok.cfg --key run.TT --values 5") == 1);
    fs::remove_all(dir);
}
#endif
