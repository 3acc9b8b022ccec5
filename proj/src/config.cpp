#include "matterwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

namespace matterwave {

namespace {

using Kinds = unsigned;

constexpr Kinds bit(ScenarioKind k) { return 1u << static_cast<unsigned>(k); }
constexpr Kinds kAll = 0x7Fu;

constexpr Kinds kTimed = kAll & ~bit(ScenarioKind::rates_table);
constexpr Kinds kSampled = bit(ScenarioKind::single_decay) | bit(ScenarioKind::lattice_decay) |
                           bit(ScenarioKind::superradiance) | bit(ScenarioKind::hopping) |
                           bit(ScenarioKind::meanfield);
constexpr Kinds kSingle = bit(ScenarioKind::single_decay) | bit(ScenarioKind::steady_state_scan);

struct BadValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw BadValue("expected a number, got '" + t + "'");
    return v;
}

int to_int(const std::string& text)
{
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || v < -1000000000L || v > 1000000000L)
        throw BadValue("expected an integer, got '" + t + "'");
    return static_cast<int>(v);
}

bool to_bool(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw BadValue("expected true or false, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> to_doubles(const std::string& text)
{
    std::vector<double> out;
    for (const auto& s : split_list(text)) out.push_back(to_double(s));
    return out;
}

std::vector<int> to_ints(const std::string& text)
{
    std::vector<int> out;
    for (const auto& s : split_list(text)) out.push_back(to_int(s));
    return out;
}

Vec3 to_vec3(const std::string& text)
{
    const auto v = to_doubles(text);
    if (v.size() != 3) throw BadValue("expected three numbers");
    return {v[0], v[1], v[2]};
}

std::string fmt(double v)
{
    // Shortest text that reads back to the same double.
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

std::string fmt(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

std::string fmt(const Vec3& v) { return fmt(std::vector<double>{v[0], v[1], v[2]}); }
std::string fmt(bool b) { return b ? "true" : "false"; }

struct Entry {
    std::string section;  // "" for top-level keys
    std::string key;
    Kinds kinds;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::optional<std::string>(const ScenarioConfig&)> get;

    [[nodiscard]] std::string dotted() const { return section.empty() ? key : section + "." + key; }
};

#define MW_FIELD(sec, name, kinds, path, parse, show)                                                      \
    Entry                                                                                                  \
    {                                                                                                      \
        sec, #name, kinds, [](ScenarioConfig& c, const std::string& t) { c.path.name = parse(t); },        \
            [](const ScenarioConfig& c) -> std::optional<std::string> { return show(c.path.name); }        \
    }

#define MW_OPTIONAL(sec, name, kinds, path, parse)                                                         \
    Entry                                                                                                  \
    {                                                                                                      \
        sec, #name, kinds, [](ScenarioConfig& c, const std::string& t) { c.path.name = parse(t); },        \
            [](const ScenarioConfig& c) -> std::optional<std::string> {                                   \
                if (!c.path.name) return std::nullopt;                                                     \
                return fmt(*c.path.name);                                                                  \
            }                                                                                              \
    }

std::string as_string(const std::string& t) { return trim(t); }
std::string show_string(const std::string& s) { return s; }
std::string show_int(int v) { return std::to_string(v); }
std::string show_double(double v) { return fmt(v); }
std::string show_doubles(const std::vector<double>& v) { return fmt(v); }
std::string show_ints(const std::vector<int>& v) { return fmt(v); }
std::string show_bool(bool v) { return fmt(v); }
std::string show_vec3(const Vec3& v) { return fmt(v); }

const std::vector<Entry>& schema()
{
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back({"", "scenario", kAll,
                     [](ScenarioConfig& c, const std::string& t) {
                         const auto k = scenario_kind_from(trim(t));
                         if (!k) throw BadValue("unknown scenario kind '" + trim(t) + "'");
                         c.kind = *k;
                     },
                     [](const ScenarioConfig& c) -> std::optional<std::string> { return to_string(c.kind); }});
        e.push_back({"", "name", kAll, [](ScenarioConfig& c, const std::string& t) { c.name = trim(t); },
                     [](const ScenarioConfig& c) -> std::optional<std::string> { return c.name; }});
        e.push_back({"", "description", kAll,
                     [](ScenarioConfig& c, const std::string& t) { c.description = trim(t); },
                     [](const ScenarioConfig& c) -> std::optional<std::string> {
                         if (c.description.empty()) return std::nullopt;
                         return c.description;
                     }});

        e.push_back(MW_FIELD("model", rabi, kAll, model, to_double, show_double));
        e.push_back(MW_FIELD("model", trap, kAll, model, to_double, show_double));
        e.push_back(MW_FIELD("model", detuning, kAll, model, to_double, show_double));
        e.push_back(MW_OPTIONAL("model", detuning_alpha2, kAll, model, to_double));
        e.push_back(MW_OPTIONAL("model", xi, kAll, model, to_double));
        e.push_back(MW_FIELD("model", band, kAll, model, as_string, show_string));
        e.push_back(MW_FIELD("model", mass, kAll, model, to_double, show_double));
        e.push_back(MW_FIELD("model", spacing, kAll, model, to_double, show_double));
        e.push_back(MW_FIELD("model", laser_k, kAll, model, to_vec3, show_vec3));
        e.push_back(MW_OPTIONAL("model", laser_k_k0, kAll, model, to_vec3));
        e.push_back(MW_FIELD("model", dim, kAll, model, to_int, show_int));
        e.push_back(MW_FIELD("model", shape, kAll, model, to_ints, show_ints));
        e.push_back(MW_FIELD("model", periodic, kAll, model, to_bool, show_bool));

        e.push_back(MW_FIELD("run", T, kTimed, run, to_double, show_double));
        e.push_back(MW_FIELD("run", dt, kTimed, run, to_double, show_double));
        e.push_back(MW_FIELD("run", stride, kSampled, run, to_int, show_int));
        e.push_back(MW_FIELD("run", detunings_alpha2, kSingle, run, to_doubles, show_doubles));
        e.push_back(MW_FIELD("run", ratios, bit(ScenarioKind::steady_state_scan), run, to_doubles, show_doubles));
        e.push_back(MW_FIELD("run", xi_values, bit(ScenarioKind::superradiance) | bit(ScenarioKind::rates_table),
                             run, to_doubles, show_doubles));
        e.push_back(MW_FIELD("run", signs, bit(ScenarioKind::rates_table), run, to_doubles, show_doubles));
        e.push_back(MW_FIELD("run", xi_bracket, bit(ScenarioKind::superradiance), run, to_doubles, show_doubles));
        e.push_back(MW_FIELD("run", volterra, bit(ScenarioKind::steady_state_scan), run, to_bool, show_bool));
        e.push_back(MW_FIELD("run", richardson, bit(ScenarioKind::single_decay), run, to_bool, show_bool));
        e.push_back(MW_FIELD("run", diagonal_control, bit(ScenarioKind::superradiance), run, to_bool, show_bool));
        e.push_back(MW_FIELD("run", initial, bit(ScenarioKind::lattice_decay), run, as_string, show_string));
        e.push_back(MW_FIELD("run", initial_site, bit(ScenarioKind::lattice_decay) | bit(ScenarioKind::hopping),
                             run, to_int, show_int));
        e.push_back(MW_FIELD("run", n_max, bit(ScenarioKind::rates_table), run, to_int, show_int));
        e.push_back(MW_FIELD("run", y0_re, bit(ScenarioKind::meanfield), run, to_double, show_double));
        e.push_back(MW_FIELD("run", y0_im, bit(ScenarioKind::meanfield), run, to_double, show_double));
        e.push_back(MW_FIELD("run", z0, bit(ScenarioKind::meanfield), run, to_double, show_double));
        e.push_back(MW_FIELD("run", tail_fraction, bit(ScenarioKind::meanfield), run, to_double, show_double));
        e.push_back(MW_FIELD("run", plateau_fraction, kSingle, run, to_double, show_double));

        e.push_back(MW_FIELD("output", directory, kAll, output, as_string, show_string));
        e.push_back({"output", "formats", kAll,
                     [](ScenarioConfig& c, const std::string& t) {
                         c.output.csv = c.output.json = false;
                         for (const auto& f : split_list(t)) {
                             if (f == "csv") c.output.csv = true;
                             else if (f == "json") c.output.json = true;
                             else throw BadValue("unknown output format '" + f + "' (csv, json)");
                         }
                     },
                     [](const ScenarioConfig& c) -> std::optional<std::string> {
                         std::string s;
                         if (c.output.csv) s = "csv";
                         if (c.output.json) s += s.empty() ? "json" : ", json";
                         return s;
                     }});
        return e;
    }();
    return entries;
}

#undef MW_FIELD
#undef MW_OPTIONAL

const Entry* find_entry(const std::string& section, const std::string& key)
{
    for (const auto& e : schema())
        if (e.section == section && e.key == key) return &e;
    return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string suggestion(const std::string& section, const std::string& key)
{
    std::string best;
    std::size_t dist = 3;
    for (const auto& e : schema()) {
        if (e.section != section) continue;
        const std::size_t d = edit_distance(e.key, key);
        if (d < dist) {
            dist = d;
            best = e.key;
        }
    }
    return best.empty() ? std::string{} : " (did you mean '" + best + "'?)";
}

struct Issue {
    std::string key;  // dotted key the problem belongs to, for line lookup
    std::string message;
};

std::vector<Issue> check(const ScenarioConfig& c)
{
    std::vector<Issue> out;
    auto need = [&](bool ok, const std::string& key, const std::string& msg) {
        if (!ok) out.push_back({key, msg});
    };
    const ModelSpec& m = c.model;
    need(m.rabi > 0.0, "model.rabi", "model.rabi must be > 0");
    need(m.trap > 0.0, "model.trap", "model.trap must be > 0");
    need(m.mass > 0.0, "model.mass", "model.mass must be > 0");
    need(m.spacing > 0.0, "model.spacing", "model.spacing must be > 0");
    need(m.dim >= 1 && m.dim <= 3, "model.dim", "model.dim must be 1, 2 or 3");
    need(static_cast<int>(m.shape.size()) == m.dim, "model.shape", "model.shape needs one entry per dimension");
    for (int s : m.shape) need(s >= 1, "model.shape", "model.shape entries must be >= 1");
    need(m.band == "above" || m.band == "below", "model.band", "model.band must be 'above' or 'below'");
    const int choices = (m.detuning != 0.0) + m.detuning_alpha2.has_value() + m.xi.has_value();
    need(choices <= 1, "model.detuning", "set only one of model.detuning, model.detuning_alpha2, model.xi");
    if (m.xi) need(*m.xi > 0.0, "model.xi", "model.xi must be > 0");
    const bool laser_literal = m.laser_k != Vec3{0.0, 0.0, 0.0};
    need(!(laser_literal && m.laser_k_k0), "model.laser_k", "set only one of model.laser_k, model.laser_k_k0");

    long sites = 1;
    for (int s : m.shape) sites *= std::max(s, 1);
    const bool model_ok = out.empty();
    double detuning = 0.0;
    if (model_ok) {
        detuning = resolve_model(m).detuning;
        if (m.laser_k_k0) need(detuning != 0.0, "model.laser_k_k0", "model.laser_k_k0 needs a nonzero detuning");
    }

    const RunSpec& r = c.run;
    need(r.T >= 0.0, "run.T", "run.T must be >= 0");
    need(r.dt >= 0.0, "run.dt", "run.dt must be >= 0");
    need(r.stride >= 1, "run.stride", "run.stride must be >= 1");
    for (double v : r.ratios) need(v > 0.0 && v < 1.0, "run.ratios", "run.ratios entries must be in (0, 1)");
    for (double v : r.xi_values) need(v > 0.0, "run.xi_values", "run.xi_values entries must be > 0");
    for (double v : r.signs) need(v == 1.0 || v == -1.0, "run.signs", "run.signs entries must be 1 or -1");
    need(r.xi_bracket.size() == 2 && r.xi_bracket[0] > 0.0 && r.xi_bracket[1] > r.xi_bracket[0], "run.xi_bracket",
         "run.xi_bracket needs two increasing positive values");
    need(r.initial == "symmetric" || r.initial == "site", "run.initial", "run.initial must be 'symmetric' or 'site'");
    need(r.initial_site >= -1 && r.initial_site < sites, "run.initial_site", "run.initial_site out of range");
    need(r.n_max >= 1, "run.n_max", "run.n_max must be >= 1");
    need(std::hypot(r.y0_re, r.y0_im) <= 1.0, "run.y0_re", "|y0| must be <= 1");
    need(std::abs(r.z0) <= 1.0, "run.z0", "|z0| must be <= 1");
    need(r.tail_fraction > 0.0 && r.tail_fraction <= 1.0, "run.tail_fraction", "run.tail_fraction must be in (0, 1]");
    need(r.plateau_fraction > 0.0 && r.plateau_fraction <= 1.0, "run.plateau_fraction",
         "run.plateau_fraction must be in (0, 1]");
    need(!c.output.directory.empty(), "output.directory", "output.directory must not be empty");
    need(c.output.csv || c.output.json, "output.formats", "output.formats must name csv and/or json");
    need(!c.name.empty() && c.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") ==
                                std::string::npos,
         "name", "name must be non-empty and use only letters, digits, '_', '-', '.'");

    if (!model_ok) return out;
    switch (c.kind) {
    case ScenarioKind::rates_table:
        need(!r.xi_values.empty() || detuning != 0.0, "model.detuning",
             "rates_table needs a nonzero detuning (xi is undefined at detuning = 0) or run.xi_values");
        break;
    case ScenarioKind::lattice_decay:
        need(detuning > 0.0, "model.detuning", "lattice_decay needs a detuning above the band (> 0)");
        break;
    case ScenarioKind::superradiance:
        need(!r.xi_values.empty() || detuning > 0.0, "model.detuning",
             "superradiance needs a detuning above the band or run.xi_values");
        need(sites <= 256, "model.shape", "superradiance is limited to 256 sites");
        break;
    case ScenarioKind::hopping:
        need(detuning < 0.0, "model.detuning", "hopping needs a detuning below the band (< 0)");
        need(sites <= 4096, "model.shape", "hopping is limited to 4096 sites");
        break;
    default: break;
    }
    return out;
}

}  // namespace

std::string to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::single_decay: return "single_decay";
    case ScenarioKind::steady_state_scan: return "steady_state_scan";
    case ScenarioKind::lattice_decay: return "lattice_decay";
    case ScenarioKind::superradiance: return "superradiance";
    case ScenarioKind::hopping: return "hopping";
    case ScenarioKind::meanfield: return "meanfield";
    case ScenarioKind::rates_table: return "rates_table";
    }
    return "unknown";
}

const std::vector<ScenarioKind>& all_scenario_kinds()
{
    static const std::vector<ScenarioKind> kinds{ScenarioKind::single_decay,  ScenarioKind::steady_state_scan,
                                                 ScenarioKind::lattice_decay, ScenarioKind::superradiance,
                                                 ScenarioKind::hopping,       ScenarioKind::meanfield,
                                                 ScenarioKind::rates_table};
    return kinds;
}

std::optional<ScenarioKind> scenario_kind_from(const std::string& s)
{
    for (auto k : all_scenario_kinds())
        if (to_string(k) == s) return k;
    return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "invalid configuration:";
          for (const auto& i : issues) {
              os << "\n  ";
              if (i.line > 0) os << "line " << i.line << ": ";
              os << i.message;
          }
          return os.str();
      }()),
      issues_(std::move(issues))
{
}

ModelParams with_detuning_alpha2(ModelParams p, double d)
{
    p.detuning = d * alpha_squared(p);
    return p;
}

ModelParams with_xi(ModelParams p, double xi, double sign)
{
    p.detuning = (sign < 0.0 ? -1.0 : 1.0) * detuning_for_xi(xi, p.mass, p.spacing);
    return p;
}

ModelParams resolve_model(const ModelSpec& m)
{
    ModelParams p;
    p.rabi = m.rabi;
    p.trap = m.trap;
    p.mass = m.mass;
    p.spacing = m.spacing;
    p.dim = m.dim;
    p.shape = m.shape;
    p.detuning = m.detuning;
    if (m.detuning_alpha2) p = with_detuning_alpha2(p, *m.detuning_alpha2);
    if (m.xi) p = with_xi(p, *m.xi, m.band == "below" ? -1.0 : 1.0);
    p.laser_k = m.laser_k;
    if (m.laser_k_k0) {
        const double k0 = std::sqrt(2.0 * p.mass * std::abs(p.detuning));
        p.laser_k = {(*m.laser_k_k0)[0] * k0, (*m.laser_k_k0)[1] * k0, (*m.laser_k_k0)[2] * k0};
    }
    return p;
}

std::vector<ConfigIssue> validate_config(const ScenarioConfig& c)
{
    std::vector<ConfigIssue> out;
    for (auto& i : check(c)) out.push_back({0, i.message});
    return out;
}

std::vector<std::string> config_keys(ScenarioKind k)
{
    std::vector<std::string> out;
    for (const auto& e : schema())
        if (e.kinds & bit(k)) out.push_back(e.dotted());
    return out;
}

ScenarioConfig parse_config(const std::string& text)
{
    struct Line {
        int number;
        std::string section, key, value;
    };
    std::vector<ConfigIssue> issues;
    std::vector<Line> lines;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({number, "malformed section header '" + line + "'"});
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "run" && section != "output") {
                issues.push_back({number, "unknown section [" + section + "] (model, run, output)"});
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({number, "expected 'key = value', got '" + line + "'"});
            continue;
        }
        lines.push_back({number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }

    ScenarioConfig c;
    bool have_kind = false;
    for (const auto& l : lines)
        if (l.section.empty() && l.key == "scenario") {
            try {
                find_entry("", "scenario")->set(c, l.value);
                have_kind = true;
            } catch (const BadValue& e) {
                issues.push_back({l.number, std::string("scenario: ") + e.what()});
            }
        }
    if (!have_kind && std::none_of(lines.begin(), lines.end(), [](const Line& l) {
            return l.section.empty() && l.key == "scenario";
        }))
        issues.push_back({0, "missing required key 'scenario' (" + [] {
                                 std::string s;
                                 for (auto k : all_scenario_kinds()) s += (s.empty() ? "" : ", ") + to_string(k);
                                 return s;
                             }() + ")"});

    std::map<std::string, int> line_of;
    std::set<std::string> seen;
    for (const auto& l : lines) {
        const std::string where = l.section.empty() ? l.key : l.section + "." + l.key;
        if (!l.section.empty() && l.section != "model" && l.section != "run" && l.section != "output") continue;
        const Entry* e = find_entry(l.section, l.key);
        if (!e) {
            issues.push_back({l.number, "unknown key '" + l.key + "'" +
                                            (l.section.empty() ? std::string(" at top level") : " in [" + l.section + "]") +
                                            suggestion(l.section, l.key)});
            continue;
        }
        if (!seen.insert(where).second) {
            issues.push_back({l.number, "duplicate key '" + where + "'"});
            continue;
        }
        line_of[where] = l.number;
        if (where == "scenario") continue;
        if (have_kind && !(e->kinds & bit(c.kind))) {
            issues.push_back({l.number, "key '" + where + "' is not used by scenario kind " + to_string(c.kind)});
            continue;
        }
        try {
            e->set(c, l.value);
        } catch (const BadValue& err) {
            issues.push_back({l.number, where + ": " + err.what()});
        }
    }
    if (c.name.empty() && have_kind) c.name = to_string(c.kind);

    if (issues.empty())
        for (const auto& i : check(c)) {
            const auto it = line_of.find(i.key);
            issues.push_back({it == line_of.end() ? 0 : it->second, i.message});
        }
    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(),
                         [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }
    return c;
}

std::string serialize_config(const ScenarioConfig& c)
{
    std::ostringstream os;
    std::string section;
    for (const auto& e : schema()) {
        if (!(e.kinds & bit(c.kind))) continue;
        const auto v = e.get(c);
        if (!v) continue;
        if (e.section != section) {
            section = e.section;
            os << "\n[" << section << "]\n";
        }
        os << e.key << " = " << *v << "\n";
    }
    return os.str();
}

void set_config_value(ScenarioConfig& c, const std::string& dotted_key, const std::string& value)
{
    const auto dot = dotted_key.find('.');
    const std::string section = dot == std::string::npos ? std::string{} : dotted_key.substr(0, dot);
    const std::string key = dot == std::string::npos ? dotted_key : dotted_key.substr(dot + 1);
    const Entry* e = find_entry(section, key);
    if (!e) throw ConfigError({{0, "unknown key '" + dotted_key + "'" + suggestion(section, key)}});
    if (!(e->kinds & bit(c.kind)))
        throw ConfigError({{0, "key '" + dotted_key + "' is not used by scenario kind " + to_string(c.kind)}});
    ScenarioConfig next = c;
    try {
        e->set(next, value);
    } catch (const BadValue& err) {
        throw ConfigError({{0, dotted_key + ": " + err.what()}});
    }
    auto issues = validate_config(next);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    c = std::move(next);
}

}  // namespace matterwave
