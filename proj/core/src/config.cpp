#include "fraclab/config.hpp"

#include "fraclab/errors.hpp"
#include "fraclab/spectral.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fraclab {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Classic edit distance, used only for "did you mean" suggestions.
int edit_distance(const std::string& a, const std::string& b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<int> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= m; ++i) {
        int prev = row[0];
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            const int cur = row[j];
            const int sub = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
            prev = cur;
        }
    }
    return row[n];
}

std::string nearest(const std::string& word,
                    const std::vector<std::string>& candidates) {
    std::string best;
    int best_d = 1 << 30;
    for (const std::string& c : candidates) {
        const int d = edit_distance(word, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

struct SectionGrammar {
    std::string name;
    std::vector<std::string> keys;
};

const std::vector<SectionGrammar>& grammar() {
    static const std::vector<SectionGrammar> g = {
        {"domain", {"dim", "extent_x", "extent_y", "nx", "ny"}},
        {"coefficient", {"family", "value", "theta", "eig1", "eig2"}},
        {"fractional", {"s"}},
        {"solver", {"delta", "mu", "dt_max", "t_end"}},
        {"initial",
         {"family", "box_lo_x", "box_lo_y", "box_hi_x", "box_hi_y",
          "center_x", "center_y", "radius", "amplitude", "seed"}},
        {"probes",
         {"epsilon", "taus", "cutoffs", "snapshot_dt", "inequality_probes",
          "seed"}},
        {"output", {"dir"}},
    };
    return g;
}

const SectionGrammar* find_section(const std::string& name) {
    for (const SectionGrammar& s : grammar())
        if (s.name == name) return &s;
    return nullptr;
}

class Violations {
  public:
    void add(int line, const std::string& message) {
        items_.push_back("line " + std::to_string(line) + ": " + message);
    }
    void add(const std::string& message) { items_.push_back(message); }
    bool empty() const { return items_.empty(); }
    void raise_if_any() const {
        if (items_.empty()) return;
        std::string joined = "configuration rejected with " +
                             std::to_string(items_.size()) +
                             (items_.size() == 1 ? " violation:" : " violations:");
        for (const std::string& item : items_) joined += "\n  - " + item;
        throw ConfigError(joined);
    }

  private:
    std::vector<std::string> items_;
};

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_int(const std::string& text, long long& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(t.c_str(), &end, 10);
    return end == t.c_str() + t.size();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

struct Entry {
    int line = 0;
    std::string value;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

SectionMap tokenize(const std::string& text, Violations& bad) {
    SectionMap out;
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    std::vector<std::string> section_names;
    for (const SectionGrammar& s : grammar()) section_names.push_back(s.name);

    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                bad.add(line_no, "malformed section header '" + line + "'");
                continue;
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!find_section(name)) {
                bad.add(line_no, "unknown section [" + name +
                                     "]; did you mean [" +
                                     nearest(name, section_names) + "]?");
                section.clear();
                continue;
            }
            section = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            bad.add(line_no, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            bad.add(line_no, "key '" + key + "' appears before any section");
            continue;
        }
        const SectionGrammar* sec = find_section(section);
        if (std::find(sec->keys.begin(), sec->keys.end(), key) ==
            sec->keys.end()) {
            bad.add(line_no, "unknown key '" + key + "' in [" + section +
                                 "]; did you mean '" +
                                 nearest(key, sec->keys) + "'?");
            continue;
        }
        auto& slot = out[section][key];
        if (slot.line != 0) {
            bad.add(line_no, "duplicate key '" + key + "' in [" + section +
                                 "] (first set on line " +
                                 std::to_string(slot.line) + ")");
            continue;
        }
        slot = Entry{line_no, value};
    }
    return out;
}

class Reader {
  public:
    Reader(const SectionMap& map, Violations& bad) : map_(map), bad_(bad) {}

    void number(const char* section, const char* key, double& out) {
        const Entry* e = entry(section, key);
        if (!e) return;
        double v = 0.0;
        if (!parse_double(e->value, v))
            bad_.add(e->line, std::string(section) + "." + key +
                                  ": expected a number, got '" + e->value +
                                  "'");
        else
            out = v;
    }

    void integer(const char* section, const char* key, int& out) {
        const Entry* e = entry(section, key);
        if (!e) return;
        long long v = 0;
        if (!parse_int(e->value, v))
            bad_.add(e->line, std::string(section) + "." + key +
                                  ": expected an integer, got '" + e->value +
                                  "'");
        else
            out = static_cast<int>(v);
    }

    void unsigned64(const char* section, const char* key, std::uint64_t& out) {
        const Entry* e = entry(section, key);
        if (!e) return;
        long long v = 0;
        if (!parse_int(e->value, v) || v < 0)
            bad_.add(e->line, std::string(section) + "." + key +
                                  ": expected a nonnegative integer, got '" +
                                  e->value + "'");
        else
            out = static_cast<std::uint64_t>(v);
    }

    void word(const char* section, const char* key, std::string& out) {
        const Entry* e = entry(section, key);
        if (e) out = e->value;
    }

    void number_list(const char* section, const char* key,
                     std::vector<double>& out) {
        const Entry* e = entry(section, key);
        if (!e) return;
        std::vector<double> parsed;
        for (const std::string& part : split_list(e->value)) {
            double v = 0.0;
            if (!parse_double(part, v)) {
                bad_.add(e->line, std::string(section) + "." + key +
                                      ": expected a comma-separated number "
                                      "list, got '" +
                                      e->value + "'");
                return;
            }
            parsed.push_back(v);
        }
        out = std::move(parsed);
    }

    void integer_list(const char* section, const char* key,
                      std::vector<int>& out) {
        const Entry* e = entry(section, key);
        if (!e) return;
        std::vector<int> parsed;
        for (const std::string& part : split_list(e->value)) {
            long long v = 0;
            if (!parse_int(part, v)) {
                bad_.add(e->line, std::string(section) + "." + key +
                                      ": expected a comma-separated integer "
                                      "list, got '" +
                                      e->value + "'");
                return;
            }
            parsed.push_back(static_cast<int>(v));
        }
        out = std::move(parsed);
    }

  private:
    const Entry* entry(const char* section, const char* key) const {
        const auto sit = map_.find(section);
        if (sit == map_.end()) return nullptr;
        const auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        return &kit->second;
    }

    const SectionMap& map_;
    Violations& bad_;
};

void validate(const RunConfig& c, Violations& bad) {
    if (c.dim != 1 && c.dim != 2)
        bad.add("domain.dim must be 1 or 2, got " + std::to_string(c.dim));
    if (!(c.extent_x > 0.0))
        bad.add("domain.extent_x must be positive");
    if (c.dim == 2 && !(c.extent_y > 0.0))
        bad.add("domain.extent_y must be positive");
    if (c.nx < 3)
        bad.add("domain.nx must be at least 3");
    if (c.dim == 2 && c.ny < 3)
        bad.add("domain.ny must be at least 3");
    const long long cells =
        static_cast<long long>(c.nx) * (c.dim == 2 ? c.ny : 1);
    if (c.nx >= 3 && (c.dim != 2 || c.ny >= 3) && cells > kEigendecomposeCap)
        bad.add("domain resolution " + std::to_string(cells) +
                " cells exceeds the desk-scale cap of " +
                std::to_string(kEigendecomposeCap));

    if (c.coefficient_family != "constant" &&
        c.coefficient_family != "smooth_anisotropic" &&
        c.coefficient_family != "rotated")
        bad.add("coefficient.family must be one of constant, "
                "smooth_anisotropic, rotated; got '" +
                c.coefficient_family + "'");
    if (!(c.coefficient_value > 0.0))
        bad.add("coefficient.value must be positive");
    if (!(c.coefficient_eig1 > 0.0) || !(c.coefficient_eig2 > 0.0))
        bad.add("coefficient.eig1 and coefficient.eig2 must be positive");

    if (!(c.s > 0.0 && c.s < 1.0))
        bad.add("fractional.s must lie in the open interval (0, 1), got " +
                fmt_double(c.s));

    if (!(c.delta > 0.0 && c.delta <= 1.0))
        bad.add("solver.delta must lie in (0, 1], got " + fmt_double(c.delta));
    if (!(c.mu > 0.0 && c.mu <= 1.0))
        bad.add("solver.mu must lie in (0, 1], got " + fmt_double(c.mu));
    if (!(c.dt_max > 0.0))
        bad.add("solver.dt_max must be positive");
    if (!(c.t_end > 0.0))
        bad.add("solver.t_end must be positive");

    if (c.initial_family != "zero" && c.initial_family != "indicator" &&
        c.initial_family != "bump" && c.initial_family != "random")
        bad.add("initial.family must be one of zero, indicator, bump, "
                "random; got '" +
                c.initial_family + "'");
    if (c.initial_family == "indicator") {
        if (!(c.box_lo_x < c.box_hi_x))
            bad.add("initial.box_lo_x must be below initial.box_hi_x");
        if (c.dim == 2 && !(c.box_lo_y < c.box_hi_y))
            bad.add("initial.box_lo_y must be below initial.box_hi_y");
    }
    if (c.initial_family == "bump" && !(c.radius > 0.0))
        bad.add("initial.radius must be positive");
    if (c.amplitude < 0.0)
        bad.add("initial.amplitude must be nonnegative");

    if (!(c.epsilon > 0.0))
        bad.add("probes.epsilon must be positive");
    if (c.taus.empty()) {
        bad.add("probes.taus must list at least one value");
    } else {
        for (double tau : c.taus)
            if (tau < 0.0) bad.add("probes.taus entries must be nonnegative");
        for (std::size_t i = 1; i < c.taus.size(); ++i)
            if (!(c.taus[i] < c.taus[i - 1])) {
                bad.add("probes.taus must be strictly decreasing toward 0");
                break;
            }
    }
    if (c.cutoffs.empty()) {
        bad.add("probes.cutoffs must list at least one sharpness");
    } else {
        for (int k : c.cutoffs)
            if (k < 1) {
                bad.add("probes.cutoffs entries must be positive integers");
                break;
            }
        for (std::size_t i = 1; i < c.cutoffs.size(); ++i)
            if (c.cutoffs[i] <= c.cutoffs[i - 1]) {
                bad.add("probes.cutoffs must be strictly increasing");
                break;
            }
    }
    if (!(c.snapshot_dt > 0.0))
        bad.add("probes.snapshot_dt must be positive");
    if (c.inequality_probes < 1)
        bad.add("probes.inequality_probes must be at least 1");
}

} // namespace

Grid RunConfig::make_grid() const {
    if (dim == 1) return build_grid_1d(extent_x, nx);
    return build_grid_2d(extent_x, extent_y, nx, ny);
}

CoefficientSpec RunConfig::make_coefficient() const {
    if (coefficient_family == "constant")
        return CoefficientSpec::constant(coefficient_value);
    if (coefficient_family == "smooth_anisotropic")
        return CoefficientSpec::smooth_anisotropic();
    return CoefficientSpec::rotated(coefficient_theta, coefficient_eig1,
                                    coefficient_eig2);
}

InitialSpec RunConfig::make_initial() const {
    InitialSpec spec;
    if (initial_family == "zero")
        spec.family = InitialFamily::Zero;
    else if (initial_family == "indicator")
        spec.family = InitialFamily::Indicator;
    else if (initial_family == "bump")
        spec.family = InitialFamily::Bump;
    else
        spec.family = InitialFamily::Random;
    spec.box_lo[0] = box_lo_x;
    spec.box_lo[1] = box_lo_y;
    spec.box_hi[0] = box_hi_x;
    spec.box_hi[1] = box_hi_y;
    spec.center[0] = center_x;
    spec.center[1] = center_y;
    spec.radius = radius;
    spec.amplitude = amplitude;
    spec.seed = initial_seed;
    return spec;
}

SolverParams RunConfig::make_solver_params() const {
    SolverParams p;
    p.s = s;
    p.delta = delta;
    p.mu = mu;
    p.dt_max = dt_max;
    p.t_end = t_end;
    return p;
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> e;
    e["domain.dim"] = std::to_string(dim);
    e["domain.extent_x"] = fmt_double(extent_x);
    e["domain.extent_y"] = fmt_double(extent_y);
    e["domain.nx"] = std::to_string(nx);
    e["domain.ny"] = std::to_string(ny);
    e["coefficient.family"] = coefficient_family;
    e["coefficient.value"] = fmt_double(coefficient_value);
    e["coefficient.theta"] = fmt_double(coefficient_theta);
    e["coefficient.eig1"] = fmt_double(coefficient_eig1);
    e["coefficient.eig2"] = fmt_double(coefficient_eig2);
    e["fractional.s"] = fmt_double(s);
    e["solver.delta"] = fmt_double(delta);
    e["solver.mu"] = fmt_double(mu);
    e["solver.dt_max"] = fmt_double(dt_max);
    e["solver.t_end"] = fmt_double(t_end);
    e["initial.family"] = initial_family;
    e["initial.box_lo_x"] = fmt_double(box_lo_x);
    e["initial.box_lo_y"] = fmt_double(box_lo_y);
    e["initial.box_hi_x"] = fmt_double(box_hi_x);
    e["initial.box_hi_y"] = fmt_double(box_hi_y);
    e["initial.center_x"] = fmt_double(center_x);
    e["initial.center_y"] = fmt_double(center_y);
    e["initial.radius"] = fmt_double(radius);
    e["initial.amplitude"] = fmt_double(amplitude);
    e["initial.seed"] = std::to_string(initial_seed);
    e["probes.epsilon"] = fmt_double(epsilon);
    std::string tau_text;
    for (std::size_t i = 0; i < taus.size(); ++i)
        tau_text += (i ? "," : "") + fmt_double(taus[i]);
    e["probes.taus"] = tau_text;
    std::string cut_text;
    for (std::size_t i = 0; i < cutoffs.size(); ++i)
        cut_text += (i ? "," : "") + std::to_string(cutoffs[i]);
    e["probes.cutoffs"] = cut_text;
    e["probes.snapshot_dt"] = fmt_double(snapshot_dt);
    e["probes.inequality_probes"] = std::to_string(inequality_probes);
    e["probes.seed"] = std::to_string(probe_seed);
    // The output directory is deliberately not echoed: artifacts must be
    // byte-identical wherever an otherwise-identical run lands.
    return e;
}

RunConfig parse_config(const std::string& text) {
    Violations bad;
    const SectionMap map = tokenize(text, bad);

    RunConfig c;
    Reader r(map, bad);
    r.integer("domain", "dim", c.dim);
    r.number("domain", "extent_x", c.extent_x);
    r.number("domain", "extent_y", c.extent_y);
    r.integer("domain", "nx", c.nx);
    r.integer("domain", "ny", c.ny);
    r.word("coefficient", "family", c.coefficient_family);
    r.number("coefficient", "value", c.coefficient_value);
    r.number("coefficient", "theta", c.coefficient_theta);
    r.number("coefficient", "eig1", c.coefficient_eig1);
    r.number("coefficient", "eig2", c.coefficient_eig2);
    r.number("fractional", "s", c.s);
    r.number("solver", "delta", c.delta);
    r.number("solver", "mu", c.mu);
    r.number("solver", "dt_max", c.dt_max);
    r.number("solver", "t_end", c.t_end);
    r.word("initial", "family", c.initial_family);
    r.number("initial", "box_lo_x", c.box_lo_x);
    r.number("initial", "box_lo_y", c.box_lo_y);
    r.number("initial", "box_hi_x", c.box_hi_x);
    r.number("initial", "box_hi_y", c.box_hi_y);
    r.number("initial", "center_x", c.center_x);
    r.number("initial", "center_y", c.center_y);
    r.number("initial", "radius", c.radius);
    r.number("initial", "amplitude", c.amplitude);
    r.unsigned64("initial", "seed", c.initial_seed);
    r.number("probes", "epsilon", c.epsilon);
    r.number_list("probes", "taus", c.taus);
    r.integer_list("probes", "cutoffs", c.cutoffs);
    r.number("probes", "snapshot_dt", c.snapshot_dt);
    r.integer("probes", "inequality_probes", c.inequality_probes);
    r.unsigned64("probes", "seed", c.probe_seed);
    r.word("output", "dir", c.output_dir);

    validate(c, bad);
    bad.raise_if_any();
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read configuration file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace fraclab
