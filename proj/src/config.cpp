#include "mixhess/config.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mixhess {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::islower(c) || std::isdigit(c) || c == '_' || std::isupper(c);
    });
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double parse_double(const std::string& text, const std::string& ctx) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(ctx + ": expected a finite number, got '" + text + "'");
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& ctx) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(ctx + ": expected an integer, got '" + text + "'");
    return v;
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
    Config c;
    std::string section;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        auto fail = [&](const std::string& what) {
            throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": " + what);
        };
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!valid_name(section)) fail("invalid section name '" + section + "'");
            if (c.sections_.count(section)) fail("duplicate section [" + section + "]");
            c.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        if (section.empty()) fail("key outside of any section");
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (!valid_name(key)) fail("invalid key '" + key + "'");
        if (value.empty()) fail("empty value for '" + key + "'");
        if (value.find('#') != std::string::npos) fail("'#' is not allowed inside values");
        auto& sec = c.sections_[section];
        if (sec.count(key)) fail("duplicate key '" + key + "' in [" + section + "]");
        sec[key] = value;
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::string Config::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, sec] : sections_) {
        if (!first) out << '\n';
        first = false;
        out << '[' << name << "]\n";
        for (const auto& [k, v] : sec) out << k << " = " << v << '\n';
    }
    return out.str();
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) != 0;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end() || !it->second.count(key)) throw ConfigError("missing key " + where(section, key));
    return it->second.at(key);
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
    value = trim(value);
    if (!valid_name(section) || !valid_name(key) || value.empty() || value.find('#') != std::string::npos ||
        value.find('\n') != std::string::npos)
        throw ConfigError("invalid assignment to " + where(section, key));
    sections_[section][key] = std::move(value);
}

void Config::erase(const std::string& section, const std::string& key) {
    auto it = sections_.find(section);
    if (it != sections_.end()) it->second.erase(key);
}

std::string Config::get_string(const std::string& section, const std::string& key) const { return raw(section, key); }

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    return parse_int(raw(section, key), where(section, key));
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key) const {
    const auto& text = raw(section, key);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(where(section, key) + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(raw(section, key), where(section, key));
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    const auto& v = raw(section, key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(where(section, key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const auto& w : split_ws(raw(section, key))) out.push_back(parse_double(w, where(section, key)));
    return out;
}

std::vector<std::int64_t> Config::get_ints(const std::string& section, const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const auto& w : split_ws(raw(section, key))) out.push_back(parse_int(w, where(section, key)));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

using Keys = std::vector<std::pair<std::string, std::string>>;

void add(Keys& keys, const std::string& section, std::initializer_list<const char*> names) {
    for (const char* n : names) keys.emplace_back(section, n);
}

int problem_k(const Config& c) {
    const auto k = c.get_int("problem", "k");
    if (k < 2 || k > 16) throw ConfigError("[problem] k: must lie in 2..16");
    return static_cast<int>(k);
}

void add_coefficients(Keys& keys, const Config& c) {
    const int k = problem_k(c);
    for (int l = 0; l < k; ++l) keys.emplace_back("coefficients", "alpha_" + std::to_string(l));
    keys.emplace_back("coefficients", "phi");
}

void add_domain(Keys& keys, const Config& c) {
    add(keys, "domain", {"kind", "center"});
    const auto kind = c.get_string("domain", "kind");
    if (kind == "ball") keys.emplace_back("domain", "radius");
    else if (kind == "ellipsoid") keys.emplace_back("domain", "radii");
    else throw ConfigError("[domain] kind: expected ball or ellipsoid, got '" + kind + "'");
}

void add_problem(Keys& keys, const Config& c) {
    add(keys, "problem", {"kind", "n", "k"});
    add_domain(keys, c);
    add(keys, "grid", {"half_width", "sample_spacing"});
    add(keys, "solver", {"residual_tol", "cone_margin", "max_iterations", "linear_tol", "min_step", "armijo"});
    const auto kind = c.get_string("problem", "kind");
    if (kind == "general") add_coefficients(keys, c);
    else if (kind == "manufactured") add(keys, "manufactured", {"alpha0", "beta"});
    else throw ConfigError("[problem] kind: expected general or manufactured, got '" + kind + "'");
}

}  // namespace

ConfigSchema schema_for(const std::string& command, const Config& c) {
    ConfigSchema s;
    auto& r = s.required;
    add(r, "run", {"seed", "threads"});
    if (command == "identities") {
        add(r, "identities", {"n_min", "n_max", "samples", "operator_n_max", "operator_samples", "inject_fault"});
    } else if (command == "solve") {
        add_problem(r, c);
        add(r, "problem", {"eps"});
        add(r, "grid", {"N"});
    } else if (command == "continue") {
        add_problem(r, c);
        add(r, "grid", {"N"});
        add(r, "continuation", {"schedule"});
    } else if (command == "verify") {
        add_problem(r, c);
        add(r, "problem", {"eps"});
        add(r, "verify", {"field"});
    } else if (command == "compare") {
        add_problem(r, c);
        add(r, "problem", {"eps"});
        add(r, "compare", {"N_values"});
        add(r, "oracle", {"start_fraction", "profile_tol"});
    } else if (command == "oracle") {
        add(r, "problem", {"kind", "n", "k"});
        add_domain(r, c);
        add_coefficients(r, c);
        add(r, "oracle", {"eps", "start_fraction", "profile_tol"});
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return s;
}

void check_schema(const std::string& command, const Config& c) {
    const auto s = schema_for(command, c);
    std::set<std::pair<std::string, std::string>> allowed(s.required.begin(), s.required.end());
    allowed.insert(s.optional.begin(), s.optional.end());
    for (const auto& [sec, keys] : c.sections())
        for (const auto& [k, v] : keys)
            if (!allowed.count({sec, k})) throw ConfigError("unknown key " + where(sec, k) + " for command '" + command + "'");
    for (const auto& [sec, k] : s.required)
        if (!c.has(sec, k)) throw ConfigError("missing key " + where(sec, k) + " for command '" + command + "'");
}

}  // namespace mixhess
