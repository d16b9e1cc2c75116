#include "kppwaves/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kppwaves/errors.hpp"
#include "kppwaves/expression.hpp"

namespace kppwaves {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Removes a trailing comment introduced by whitespace + '#' or ';'.
std::string strip_comment(const std::string& s) {
    for (size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '#' || s[i] == ';') && (s[i - 1] == ' ' || s[i - 1] == '\t'))
            return s.substr(0, i);
    }
    return s;
}

}  // namespace

ConfigFile parse_config(const std::string& text, const std::string& path) {
    ConfigFile cfg;
    cfg.source_path = path;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string stripped = trim(strip_comment(line));
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped[0] == '[') {
            auto close = stripped.find(']');
            if (close == std::string::npos)
                throw ParseError("unterminated section header", lineno,
                                 int(line.find('[')) + 1);
            section = trim(stripped.substr(1, close - 1));
            if (section.empty()) throw ParseError("empty section name", lineno, 1);
            cfg.sections[section];
            continue;
        }
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineno, 1);
        if (section.empty())
            throw ParseError("key-value pair before any [section]", lineno, 1);
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ParseError("empty key", lineno, 1);
        if (value.empty())
            throw ParseError("empty value for key '" + key + "'", lineno,
                             int(line.find('=')) + 2);
        cfg.sections[section][key] = value;
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw SpecViolation("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str(), path);
}

namespace {

const std::map<std::string, std::string>& require_section(const ConfigFile& cfg,
                                                          const std::string& name) {
    auto it = cfg.sections.find(name);
    if (it == cfg.sections.end())
        throw SpecViolation(cfg.source_path + ": missing section [" + name + "]");
    return it->second;
}

double require_number(const ConfigFile& cfg, const std::string& section, const std::string& key) {
    const auto& sec = require_section(cfg, section);
    auto it = sec.find(key);
    if (it == sec.end())
        throw SpecViolation(cfg.source_path + ": missing key '" + key + "' in [" + section + "]");
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw SpecViolation(cfg.source_path + ": '" + key + "' in [" + section +
                            "] is not a number: " + it->second);
    }
}

ScalarFn function_from_section(const ConfigFile& cfg, const std::string& section,
                               ScalarFn power_family) {
    const auto& sec = require_section(cfg, section);
    auto kind_it = sec.find("kind");
    std::string kind = kind_it == sec.end() ? "power" : kind_it->second;
    if (kind == "power") return power_family;
    if (kind == "expr") {
        auto expr_it = sec.find("expr");
        if (expr_it == sec.end())
            throw SpecViolation(cfg.source_path + ": [" + section +
                                "] kind=expr requires an 'expr' key");
        Expression e = Expression::parse(expr_it->second);
        return [e](double r) { return e(r); };
    }
    throw SpecViolation(cfg.source_path + ": [" + section + "] kind must be power or expr, got " +
                        kind);
}

}  // namespace

ProblemSpec problem_from_config(const ConfigFile& cfg) {
    double gamma0 = require_number(cfg, "exponents", "gamma0");
    double delta0 = require_number(cfg, "exponents", "delta0");
    double gamma1 = require_number(cfg, "exponents", "gamma1");
    double delta1 = require_number(cfg, "exponents", "delta1");
    double g0 = require_number(cfg, "coefficients", "g0");
    double g1 = require_number(cfg, "coefficients", "g1");
    double d0 = require_number(cfg, "coefficients", "d0");
    double d1 = require_number(cfg, "coefficients", "d1");

    ProblemSpec spec = ProblemSpec::power_law(gamma0, delta0, gamma1, delta1, g0, g1, d0, d1);
    spec.diffusion = function_from_section(cfg, "diffusion", spec.diffusion);
    spec.reaction = function_from_section(cfg, "reaction", spec.reaction);
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    return problem_from_config(load_config(path));
}

}  // namespace kppwaves
