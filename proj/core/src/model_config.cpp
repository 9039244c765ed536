#include "mixobs/model_config.hpp"

#include "mixobs/errors.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mixobs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError("bad " + what + ": '" + text + "'");
    return v;
}

} // namespace

Gaussian1D parse_distribution_literal(const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ConfigError("bad distribution literal: '" + text +
                          "' (expected normal(mean,variance) or dirac(mean))");
    const std::string name = trim(t.substr(0, open));
    const std::string args = t.substr(open + 1, t.size() - open - 2);
    if (name == "dirac") return dirac(parse_number(args, "dirac mean"));
    if (name == "normal") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ConfigError("normal(...) needs two arguments: '" + text + "'");
        const double mean = parse_number(args.substr(0, comma), "normal mean");
        const double variance = parse_number(args.substr(comma + 1), "normal variance");
        if (variance < 0.0) throw ConfigError("normal variance must be >= 0: '" + text + "'");
        return normal(mean, variance);
    }
    throw ConfigError("unknown distribution '" + name + "' in '" + text + "'");
}

AnomalyModel parse_model_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("model config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        if (kv.count(key))
            throw ConfigError("model config: duplicate key '" + key + "'");
        kv[key] = trim(t.substr(eq + 1));
    }
    for (const char* required : {"n", "k", "common", "anomalous"})
        if (!kv.count(required))
            throw ConfigError(std::string("model config: missing key '") + required + "'");
    for (const auto& [key, value] : kv)
        if (key != "n" && key != "k" && key != "common" && key != "anomalous")
            throw ConfigError("model config: unknown key '" + key + "'");

    const double n_val = parse_number(kv["n"], "n");
    const double k_val = parse_number(kv["k"], "k");
    if (n_val != static_cast<int>(n_val) || k_val != static_cast<int>(k_val))
        throw ConfigError("model config: n and k must be integers");
    try {
        return AnomalyModel(static_cast<int>(n_val), static_cast<int>(k_val),
                            parse_distribution_literal(kv["common"]),
                            parse_distribution_literal(kv["anomalous"]));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model config: ") + e.what());
    }
}

AnomalyModel parse_model_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_model_config(in);
}

AnomalyModel load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model config: " + path);
    return parse_model_config(in);
}

} // namespace mixobs
