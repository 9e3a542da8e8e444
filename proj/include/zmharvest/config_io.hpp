#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "zmharvest/types.hpp"

namespace zmharvest {

// Flat key = value configuration text. Recognized keys:
//   omega, lambda_tilde, T, L, n_dim, gamma,
//   separation_fraction | separation_abs (exactly one),
//   coupling (amplitude|derivative), detector (qubit|oscillator),
//   include_zero_mode (true|false), n_max, quad_tol, epsilon
// '#' starts a comment; blank lines are ignored.

struct ConfigParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double to_number(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigParseError("key '" + key + "': cannot parse number from '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigParseError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigParseError("key '" + key + "': expected true or false, got '" + v + "'");
}

} // namespace detail

inline HarvestConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (kv.count(key))
            throw ConfigParseError("duplicate key '" + key + "'");
        kv[key] = val;
    }

    static const char* known[] = {
        "omega", "lambda_tilde", "T", "L", "n_dim", "gamma",
        "separation_fraction", "separation_abs", "coupling", "detector",
        "include_zero_mode", "n_max", "quad_tol", "epsilon"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) throw ConfigParseError("unknown key '" + k + "'");
    }
    auto need = [&kv](const char* k) -> std::string {
        auto it = kv.find(k);
        if (it == kv.end())
            throw ConfigParseError(std::string("missing required key '") + k + "'");
        return it->second;
    };

    HarvestConfig c;
    const double omega = detail::to_number("omega", need("omega"));
    const double lambda = detail::to_number("lambda_tilde", need("lambda_tilde"));
    const double t = detail::to_number("T", need("T"));
    c.field.circumference = detail::to_number("L", need("L"));
    c.field.spatial_dim = static_cast<int>(detail::to_number("n_dim", need("n_dim")));
    c.zero_mode = ZeroModeState::saturated(detail::to_number("gamma", need("gamma")));
    c.field.mode_cutoff = static_cast<int>(detail::to_number("n_max", need("n_max")));
    c.field.quad_tol = detail::to_number("quad_tol", need("quad_tol"));
    c.field.epsilon = detail::to_number("epsilon", need("epsilon"));

    const std::string coupling = need("coupling");
    if (coupling == "amplitude")
        c.field.coupling = CouplingKind::Amplitude;
    else if (coupling == "derivative")
        c.field.coupling = CouplingKind::Derivative;
    else
        throw ConfigParseError("coupling must be amplitude or derivative");

    const std::string detector = need("detector");
    DetectorKind kind;
    if (detector == "qubit")
        kind = DetectorKind::Qubit;
    else if (detector == "oscillator")
        kind = DetectorKind::HarmonicOscillator;
    else
        throw ConfigParseError("detector must be qubit or oscillator");

    c.field.include_zero_mode = detail::to_bool("include_zero_mode", need("include_zero_mode"));

    const bool has_frac = kv.count("separation_fraction") > 0;
    const bool has_abs = kv.count("separation_abs") > 0;
    if (has_frac == has_abs)
        throw ConfigParseError(
            "exactly one of separation_fraction / separation_abs is required");
    SeparationSpec sep;
    if (has_frac) {
        sep.mode = SeparationSpec::Mode::FractionOfL;
        sep.value = detail::to_number("separation_fraction", kv["separation_fraction"]);
    } else {
        sep.mode = SeparationSpec::Mode::Absolute;
        sep.value = detail::to_number("separation_abs", kv["separation_abs"]);
    }
    c.separation = sep;

    for (DetectorParams* d : {&c.detector_a, &c.detector_b}) {
        d->gap = omega;
        d->ho_frequency = omega;
        d->coupling = lambda;
        d->switching_width = t;
        d->kind = kind;
    }
    c.detector_a.position = 0.0;
    return c;
}

inline HarvestConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace zmharvest
