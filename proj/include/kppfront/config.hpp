// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/cross_section.hpp"
#include "kppfront/errors.hpp"

namespace kppfront {

/// Sectioned key = value configuration text ([section] headers, # or ;
/// comments). Keys are tracked so that unknown ones can be rejected and the
/// full resolved set echoed into output headers.
class Config {
public:
    static Config from_text(const std::string& text, const std::string& origin = "<memory>") {
        Config c;
        c.origin_ = origin;
        std::istringstream in(text);
        std::string line, section;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    raise(errc::config_parse, origin + ":" + std::to_string(ln) +
                                                  ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                raise(errc::config_parse,
                      origin + ":" + std::to_string(ln) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                raise(errc::config_parse,
                      origin + ":" + std::to_string(ln) + ": empty key or value");
            c.values_[section + "." + key] = value;
        }
        return c;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) raise(errc::config_not_found, "cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return from_text(ss.str(), path);
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        const std::string* raw = fetch(section, key);
        double v = fallback;
        if (raw) {
            char* end = nullptr;
            v = std::strtod(raw->c_str(), &end);
            if (end == raw->c_str() || *end != '\0')
                raise(errc::config_parse, origin_ + ": [" + section + "] " + key +
                                              " is not a number: " + *raw);
        }
        record(section, key, format_double(v));
        return v;
    }

    int get_int(const std::string& section, const std::string& key, int fallback) {
        const std::string* raw = fetch(section, key);
        long v = fallback;
        if (raw) {
            char* end = nullptr;
            v = std::strtol(raw->c_str(), &end, 10);
            if (end == raw->c_str() || *end != '\0')
                raise(errc::config_parse, origin_ + ": [" + section + "] " + key +
                                              " is not an integer: " + *raw);
        }
        record(section, key, std::to_string(v));
        return int(v);
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) {
        const std::string* raw = fetch(section, key);
        const std::string v = raw ? *raw : fallback;
        record(section, key, v);
        return v;
    }

    /// Overrides a value as if it came from the file (used by CLI flags).
    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[section + "." + key] = value;
    }

    /// Every key consumed so far with its resolved value, in insertion order.
    const std::vector<std::pair<std::string, std::string>>& resolved() const {
        return resolved_;
    }

    /// Rejects keys that no consumer asked about.
    void reject_unknown_keys() const {
        for (const auto& [k, v] : values_)
            if (!used_.count(k))
                raise(errc::unknown_key, origin_ + ": unknown configuration key: " + k);
    }

    static std::string format_double(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

private:
    const std::string* fetch(const std::string& section, const std::string& key) {
        const std::string full = section + "." + key;
        used_.insert(full);
        const auto it = values_.find(full);
        return it == values_.end() ? nullptr : &it->second;
    }

    void record(const std::string& section, const std::string& key, std::string value) {
        resolved_.emplace_back(section + "." + key, std::move(value));
    }

    std::string origin_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
    std::vector<std::pair<std::string, std::string>> resolved_;
};

/// Named cross-section profiles over y in [0, L].
inline std::vector<double> profile_values(const std::string& preset, double scale, double L,
                                          int n_y) {
    std::vector<double> v(static_cast<std::size_t>(n_y));
    for (int j = 0; j < n_y; ++j) {
        const double y = L * double(j) / double(n_y - 1);
        double base;
        if (preset == "constant") {
            base = 1.0;
        } else if (preset == "cosine") {
            base = std::cos(2.0 * M_PI * y / L);
        } else if (preset == "one_plus_cosine") {
            base = 1.0 + std::cos(2.0 * M_PI * y / L);
        } else if (preset == "two_bump") {
            const double s = 0.1 * L;
            const double d1 = (y - 0.3 * L) / s, d2 = (y - 0.7 * L) / s;
            base = std::exp(-d1 * d1) + std::exp(-d2 * d2);
        } else {
            raise(errc::config_parse, "unknown profile preset: " + preset);
        }
        v[std::size_t(j)] = scale * base;
    }
    return v;
}

inline ReactionKind reaction_kind_from(const std::string& s) {
    if (s == "linear") return ReactionKind::Linear;
    if (s == "log_kpp") return ReactionKind::LogKpp;
    raise(errc::config_parse, "unknown reaction kind: " + s);
}

inline LossKind loss_kind_from(const std::string& s) {
    if (s == "linear") return LossKind::Linear;
    if (s == "saturating") return LossKind::Saturating;
    raise(errc::config_parse, "unknown loss kind: " + s);
}

/// Builds the validated cross-section model from the [domain], [flow],
/// [reaction] and [loss] sections.
inline CrossSectionModel model_from_config(Config& cfg) {
    const double L = cfg.get_double("domain", "L", 1.0);
    const int n_y = cfg.get_int("domain", "n_y", 33);
    const double lewis = cfg.get_double("domain", "lewis", 1.0);

    const std::string flow_profile = cfg.get_string("flow", "profile", "constant");
    const double flow_scale = cfg.get_double("flow", "scale", 0.0);

    ReactionModel reaction;
    reaction.kind = reaction_kind_from(cfg.get_string("reaction", "kind", "linear"));
    const std::string r_profile = cfg.get_string("reaction", "profile", "constant");
    const double r_scale = cfg.get_double("reaction", "scale", 1.0);
    reaction.holder_alpha = cfg.get_double("reaction", "holder_alpha", 1.0);
    reaction.s0 = cfg.get_double("reaction", "s0", 1.0);
    reaction.amplitude = profile_values(r_profile, r_scale, L, n_y);

    LossModel loss;
    loss.kind = loss_kind_from(cfg.get_string("loss", "kind", "linear"));
    const std::string l_profile = cfg.get_string("loss", "profile", "constant");
    const double l_scale = cfg.get_double("loss", "scale", 0.25);
    loss.rate = profile_values(l_profile, l_scale, L, n_y);

    return build_model(L, n_y, profile_values(flow_profile, flow_scale, L, n_y),
                       std::move(reaction), std::move(loss), lewis);
}

} // namespace kppfront
