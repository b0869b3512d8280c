// Copyright 2026 The Dephimetry Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dephimetry/sweep_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace dephimetry {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> items;
    if (value.empty()) {
        return items;
    }
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        items.push_back(trim(item));
    }
    if (value.back() == ',') {
        items.emplace_back();
    }
    return items;
}

double parse_real(const std::string &s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw ConfigError(line, "expected a number, got '" + s + "'");
}

std::size_t parse_count(const std::string &s, std::size_t line) {
    std::size_t v = 0;
    const auto *first = s.data();
    const auto *last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || v == 0) {
        throw ConfigError(line, "expected a positive integer, got '" + s + "'");
    }
    return v;
}

} // namespace

std::string_view to_string(StateKind s) {
    switch (s) {
    case StateKind::Ghz:
        return "ghz";
    case StateKind::ProductPlus:
        return "product-plus";
    case StateKind::Heisenberg:
        return "heisenberg";
    }
    return "ghz";
}

StateKind parse_state(std::string_view s) {
    if (s == "ghz") {
        return StateKind::Ghz;
    }
    if (s == "product-plus") {
        return StateKind::ProductPlus;
    }
    if (s == "heisenberg") {
        return StateKind::Heisenberg;
    }
    throw InvalidArgument("unknown state '" + std::string(s) + "'");
}

ConfigError::ConfigError(std::size_t line, const std::string &what)
    : InvalidArgument("config line " + std::to_string(line) + ": " + what), line_(line) {}

std::size_t SweepConfig::size() const {
    return family.size() * state.size() * n.size() * alpha.size() * two_beta2.size();
}

SweepConfig parse_sweep_config(std::istream &in) {
    SweepConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(std::string_view(raw).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(line, "missing key before '='");
        }
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError(line, "duplicate key '" + key + "' (first on line " +
                                        std::to_string(it->second) + ")");
        }
        seen.emplace(key, line);

        const auto items = split_list(value);
        for (const auto &item : items) {
            if (item.empty()) {
                throw ConfigError(line, "empty list element");
            }
        }
        try {
            if (key == "n") {
                for (const auto &item : items) {
                    cfg.n.push_back(parse_count(item, line));
                }
            } else if (key == "alpha") {
                for (const auto &item : items) {
                    const double a = parse_real(item, line);
                    if (!(a >= 0.0 && a <= 1.0)) {
                        throw ConfigError(line, "alpha must lie in [0, 1]");
                    }
                    cfg.alpha.push_back(a);
                }
            } else if (key == "two_beta2") {
                for (const auto &item : items) {
                    const double x = parse_real(item, line);
                    if (!(x >= 0.0) || !std::isfinite(x)) {
                        throw ConfigError(line, "two_beta2 must be finite and >= 0");
                    }
                    cfg.two_beta2.push_back(x);
                }
            } else if (key == "family") {
                for (const auto &item : items) {
                    const auto f = parse_family(item);
                    if (f == Family::Custom) {
                        throw ConfigError(line, "family must be c1, c2 or identity");
                    }
                    cfg.family.push_back(f);
                }
            } else if (key == "state") {
                for (const auto &item : items) {
                    cfg.state.push_back(parse_state(item));
                }
            } else {
                throw ConfigError(line, "unknown key '" + key + "'");
            }
        } catch (const ConfigError &) {
            throw;
        } catch (const InvalidArgument &e) {
            throw ConfigError(line, e.what());
        }
    }
    if (!seen.contains("n")) {
        throw ConfigError(line, "missing required key 'n'");
    }
    if (!seen.contains("two_beta2")) {
        throw ConfigError(line, "missing required key 'two_beta2'");
    }
    if (!seen.contains("alpha")) {
        cfg.alpha = {0.0};
    }
    if (!seen.contains("family")) {
        cfg.family = {Family::Identity};
    }
    if (!seen.contains("state")) {
        cfg.state = {StateKind::Ghz};
    }
    return cfg;
}

} // namespace dephimetry
