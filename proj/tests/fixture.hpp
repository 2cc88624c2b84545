#pragma once

// Run-recorded constants. The first run that meets a missing key stores the
// computed value; later runs must reproduce it.

#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fixture {

inline std::string path() { return FRAC_FIXTURE_FILE; }

inline nlohmann::ordered_json load() {
    std::ifstream in(path());
    if (!in) return nlohmann::ordered_json::object();
    return nlohmann::ordered_json::parse(in);
}

/// Returns the stored value for `key`, recording `computed` if absent.
inline double recorded(const std::string& key, double computed) {
    auto j = load();
    if (!j.contains(key)) {
        j[key] = computed;
        std::ofstream(path()) << j.dump(2) << '\n';
        return computed;
    }
    return j[key].get<double>();
}

/// Stable to a relative 1e-9.
inline bool stable(const std::string& key, double computed) {
    const double r = recorded(key, computed);
    return std::fabs(computed - r) <= 1e-9 * std::fabs(r);
}

} // namespace fixture
