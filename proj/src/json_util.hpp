#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace sadg::detail {

inline std::string label_of(const nlohmann::json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw std::runtime_error("id must be a string or integer");
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key,
                                  const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw std::runtime_error(where + ": missing field '" + key + "'");
    return *it;
}

}  // namespace sadg::detail
