#pragma once

#include "walls/grid.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace walls {

/// Named sampled fields sharing one grid. Solvers attach warnings instead of
/// failing when a result is usable but degraded (short tails, clamped blow-up).
struct Profile {
  Grid grid;
  std::vector<std::string> names;
  std::vector<Field> fields;
  std::vector<std::string> warnings;

  explicit Profile(Grid g) : grid(g) {}

  Field& add(std::string name, Field values) {
    if (values.size() != grid.n())
      throw std::invalid_argument("Profile: field '" + name + "' has " +
                                  std::to_string(values.size()) + " samples, grid has " +
                                  std::to_string(grid.n()));
    if (!values.allFinite())
      throw std::invalid_argument("Profile: field '" + name + "' contains non-finite samples");
    names.push_back(std::move(name));
    fields.push_back(std::move(values));
    return fields.back();
  }

  bool has(std::string_view name) const {
    for (const auto& n : names)
      if (n == name) return true;
    return false;
  }

  const Field& field(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return fields[i];
    throw std::invalid_argument("Profile: no field named '" + std::string(name) + "'");
  }

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace walls
