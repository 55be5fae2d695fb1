#pragma once

#include <string>

#include <json.hpp>

namespace ymhk {

/// Outcome of one named check: {name, inputs, tolerance, measured, pass}.
struct CheckReport {
  std::string name;
  nlohmann::json inputs = nlohmann::json::object();
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;

  nlohmann::json to_json() const {
    return {{"name", name}, {"inputs", inputs}, {"tolerance", tolerance},
            {"measured", measured}, {"pass", pass}};
  }
};

}  // namespace ymhk
