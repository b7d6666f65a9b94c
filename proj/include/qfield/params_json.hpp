#pragma once

// Canonical JSON form of ModelParams:
//   {"omega": 1.0, "omega1": [re, im], "omega2": [re, im], "lambda0": [re, im]}

#include <json.hpp>

#include "qfield/core_algebra.hpp"

namespace qfield {

namespace detail {

inline cplx complex_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ConfigInvalid, std::string(key) + " must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"omega", p.omega},
                     {"omega1", {p.omega1.real(), p.omega1.imag()}},
                     {"omega2", {p.omega2.real(), p.omega2.imag()}},
                     {"lambda0", {p.lambda0.real(), p.lambda0.imag()}}};
}

/// Missing complex fields default to 0; omega is required.
inline void from_json(const nlohmann::json& j, ModelParams& p) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "params must be a JSON object");
  if (!j.contains("omega") || !j.at("omega").is_number()) {
    throw Error(ErrorCode::ConfigInvalid, "params.omega must be a number");
  }
  p.omega = j.at("omega").get<double>();
  p.omega1 = j.contains("omega1") ? detail::complex_from_json(j.at("omega1"), "omega1") : cplx{};
  p.omega2 = j.contains("omega2") ? detail::complex_from_json(j.at("omega2"), "omega2") : cplx{};
  p.lambda0 =
      j.contains("lambda0") ? detail::complex_from_json(j.at("lambda0"), "lambda0") : cplx{};
}

}  // namespace qfield
