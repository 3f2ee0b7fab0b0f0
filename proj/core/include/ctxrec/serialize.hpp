#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace ctxrec {

inline constexpr int kModelFormatVersion = 1;

/// {"format": "ctxrec-model", "version": 1, "kind": <kind>, "model": <payload>}
nlohmann::json wrap_model(std::string_view kind, nlohmann::json payload);

/// Payload of a wrapped model. Throws ModelError on a foreign document, an
/// unsupported version, or a kind other than `expected_kind`.
nlohmann::json unwrap_model(const nlohmann::json& doc, std::string_view expected_kind);

/// Writes `j` indented, keys in sorted order.
void save_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

/// Convenience for any model type with to_json()/from_json().
template <class Model>
void save_model(const std::filesystem::path& path, std::string_view kind, const Model& m) {
  save_json(path, wrap_model(kind, m.to_json()));
}

template <class Model>
Model load_model(const std::filesystem::path& path, std::string_view kind) {
  return Model::from_json(unwrap_model(load_json(path), kind));
}

}  // namespace ctxrec
