#include "ctxrec/serialize.hpp"

#include <fstream>

#include "ctxrec/error.hpp"

namespace ctxrec {

nlohmann::json wrap_model(std::string_view kind, nlohmann::json payload) {
  return {{"format", "ctxrec-model"},
          {"version", kModelFormatVersion},
          {"kind", std::string(kind)},
          {"model", std::move(payload)}};
}

nlohmann::json unwrap_model(const nlohmann::json& doc, std::string_view expected_kind) {
  if (!doc.is_object() || doc.value("format", "") != "ctxrec-model") {
    throw ModelError("not a ctxrec model artifact");
  }
  const int version = doc.value("version", -1);
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model artifact version " + std::to_string(version));
  }
  const auto kind = doc.value("kind", "");
  if (kind != expected_kind) {
    throw ModelError("expected a '" + std::string(expected_kind) + "' artifact, found '" + kind + "'");
  }
  return doc.at("model");
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace ctxrec
