#pragma once

// Single-file model artifact:
//   8 bytes  magic "AUTHPRNT"
//   4 bytes  format version, little endian
//   8 bytes  payload length, little endian
//   8 bytes  FNV-1a 64 checksum of the payload, little endian
//   payload  canonical JSON (sorted keys, shortest round-trip doubles)

#include <cstdint>
#include <string>
#include <string_view>

#include "authorprint/pipeline.hpp"

namespace authorprint {

inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
// Throws CorruptArtifact for a bad magic, length or checksum and for an
// unreadable payload; VersionMismatch for any other format version.
TrainedModel deserialize_model(std::string_view bytes);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace authorprint
