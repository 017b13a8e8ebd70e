#pragma once

#include <filesystem>
#include <string>

#include "graphadapt/model.hpp"

namespace graphadapt {

/// Container layout: 8-byte magic "GADPTCK1", uint64 little-endian header
/// length, JSON header {format, version, config, tensors[{name, shape}],
/// payload_bytes}, then every tensor's values as little-endian f64 in
/// declaration order.
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const GcnnModel& model, const std::filesystem::path& path);

/// Rebuilds the model from the stored config and restores every parameter
/// bit-exactly. Throws CheckpointError on a bad magic, version, schema or size.
GcnnModel load_checkpoint(const std::filesystem::path& path);

/// Reads only the header.
GcnnConfig load_checkpoint_config(const std::filesystem::path& path);

}  // namespace graphadapt
