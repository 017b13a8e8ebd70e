#include "graphadapt/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "graphadapt/error.hpp"
#include "json_support.hpp"

namespace graphadapt {
namespace {

constexpr std::array<char, 8> kMagic{'G', 'A', 'D', 'P', 'T', 'C', 'K', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffU));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return v;
}

struct Parsed {
  detail::json header;
  std::string bytes;
  std::size_t payload_start = 0;
};

Parsed read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
  Parsed p;
  p.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (p.bytes.size() < 16 || std::memcmp(p.bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw CheckpointError("checkpoint: " + path.string() + " is not a checkpoint file");
  }
  const std::uint64_t header_len = get_u64(p.bytes.data() + 8);
  if (header_len > p.bytes.size() - 16) throw CheckpointError("checkpoint: truncated header");
  try {
    p.header = detail::json::parse(p.bytes.begin() + 16,
                                   p.bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const detail::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: corrupt header: ") + e.what());
  }
  p.payload_start = 16 + header_len;
  try {
    if (p.header.at("format").get<std::string>() != "graphadapt-checkpoint") {
      throw CheckpointError("checkpoint: unknown format");
    }
    const int version = p.header.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw CheckpointError("checkpoint: unsupported version " + std::to_string(version) +
                            " (expected " + std::to_string(kCheckpointVersion) + ")");
    }
  } catch (const detail::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: corrupt header: ") + e.what());
  }
  return p;
}

GcnnConfig config_of(const detail::json& header) {
  try {
    return detail::config_from_value(header.at("config"));
  } catch (const Error& e) {
    throw CheckpointError(std::string("checkpoint: bad config: ") + e.what());
  } catch (const detail::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: bad config: ") + e.what());
  }
}

}  // namespace

void save_checkpoint(const GcnnModel& model, const std::filesystem::path& path) {
  const ParamStore& store = model.params();
  detail::json tensors = detail::json::array();
  for (std::size_t t = 0; t < store.num_tensors(); ++t) {
    tensors.push_back({{"name", store.tensor(t).name}, {"shape", store.tensor(t).shape}});
  }
  const detail::json header = {{"format", "graphadapt-checkpoint"},
                               {"version", kCheckpointVersion},
                               {"config", detail::config_to_value(model.config())},
                               {"tensors", tensors},
                               {"payload_bytes", store.parameter_count() * 8}};
  const std::string header_text = header.dump();

  std::string out(kMagic.begin(), kMagic.end());
  put_u64(out, header_text.size());
  out += header_text;
  for (double v : store.flat_values()) put_u64(out, std::bit_cast<std::uint64_t>(v));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CheckpointError("checkpoint: cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw CheckpointError("checkpoint: write failed for " + path.string());
}

GcnnConfig load_checkpoint_config(const std::filesystem::path& path) {
  return config_of(read_container(path).header);
}

GcnnModel load_checkpoint(const std::filesystem::path& path) {
  const Parsed p = read_container(path);
  GcnnModel model(config_of(p.header), 0);
  ParamStore& store = model.params();
  try {
    const auto& tensors = p.header.at("tensors");
    if (tensors.size() != store.num_tensors()) throw CheckpointError("checkpoint: tensor count mismatch");
    for (std::size_t t = 0; t < store.num_tensors(); ++t) {
      if (tensors[t].at("name").get<std::string>() != store.tensor(t).name ||
          tensors[t].at("shape").get<std::vector<std::size_t>>() != store.tensor(t).shape) {
        throw CheckpointError("checkpoint: tensor '" + store.tensor(t).name + "' does not match config");
      }
    }
    if (p.header.at("payload_bytes").get<std::size_t>() != store.parameter_count() * 8) {
      throw CheckpointError("checkpoint: payload size disagrees with tensor shapes");
    }
  } catch (const detail::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: corrupt header: ") + e.what());
  }
  const std::size_t need = store.parameter_count() * 8;
  if (p.bytes.size() != p.payload_start + need) {
    throw CheckpointError("checkpoint: payload is " + std::to_string(p.bytes.size() - p.payload_start) +
                          " bytes, expected " + std::to_string(need));
  }
  std::vector<double> values(store.parameter_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<double>(get_u64(p.bytes.data() + p.payload_start + 8 * i));
  }
  store.set_flat_values(values);
  return model;
}

}  // namespace graphadapt
