// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "snapshot files are little-endian; big-endian hosts are unsupported");

namespace cutch {

namespace {
constexpr char kMagic[8] = {'C', 'H', 'S', 'N', 'A', 'P', '1', '\0'};
}

void write_snapshots(const std::string& path, const SnapshotMatrix& snapshots) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshots: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t rows = static_cast<std::uint32_t>(snapshots.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(snapshots.cols());
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(snapshots.data.data()),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!out) throw std::runtime_error("write_snapshots: write failed for " + path);

  nlohmann::json sidecar;
  sidecar["field"] = std::string(1, snapshots.field);
  auto& columns = sidecar["columns"];
  columns = nlohmann::json::array();
  for (const auto& m : snapshots.meta) {
    columns.push_back({{"mu", m.mu}, {"time_index", m.time_index}});
  }
  std::ofstream meta(path + ".json");
  if (!meta) throw std::runtime_error("write_snapshots: cannot open " + path + ".json");
  meta << sidecar.dump(2) << "\n";
}

SnapshotMatrix read_snapshots(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshots: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("read_snapshots: bad magic in " + path);
  }
  std::uint32_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  SnapshotMatrix snapshots;
  snapshots.data.resize(rows, cols);
  in.read(reinterpret_cast<char*>(snapshots.data.data()),
          static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!in) throw std::runtime_error("read_snapshots: truncated file " + path);

  std::ifstream meta(path + ".json");
  if (meta) {
    nlohmann::json sidecar;
    meta >> sidecar;
    if (sidecar.contains("field")) {
      const std::string field = sidecar["field"].get<std::string>();
      if (!field.empty()) snapshots.field = field[0];
    }
    if (sidecar.contains("columns")) {
      for (const auto& c : sidecar["columns"]) {
        snapshots.meta.push_back({c.value("mu", 0.0), c.value("time_index", 0)});
      }
    }
  }
  return snapshots;
}

}  // namespace cutch
