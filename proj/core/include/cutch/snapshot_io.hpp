// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "cutch/rom.hpp"

namespace cutch {

// Binary snapshot container: magic "CHSNAP1\0", uint32 rows, uint32 cols,
// then rows*cols doubles in column-major order, all little-endian. Column
// metadata (mu, time index) lives in a JSON sidecar at <path>.json.
void write_snapshots(const std::string& path, const SnapshotMatrix& snapshots);
SnapshotMatrix read_snapshots(const std::string& path);

}  // namespace cutch
