#pragma once

#include <filesystem>

#include "zk/field.hpp"

namespace zk {

// ZKF1 field snapshot: magic "ZKF1", little-endian u32 triple
// (n_x, n_y1, n_y2), f64 triple (L_x, L_y1, L_y2), f64 time stamp, then
// n_x*n_y1*n_y2 f64 values row-major with x slowest. Round-trips bit-exactly.
struct Snapshot {
  RealField field;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const RealField& u,
                    double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace zk
