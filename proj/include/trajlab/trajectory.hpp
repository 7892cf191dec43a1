#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajlab/geom.hpp"

namespace trajlab {

/// Labeled time series of center-of-mass world coordinates.
struct Trajectory {
    std::vector<Vec3> samples;  // meters, one per frame
    double frame_rate = 24.0;
    int label = 0;  // heavy = 0, light = 1
    std::uint64_t scenario_seed = 0;
    bool z_only = false;  // set when imported data carried only the z channel

    void validate() const;  // >= 2 samples, all finite
};

/// Write in the dataset format: header `frame,x,y,z`, one row per frame,
/// values with 12 significant digits.
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

/// Read a file produced by write_trajectory_csv. Label and seed come from the
/// manifest, not the file.
Trajectory read_trajectory_csv(const std::string& path, double frame_rate, int label,
                               std::uint64_t seed);

/// Import an externally tracked trajectory for inference. Rows carry either
/// three columns (x,y,z) or a single column (z, with x = y = 0 and the z_only
/// flag set). An optional non-numeric header line is skipped.
Trajectory load_external_trajectory(const std::string& path, double frame_rate);

}  // namespace trajlab
