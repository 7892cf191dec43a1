#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trajlab/scenario.hpp"
#include "trajlab/trajectory.hpp"

namespace trajlab {

/// Per-dimension standard deviations used to scale trajectories. Computed on
/// training data only; evaluation code receives them explicitly (they travel
/// inside checkpoints) and never recomputes them from test data.
struct NormalizationStats {
    std::array<double, 3> std{1.0, 1.0, 1.0};
};

struct ManifestEntry {
    std::string path;  // relative to the dataset root
    std::string split;  // "train" or "test"
    int label = 0;
    std::uint64_t seed = 0;
    int frames = 0;
};

struct DatasetManifest {
    int format_version = 1;
    double frame_rate = 24.0;
    std::uint64_t master_seed = 0;
    std::string config_hash;
    std::vector<ManifestEntry> entries;
    std::string root_dir;  // set on load/generate, not serialized

    int count(const std::string& split, int label) const;
};

/// Simulate n scenarios per class per split, write one CSV per trajectory
/// plus manifest.json under out_dir. Train and test draw from disjoint seed
/// substreams of master_seed; regeneration is byte-identical.
DatasetManifest generate_dataset(int n_per_class_train, int n_per_class_test,
                                 std::uint64_t master_seed, const GeneratorConfig& gen,
                                 const SimConfig& sim, const std::string& out_dir,
                                 int workers = 1);

/// Read manifest.json from a dataset directory and verify that every listed
/// file exists and the counts are consistent.
DatasetManifest load_manifest(const std::string& dir);

std::vector<Trajectory> load_split(const DatasetManifest& manifest, const std::string& split);

/// Pooled per-dimension population standard deviation over all frames of the
/// given trajectories, floored at 1e-8.
NormalizationStats compute_normalization(const std::vector<Trajectory>& trajectories);

/// Divide each dimension by its standard deviation. No mean subtraction.
Trajectory normalize(const Trajectory& trajectory, const NormalizationStats& stats);

enum class InputDims { xyz, z_only };

int feature_count(InputDims dims);
std::string to_string(InputDims dims);
InputDims dims_from_string(const std::string& text);

/// Fixed-length model input: truncate to the first target_len frames or
/// right-pad with zero frames, keeping the true (pre-pad) length.
struct PreparedSequence {
    Eigen::MatrixXd features;  // feature_count x target_len
    int true_len = 0;
};

PreparedSequence prepare_sequence(const Trajectory& trajectory, int target_len, InputDims dims);

}  // namespace trajlab
