#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "histofeat/classifiers.hpp"

namespace histofeat {

// HFM1 model container, little-endian throughout:
//
//   bytes 0..3   magic "HFM1"
//   u32          format version (1)
//   u8           classifier kind (0 DT, 1 kNN, 2 SVM, 3 RF)
//   u8           has scaler (0/1)
//   [scaler]     u64 width, width x f64 mean, width x f64 stddev
//   payload      per kind:
//     tree    u64 n_features, u64 n_nodes, per node:
//             u32 feature, f64 threshold, u32 left, u32 right, u8 label,
//             u32 count_normal, u32 count_abnormal
//     forest  u64 n_trees, per tree: u64 seed, tree payload
//     knn     u64 k, u64 rows, u64 cols, rows*cols f64, rows x u8 label
//     svm     f64 gamma, f64 bias, u8 converged, u64 iterations,
//             u64 rows, u64 cols, rows*cols f64 support vectors, rows x f64 coef
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const Pipeline& pipeline);
/// Throws Format on bad magic, unknown version or truncated input.
Pipeline deserialize_model(const std::string& bytes);

void save_model(const Pipeline& pipeline, const std::filesystem::path& path);
Pipeline load_model(const std::filesystem::path& path);

}  // namespace histofeat
