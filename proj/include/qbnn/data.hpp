#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>

namespace qbnn::data {

/// Image rows in [0, 1] (raw bytes / 255) with binarized labels:
/// 1 for the digit '0', 0 for everything else.
struct Dataset {
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> images;
    Eigen::VectorXi labels;
    std::string split_tag;

    Eigen::Index size() const { return images.rows(); }
    Eigen::Index features() const { return images.cols(); }
};

/// Parses the big-endian IDX pair (magic 0x00000803 for images with
/// count/rows/cols dimensions, 0x00000801 for labels). Bad magic, truncation,
/// and image/label count mismatches raise parse_error with distinct messages.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Writes the dataset back to an IDX pair (28x28 assumed when the feature
/// count is 784, otherwise a square side is required). Positive labels are
/// stored as digit 0, negative as digit 1, so load_idx(write_idx(d)) == d.
void write_idx(const Dataset& dataset, const std::string& images_path,
               const std::string& labels_path, int rows, int cols);

/// Seeded shuffle, then partition: the first size-val_size samples of the
/// shuffled order form the training split, the remainder the validation split.
std::pair<Dataset, Dataset> split(const Dataset& dataset, Eigen::Index val_size,
                                  std::uint64_t seed);

}  // namespace qbnn::data
