#include "qbnn/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "qbnn/errors.hpp"
#include "qbnn/rng.hpp"

namespace qbnn::data {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path, const char* what) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw parse_error(path + ": truncated file while reading " + what);
    return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
           (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                    static_cast<unsigned char>(v >> 16),
                                    static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw parse_error(images_path + ": cannot open file");
    if (const auto magic = read_u32_be(img, images_path, "magic"); magic != kImagesMagic)
        throw parse_error(images_path + ": bad magic 0x" + [&] {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%08x", magic);
            return std::string(buf);
        }() + ", expected 0x00000803 (IDX images)");
    const std::uint32_t count = read_u32_be(img, images_path, "image count");
    const std::uint32_t rows = read_u32_be(img, images_path, "row count");
    const std::uint32_t cols = read_u32_be(img, images_path, "column count");

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw parse_error(labels_path + ": cannot open file");
    if (const auto magic = read_u32_be(lab, labels_path, "magic"); magic != kLabelsMagic)
        throw parse_error(labels_path + ": bad magic, expected 0x00000801 (IDX labels)");
    const std::uint32_t label_count = read_u32_be(lab, labels_path, "label count");
    if (label_count != count)
        throw parse_error(labels_path + ": " + std::to_string(label_count) +
                          " labels but " + std::to_string(count) + " images in " +
                          images_path);

    const std::size_t pixels = std::size_t{rows} * cols;
    std::vector<unsigned char> image_buf(pixels);
    std::vector<unsigned char> label_buf(count);
    if (!lab.read(reinterpret_cast<char*>(label_buf.data()), count))
        throw parse_error(labels_path + ": truncated file while reading labels");

    Dataset d;
    d.split_tag = "full";
    d.images.resize(count, static_cast<Eigen::Index>(pixels));
    d.labels.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!img.read(reinterpret_cast<char*>(image_buf.data()), pixels))
            throw parse_error(images_path + ": truncated file while reading image " +
                              std::to_string(i));
        for (std::size_t p = 0; p < pixels; ++p)
            d.images(i, static_cast<Eigen::Index>(p)) = image_buf[p] / 255.0f;
        d.labels[i] = label_buf[i] == 0 ? 1 : 0;
    }
    return d;
}

void write_idx(const Dataset& dataset, const std::string& images_path,
               const std::string& labels_path, int rows, int cols) {
    if (static_cast<Eigen::Index>(rows) * cols != dataset.features())
        throw std::invalid_argument("write_idx: rows*cols does not match feature count");
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw parse_error(images_path + ": cannot open for writing");
    write_u32_be(img, kImagesMagic);
    write_u32_be(img, static_cast<std::uint32_t>(dataset.size()));
    write_u32_be(img, static_cast<std::uint32_t>(rows));
    write_u32_be(img, static_cast<std::uint32_t>(cols));
    std::vector<unsigned char> buf(dataset.features());
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        for (Eigen::Index p = 0; p < dataset.features(); ++p)
            buf[p] = static_cast<unsigned char>(
                std::lround(std::clamp(dataset.images(i, p), 0.0f, 1.0f) * 255.0f));
        img.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    }

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw parse_error(labels_path + ": cannot open for writing");
    write_u32_be(lab, kLabelsMagic);
    write_u32_be(lab, static_cast<std::uint32_t>(dataset.size()));
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        const unsigned char digit = dataset.labels[i] ? 0 : 1;
        lab.write(reinterpret_cast<const char*>(&digit), 1);
    }
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, Eigen::Index val_size,
                                  std::uint64_t seed) {
    if (val_size < 0 || val_size >= dataset.size())
        throw std::invalid_argument("split: validation size " + std::to_string(val_size) +
                                    " out of range for " + std::to_string(dataset.size()) +
                                    " samples");
    std::vector<Eigen::Index> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (Eigen::Index i = dataset.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

    const Eigen::Index train_size = dataset.size() - val_size;
    Dataset train, val;
    train.split_tag = "train";
    val.split_tag = "validation";
    train.images.resize(train_size, dataset.features());
    train.labels.resize(train_size);
    val.images.resize(val_size, dataset.features());
    val.labels.resize(val_size);
    for (Eigen::Index i = 0; i < train_size; ++i) {
        train.images.row(i) = dataset.images.row(order[i]);
        train.labels[i] = dataset.labels[order[i]];
    }
    for (Eigen::Index i = 0; i < val_size; ++i) {
        val.images.row(i) = dataset.images.row(order[train_size + i]);
        val.labels[i] = dataset.labels[order[train_size + i]];
    }
    return {std::move(train), std::move(val)};
}

}  // namespace qbnn::data
