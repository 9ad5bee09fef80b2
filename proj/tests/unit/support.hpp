#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "cwknn/idx.hpp"
#include "cwknn/image.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return CWKNN_DATA_DIR; }

inline std::filesystem::path mnist(const std::string& name) { return data_dir() / "mnist" / name; }

inline const cwknn::LabeledSet& mnist_train() {
  static const cwknn::LabeledSet set =
      cwknn::load_labeled_set(mnist("train-images-idx3-ubyte.gz"), mnist("train-labels-idx1-ubyte.gz"));
  return set;
}

inline const cwknn::LabeledSet& mnist_test() {
  static const cwknn::LabeledSet set =
      cwknn::load_labeled_set(mnist("t10k-images-idx3-ubyte.gz"), mnist("t10k-labels-idx1-ubyte.gz"));
  return set;
}

inline cwknn::GrayImage random_image(std::size_t w, std::size_t h, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(w * h);
  for (auto& v : px) v = u(gen);
  return cwknn::GrayImage(w, h, std::move(px));
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("cwknn-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
