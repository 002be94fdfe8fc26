// Copyright 2026 The fracsed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/problems.hpp"

namespace fracsed {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

void put_be32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

void check_header(const std::vector<std::uint8_t>& b, std::size_t header,
                  std::uint32_t magic, const std::filesystem::path& path) {
  if (b.size() < 4) {
    throw FormatError(path.string() + ": truncated header, expected at least " +
                      std::to_string(header) + " bytes, got " + std::to_string(b.size()));
  }
  const std::uint32_t got = be32(b, 0);
  if (got != magic) {
    throw FormatError(path.string() + ": bad magic " + std::to_string(got) + ", expected " +
                      std::to_string(magic));
  }
  if (b.size() < header) {
    throw FormatError(path.string() + ": truncated header, expected at least " +
                      std::to_string(header) + " bytes, got " + std::to_string(b.size()));
  }
}

void check_payload(std::size_t expected, std::size_t actual, const std::filesystem::path& path) {
  if (actual < expected) {
    throw FormatError(path.string() + ": truncated payload, expected " +
                      std::to_string(expected) + " bytes, got " + std::to_string(actual));
  }
  if (actual > expected) {
    throw FormatError(path.string() + ": " + std::to_string(actual - expected) +
                      " trailing bytes after the declared payload of " +
                      std::to_string(expected));
  }
}

void spill(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  const auto b = slurp(path);
  check_header(b, 16, kIdxImageMagic, path);
  IdxImages img;
  img.count = be32(b, 4);
  img.rows = be32(b, 8);
  img.cols = be32(b, 12);
  const std::size_t expected =
      std::size_t{img.count} * std::size_t{img.rows} * std::size_t{img.cols};
  check_payload(expected, b.size() - 16, path);
  img.pixels.assign(b.begin() + 16, b.end());
  return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  const auto b = slurp(path);
  check_header(b, 8, kIdxLabelMagic, path);
  const std::size_t count = be32(b, 4);
  check_payload(count, b.size() - 8, path);
  return {b.begin() + 8, b.end()};
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  const std::size_t expected =
      std::size_t{images.count} * std::size_t{images.rows} * std::size_t{images.cols};
  if (images.pixels.size() != expected) {
    throw DimensionError("write_idx_images: " + std::to_string(images.pixels.size()) +
                         " pixels for " + std::to_string(expected) + " declared");
  }
  std::vector<std::uint8_t> b;
  b.reserve(16 + expected);
  put_be32(b, kIdxImageMagic);
  put_be32(b, images.count);
  put_be32(b, images.rows);
  put_be32(b, images.cols);
  b.insert(b.end(), images.pixels.begin(), images.pixels.end());
  spill(path, b);
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> b;
  b.reserve(8 + labels.size());
  put_be32(b, kIdxLabelMagic);
  put_be32(b, static_cast<std::uint32_t>(labels.size()));
  b.insert(b.end(), labels.begin(), labels.end());
  spill(path, b);
}

LabeledBatch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                      std::size_t classes, std::size_t limit) {
  const IdxImages img = read_idx_images(images);
  const auto lab = read_idx_labels(labels);
  if (lab.size() != img.count) {
    throw FormatError("count mismatch: " + images.string() + " holds " +
                      std::to_string(img.count) + " images, " + labels.string() + " holds " +
                      std::to_string(lab.size()) + " labels");
  }
  const std::size_t n = limit == 0 ? img.count : std::min<std::size_t>(limit, img.count);
  LabeledBatch out;
  out.features = std::size_t{img.rows} * std::size_t{img.cols};
  out.classes = classes;
  out.inputs.resize(n * out.features);
  for (std::size_t i = 0; i < out.inputs.size(); ++i) out.inputs[i] = img.pixels[i] / 255.0;
  out.labels.assign(lab.begin(), lab.begin() + static_cast<std::ptrdiff_t>(n));
  out.validate();
  return out;
}

}  // namespace fracsed
