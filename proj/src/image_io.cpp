// Copyright 2026 The LQPAT Authors
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

#include <cctype>
#include <fstream>
#include <iterator>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <optional>
#include <string>

#include "lqpat/error.hpp"
#include "lqpat/image.hpp"

namespace lqpat {
namespace {

// Netpbm header tokens are whitespace separated; '#' starts a comment that
// runs to end of line.
class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::optional<std::size_t> next_number() {
    skip_space_and_comments();
    std::size_t value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1u << 30)) return std::nullopt;
      any = true;
      ++pos_;
    }
    if (!any) return std::nullopt;
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  bool consume_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) return false;
    ++pos_;
    return true;
  }

  std::size_t position() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm_p5(std::span<const std::uint8_t> bytes) {
  PnmHeaderReader reader(bytes);
  const auto width = reader.next_number();
  const auto height = reader.next_number();
  const auto maxval = reader.next_number();
  if (!width || !height || !maxval || !reader.consume_single_space()) {
    throw IoError("malformed PGM header");
  }
  if (*width == 0 || *height == 0) throw IoError("PGM has zero dimension");
  if (*maxval == 0 || *maxval > 255) {
    throw IoError("unsupported PGM maxval " + std::to_string(*maxval) + " (8-bit only)");
  }
  const std::size_t count = *width * *height;
  const std::size_t offset = reader.position();
  if (bytes.size() - offset < count) throw IoError("truncated PGM raster");

  std::vector<std::uint8_t> pixels(bytes.begin() + offset, bytes.begin() + offset + count);
  if (*maxval != 255) {
    for (auto& p : pixels) {
      if (p > *maxval) throw IoError("PGM sample exceeds maxval");
      p = static_cast<std::uint8_t>((p * 255u + *maxval / 2) / *maxval);
    }
  }
  return GrayImage(*width, *height, std::move(pixels));
}

GrayImage decode_with_opencv(std::span<const std::uint8_t> bytes) {
  cv::Mat decoded;
  try {
    const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<std::uint8_t*>(bytes.data()));
    decoded = cv::imdecode(buf, cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw IoError(std::string("image decode failed: ") + e.what());
  }
  if (decoded.empty() || decoded.type() != CV_8UC3) {
    throw IoError("unrecognized or corrupt image data");
  }
  const auto width = static_cast<std::size_t>(decoded.cols);
  const auto height = static_cast<std::size_t>(decoded.rows);
  std::vector<Rgb> rgb(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const auto* src = decoded.ptr<cv::Vec3b>(static_cast<int>(r));
    for (std::size_t c = 0; c < width; ++c) {
      // OpenCV stores BGR.
      rgb[r * width + c] = Rgb{src[c][2], src[c][1], src[c][0]};
    }
  }
  return to_grayscale(width, height, rgb);
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw IoError("image data too short");
  if (bytes[0] == 'P' && bytes[1] == '5') return decode_pgm_p5(bytes);
  return decode_with_opencv(bytes);
}

GrayImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace lqpat
