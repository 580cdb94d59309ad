// Copyright (c) 2026 The corpusforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "corpusforge/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace corpusforge {
namespace {

std::uint32_t le32(const char* p) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(p[0])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[3])) << 24;
}

std::uint16_t le16(const char* p) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(p[0]) |
                                    static_cast<unsigned char>(p[1]) << 8);
}

void put32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

void put16(std::ofstream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  out.write(b, 2);
}

}  // namespace

AudioRecord AudioRecord::slice(std::size_t first, std::size_t last) const {
  last = std::min(last, samples.size());
  first = std::min(first, last);
  AudioRecord out;
  out.sample_rate = sample_rate;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

AudioRecord read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::OpenFailed, path.string());
  std::array<char, 12> riff{};
  if (!in.read(riff.data(), riff.size()) || std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
    throw IoError(IoErrc::BadFormat, path.string() + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  AudioRecord rec;
  std::uint16_t channels = 0, bits = 0, format = 0;
  std::array<char, 8> chunk{};
  while (in.read(chunk.data(), chunk.size())) {
    const std::uint32_t size = le32(chunk.data() + 4);
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      std::string fmt(size, '\0');
      if (size < 16 || !in.read(fmt.data(), size)) {
        throw IoError(IoErrc::BadFormat, path.string() + ": bad fmt chunk");
      }
      format = le16(fmt.data());
      channels = le16(fmt.data() + 2);
      rec.sample_rate = static_cast<int>(le32(fmt.data() + 4));
      bits = le16(fmt.data() + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      if (!have_fmt) throw IoError(IoErrc::BadFormat, path.string() + ": data before fmt");
      if (format != 1 || channels != 1 || bits != 16) {
        throw IoError(IoErrc::BadFormat,
                      path.string() + ": only 16-bit PCM mono is supported");
      }
      std::string data(size, '\0');
      in.read(data.data(), size);
      const auto got = static_cast<std::size_t>(in.gcount());
      rec.samples.resize(got / 2);
      for (std::size_t i = 0; i < rec.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(data.data() + 2 * i));
        rec.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      if (rec.sample_rate <= 0) throw IoError(IoErrc::BadFormat, path.string() + ": bad rate");
      return rec;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
    if (size & 1 && std::memcmp(chunk.data(), "fmt ", 4) == 0) in.seekg(1, std::ios::cur);
  }
  throw IoError(IoErrc::BadFormat, path.string() + ": no data chunk");
}

void write_wav(const std::filesystem::path& path, const AudioRecord& record) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::OpenFailed, path.string());
  const auto data_bytes = static_cast<std::uint32_t>(record.samples.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(record.sample_rate));
  put32(out, static_cast<std::uint32_t>(record.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_bytes);
  for (float s : record.samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    const auto v = static_cast<std::int16_t>(
        std::clamp(std::lround(c * 32768.0f), -32768L, 32767L));
    put16(out, static_cast<std::uint16_t>(v));
  }
  if (!out) throw IoError(IoErrc::WriteFailed, path.string());
}

}  // namespace corpusforge
