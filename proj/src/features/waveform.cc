// Copyright 2026 The MASS Authors
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

#include "mass/features/waveform.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "mass/common.h"

namespace mass::features {
namespace {

uint32_t ReadU32(const unsigned char* p) {
  return uint32_t{p[0]} | uint32_t{p[1]} << 8 | uint32_t{p[2]} << 16 | uint32_t{p[3]} << 24;
}
uint16_t ReadU16(const unsigned char* p) { return uint16_t(p[0] | p[1] << 8); }

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

void Waveform::Validate() const {
  if (sample_rate <= 0) throw InputError("waveform: sample_rate must be positive");
  for (double s : samples) {
    if (!std::isfinite(s)) throw InputError("waveform: non-finite sample");
  }
}

Waveform ReadWav(const std::filesystem::path& path, int expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw FormatError(where + "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint32_t chunk_size = ReadU32(data + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes.size() && std::memcmp(data + pos, "data", 4) != 0) {
      throw FormatError(where + "truncated chunk");
    }
    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError(where + "short fmt chunk");
      format = ReadU16(data + body);
      channels = ReadU16(data + body + 2);
      rate = ReadU32(data + body + 4);
      bits = ReadU16(data + body + 14);
      have_fmt = true;
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      if (!have_fmt) throw FormatError(where + "data chunk before fmt chunk");
      if (format != 1 || bits != 16) throw FormatError(where + "only PCM16 is supported");
      if (channels != 1) throw FormatError(where + "only mono audio is supported");
      if (static_cast<int>(rate) != expected_rate) {
        throw FormatError(where + "sample rate " + std::to_string(rate) + " Hz, expected " +
                          std::to_string(expected_rate) + " Hz (no resampling)");
      }
      const size_t n_bytes = std::min<size_t>(chunk_size, bytes.size() - body);
      Waveform w;
      w.sample_rate = static_cast<int>(rate);
      w.samples.resize(n_bytes / 2);
      for (size_t i = 0; i < w.samples.size(); ++i) {
        const auto v = static_cast<int16_t>(ReadU16(data + body + 2 * i));
        w.samples[i] = v / 32768.0;
      }
      return w;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  throw FormatError(where + "no data chunk");
}

void WriteWav(const std::filesystem::path& path, const Waveform& wave) {
  wave.Validate();
  const auto n = static_cast<uint32_t>(wave.samples.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(wave.sample_rate));
  PutU32(out, static_cast<uint32_t>(wave.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, 2 * n);
  for (double s : wave.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<int16_t>(std::lround(std::clamp(c * 32768.0, -32768.0, 32767.0)));
    PutU16(out, static_cast<uint16_t>(v));
  }

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

double RmsDbfs(const Waveform& wave) {
  if (wave.samples.empty()) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double s : wave.samples) acc += s * s;
  const double rms = std::sqrt(acc / wave.samples.size());
  return 20.0 * std::log10(std::max(rms, 1e-300));
}

}  // namespace mass::features
