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

#include "mass/training/dataset.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "mass/binary_io.h"
#include "mass/features/analysis_json.h"
#include "mass/features/feature_file.h"
#include "mass/hash.h"

namespace mass::training {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMinFeatureStd = 1e-6;

bool IsWav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

struct Job {
  fs::path wav;
  int attribute;
  std::string id;
};

struct JobResult {
  std::optional<features::AcousticFeatures> feats;
  fs::path feature_path;
  bool cache_hit = false;
  std::string warning;
};

JobResult RunJob(const Job& job, const features::AnalysisConfig& cfg, const fs::path& cache_dir) {
  JobResult r;
  try {
    r.feature_path = cache_dir / (FeatureCacheKey(job.wav, cfg) + ".massfeat");
    if (fs::exists(r.feature_path)) {
      try {
        r.feats = features::ReadFeatureFile(r.feature_path);
        r.cache_hit = true;
        return r;
      } catch (const Error&) {
        // Stale or damaged cache entry: extract again.
      }
    }
    const features::Waveform wave = features::ReadWav(job.wav, cfg.sample_rate);
    features::WriteFeatureFile(r.feature_path, features::Analyze(wave, cfg));
    // Statistics come from the stored (float32) values so a cache hit and a
    // fresh extraction give the same index.
    r.feats = features::ReadFeatureFile(r.feature_path);
  } catch (const Error& e) {
    r.feats.reset();
    r.warning = job.wav.string() + ": " + e.what();
  }
  return r;
}

json StatsToJson(const features::F0Statistics& s) {
  return {{"mean_log_f0", s.mean_log_f0},
          {"std_log_f0", s.std_log_f0},
          {"n_voiced_frames", s.n_voiced_frames}};
}

}  // namespace

std::string FeatureCacheKey(const fs::path& wav, const features::AnalysisConfig& cfg) {
  return Sha256Hex(Sha256File(wav) + features::AnalysisConfigToJson(cfg).dump());
}

void DatasetIndex::Validate(bool check_files) const {
  const int k = num_classes();
  if (k < 1) throw DatasetError("dataset has no attributes");
  std::vector<int> counts(static_cast<size_t>(k), 0);
  for (const auto& e : entries) {
    if (e.attribute < 0 || e.attribute >= k) {
      throw DatasetError("entry " + e.id + " has attribute index out of range");
    }
    if (e.frames <= 0) throw DatasetError("entry " + e.id + " has no frames");
    ++counts[static_cast<size_t>(e.attribute)];
    if (check_files) {
      if (!fs::exists(e.feature_path)) {
        throw DatasetError("feature file missing: " + e.feature_path.string());
      }
      const auto feats = features::ReadFeatureFile(e.feature_path);
      if (feats.frames() != e.frames) {
        throw DatasetError("feature file " + e.feature_path.string() + " frame count changed");
      }
    }
  }
  for (int a = 0; a < k; ++a) {
    if (counts[static_cast<size_t>(a)] == 0) {
      throw DatasetError("attribute '" + attribute_names[static_cast<size_t>(a)] + "' has no entries");
    }
  }
  if (mcc_mean.size() != kMccDim || mcc_std.size() != kMccDim) {
    throw DatasetError("index statistics must have 36 entries");
  }
  if ((mcc_std.array() <= 0).any()) throw DatasetError("index mcc_std must be positive");
  if (static_cast<int>(f0_stats.size()) != k) {
    throw DatasetError("index needs F0 statistics for every attribute");
  }
}

DatasetIndex IngestDataset(const fs::path& root, const features::AnalysisConfig& cfg,
                           const IngestOptions& options, IngestReport* report) {
  cfg.Validate();
  if (!fs::is_directory(root)) throw DatasetError("dataset root is not a directory: " + root.string());

  const fs::path cache_dir = options.cache_dir.empty() ? root / ".mass_cache" : options.cache_dir;
  std::error_code ec;
  std::vector<fs::path> attr_dirs;
  for (const auto& d : fs::directory_iterator(root)) {
    if (!d.is_directory() || d.path().filename().string().front() == '.') continue;
    if (fs::exists(cache_dir) && fs::equivalent(d.path(), cache_dir, ec)) continue;
    attr_dirs.push_back(d.path());
  }
  std::sort(attr_dirs.begin(), attr_dirs.end());
  if (attr_dirs.empty()) throw DatasetError("no attribute directories under " + root.string());

  DatasetIndex index;
  index.analysis = cfg;
  std::vector<Job> jobs;
  for (size_t a = 0; a < attr_dirs.size(); ++a) {
    const std::string name = attr_dirs[a].filename().string();
    index.attribute_names.push_back(name);
    std::vector<fs::path> wavs;
    for (const auto& f : fs::directory_iterator(attr_dirs[a])) {
      if (f.is_regular_file() && IsWav(f.path())) wavs.push_back(f.path());
    }
    std::sort(wavs.begin(), wavs.end());
    if (wavs.empty()) throw DatasetError("attribute directory has no wav files: " + attr_dirs[a].string());
    for (const auto& w : wavs) jobs.push_back({w, static_cast<int>(a), name + "/" + w.stem().string()});
  }

  fs::create_directories(cache_dir);

  std::vector<JobResult> results(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) results[i] = RunJob(jobs[i], cfg, cache_dir);
  };
  const int n_threads = std::clamp(options.jobs, 1, static_cast<int>(jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  IngestReport local;
  IngestReport& rep = report ? *report : local;
  rep = IngestReport{};
  std::vector<std::vector<features::AcousticFeatures>> by_attr(attr_dirs.size());
  long total_frames = 0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kMccDim);
  for (size_t i = 0; i < jobs.size(); ++i) {
    JobResult& r = results[i];
    if (!r.feats) {
      ++rep.skipped;
      rep.warnings.push_back(r.warning);
      spdlog::warn("skipping {}", r.warning);
      continue;
    }
    (r.cache_hit ? rep.cache_hits : rep.extracted)++;
    index.entries.push_back({jobs[i].id, jobs[i].attribute, fs::absolute(r.feature_path), r.feats->frames()});
    sum += r.feats->mcc.colwise().sum().transpose();
    total_frames += r.feats->frames();
    by_attr[static_cast<size_t>(jobs[i].attribute)].push_back(std::move(*r.feats));
  }
  for (size_t a = 0; a < by_attr.size(); ++a) {
    if (by_attr[a].empty()) {
      throw DatasetError("no readable recordings in " + attr_dirs[a].string());
    }
  }

  index.mcc_mean = sum / static_cast<double>(total_frames);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(kMccDim);
  for (const auto& group : by_attr) {
    for (const auto& f : group) {
      for (Eigen::Index t = 0; t < f.mcc.rows(); ++t) {
        sq += (f.mcc.row(t).transpose() - index.mcc_mean).array().square().matrix();
      }
    }
  }
  index.mcc_std = (sq / static_cast<double>(total_frames)).array().sqrt().max(kMinFeatureStd).matrix();
  for (const auto& group : by_attr) {
    index.f0_stats.push_back(features::ComputeF0Statistics(std::span<const features::AcousticFeatures>(group)));
  }
  index.Validate();
  return index;
}

json IndexToJson(const DatasetIndex& index) {
  json j;
  j["format"] = "mass-dataset-index";
  j["version"] = 1;
  j["attribute_names"] = index.attribute_names;
  j["analysis"] = features::AnalysisConfigToJson(index.analysis);
  j["mcc_mean"] = std::vector<double>(index.mcc_mean.data(), index.mcc_mean.data() + index.mcc_mean.size());
  j["mcc_std"] = std::vector<double>(index.mcc_std.data(), index.mcc_std.data() + index.mcc_std.size());
  j["f0_stats"] = json::array();
  for (const auto& s : index.f0_stats) j["f0_stats"].push_back(StatsToJson(s));
  j["entries"] = json::array();
  for (const auto& e : index.entries) {
    j["entries"].push_back({{"id", e.id},
                            {"attribute", e.attribute},
                            {"feature_path", e.feature_path.string()},
                            {"frames", e.frames}});
  }
  return j;
}

DatasetIndex IndexFromJson(const json& j) {
  try {
    if (j.at("format") != "mass-dataset-index") throw FormatError("not a dataset index");
    if (j.at("version") != 1) throw VersionError("unsupported dataset index version");
    DatasetIndex index;
    index.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
    index.analysis = features::AnalysisConfigFromJson(j.at("analysis"));
    const auto mean = j.at("mcc_mean").get<std::vector<double>>();
    const auto sd = j.at("mcc_std").get<std::vector<double>>();
    index.mcc_mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    index.mcc_std = Eigen::Map<const Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
    for (const auto& s : j.at("f0_stats")) {
      index.f0_stats.push_back({s.at("mean_log_f0").get<double>(), s.at("std_log_f0").get<double>(),
                                s.at("n_voiced_frames").get<long>()});
    }
    for (const auto& e : j.at("entries")) {
      index.entries.push_back({e.at("id").get<std::string>(), e.at("attribute").get<int>(),
                               e.at("feature_path").get<std::string>(), e.at("frames").get<int>()});
    }
    index.Validate();
    return index;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed dataset index: ") + e.what());
  }
}

void WriteIndex(const DatasetIndex& index, const fs::path& path) {
  WriteFileAtomic(path.string(), IndexToJson(index).dump(2) + "\n");
}

DatasetIndex ReadIndex(const fs::path& path) {
  const std::string text = ReadFileBytes(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return IndexFromJson(j);
}

}  // namespace mass::training
