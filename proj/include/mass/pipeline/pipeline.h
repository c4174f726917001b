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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mass/core/model.h"
#include "mass/features/analysis.h"

namespace mass::pipeline {

// Produces source speech for a text. Either an external command or a
// lookup table of prerecorded files.
class TtsSource {
 public:
  enum class Kind { kExternalCommand, kFilePassthrough };

  // The template must contain {out}; {text} is replaced by the shell-quoted
  // text. The command must write a 16 kHz mono PCM16 wav to {out}.
  static TtsSource Command(std::string command_template);
  static TtsSource Files(std::map<std::string, std::filesystem::path> table);

  Kind kind() const { return kind_; }
  features::Waveform Render(const std::string& text, const std::filesystem::path& scratch_dir) const;

 private:
  Kind kind_ = Kind::kFilePassthrough;
  std::string command_;
  std::map<std::string, std::filesystem::path> table_;
};

std::string ShellQuote(const std::string& s);

// Replaces the MCC with the generator output and maps F0 between the
// model's per-attribute statistics. Voicing, aperiodicity and the frame
// count are carried over unchanged.
features::AcousticFeatures ConvertUtterance(const core::ConversionModel& model,
                                            const features::AcousticFeatures& feats,
                                            const core::AttributeLabel& target,
                                            const core::AttributeLabel& source);

// Feature sets tagged by the stage that produced them. Only the pipeline
// stages can create them, so the conversion order is fixed by the types:
// analysis -> emotional -> speaker -> synthesis.
class SourceFeatures {
 public:
  const features::AcousticFeatures& features() const { return f_; }

 private:
  friend class Analyzer;
  explicit SourceFeatures(features::AcousticFeatures f) : f_(std::move(f)) {}
  features::AcousticFeatures f_;
};

class EmotionalFeatures {
 public:
  const features::AcousticFeatures& features() const { return f_; }

 private:
  friend class EmotionalConverter;
  explicit EmotionalFeatures(features::AcousticFeatures f) : f_(std::move(f)) {}
  features::AcousticFeatures f_;
};

class SpeakerFeatures {
 public:
  const features::AcousticFeatures& features() const { return f_; }

 private:
  friend class SpeakerConverter;
  explicit SpeakerFeatures(features::AcousticFeatures f) : f_(std::move(f)) {}
  features::AcousticFeatures f_;
};

class Analyzer {
 public:
  explicit Analyzer(features::AnalysisConfig cfg) : cfg_(cfg) {}
  SourceFeatures Analyze(const features::Waveform& wave) const;

 private:
  features::AnalysisConfig cfg_;
};

// DEVC stage.
class EmotionalConverter {
 public:
  explicit EmotionalConverter(std::shared_ptr<const core::ConversionModel> model);
  EmotionalFeatures Convert(const SourceFeatures& in, const std::string& emotion,
                            const std::string& source_emotion) const;
  const core::ConversionModel& model() const { return *model_; }

 private:
  std::shared_ptr<const core::ConversionModel> model_;
};

// DSVC stage.
class SpeakerConverter {
 public:
  explicit SpeakerConverter(std::shared_ptr<const core::ConversionModel> model);
  SpeakerFeatures Convert(const EmotionalFeatures& in, const std::string& speaker,
                          const std::string& source_speaker) const;
  const core::ConversionModel& model() const { return *model_; }

 private:
  std::shared_ptr<const core::ConversionModel> model_;
};

features::Waveform SynthesizeOutput(const SpeakerFeatures& feats, const features::AnalysisConfig& cfg);

struct PipelineConfig {
  std::filesystem::path devc_model;
  std::filesystem::path dsvc_model;
  features::AnalysisConfig analysis;
  std::string emotion;
  std::string speaker;
  // Empty: "natural" (or "neutral") for the emotion, the DEVC model's
  // "corpus_speaker" metadata for the speaker.
  std::string source_emotion;
  std::string source_speaker;
  std::filesystem::path scratch_dir;  // TTS output; defaults to the temp dir
};

// Source speech: a text rendered by the TTS adapter, or an audio file.
struct SourceSpec {
  std::string text;
  std::filesystem::path audio;

  static SourceSpec Text(std::string t) { return {std::move(t), {}}; }
  static SourceSpec Audio(std::filesystem::path p) { return {{}, std::move(p)}; }
};

struct TraceEntry {
  std::string stage;
  double wall_ms = 0.0;
  int frames = 0;  // 0 for stages without a feature sequence
};

using Trace = std::vector<TraceEntry>;

nlohmann::json TraceToJson(const Trace& trace);
std::vector<std::string> StageNames(const Trace& trace);

class MassPipeline {
 public:
  // Loads both models named in the config.
  MassPipeline(const PipelineConfig& cfg, TtsSource tts = {});
  MassPipeline(core::ConversionModel devc, core::ConversionModel dsvc, const PipelineConfig& cfg,
               TtsSource tts = {});

  // Every stage failure is rethrown as a StageError naming the stage.
  features::Waveform Run(const SourceSpec& source, Trace* trace = nullptr) const;

  const std::string& source_emotion() const { return source_emotion_; }
  const std::string& source_speaker() const { return source_speaker_; }

 private:
  void ResolveLabels();

  PipelineConfig cfg_;
  TtsSource tts_;
  Analyzer analyzer_;
  EmotionalConverter devc_;
  SpeakerConverter dsvc_;
  std::string source_emotion_;
  std::string source_speaker_;
};

features::Waveform MassSynthesize(const SourceSpec& source, const PipelineConfig& cfg,
                                  const TtsSource& tts = {}, Trace* trace = nullptr);

}  // namespace mass::pipeline
