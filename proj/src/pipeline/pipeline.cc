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

#include "mass/pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>

#include "mass/features/f0.h"
#include "mass/features/vocoder.h"

namespace fs = std::filesystem;

namespace mass::pipeline {
namespace {

void ReplaceAll(std::string& s, const std::string& from, const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::shared_ptr<const core::ConversionModel> Share(core::ConversionModel m) {
  m.Validate();
  return std::make_shared<const core::ConversionModel>(std::move(m));
}

}  // namespace

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

TtsSource TtsSource::Command(std::string command_template) {
  if (command_template.find("{out}") == std::string::npos) {
    throw ParameterError("TTS command template must contain {out}");
  }
  TtsSource t;
  t.kind_ = Kind::kExternalCommand;
  t.command_ = std::move(command_template);
  return t;
}

TtsSource TtsSource::Files(std::map<std::string, fs::path> table) {
  TtsSource t;
  t.kind_ = Kind::kFilePassthrough;
  t.table_ = std::move(table);
  return t;
}

features::Waveform TtsSource::Render(const std::string& text, const fs::path& scratch_dir) const {
  if (kind_ == Kind::kFilePassthrough) {
    const auto it = table_.find(text);
    if (it == table_.end()) throw InputError("no recording for text \"" + text + "\"");
    return features::ReadWav(it->second);
  }
  fs::create_directories(scratch_dir);
  const fs::path out = scratch_dir / "tts_output.wav";
  fs::remove(out);
  std::string cmd = command_;
  ReplaceAll(cmd, "{out}", ShellQuote(out.string()));
  ReplaceAll(cmd, "{text}", ShellQuote(text));
  const int status = std::system(cmd.c_str());
  if (status != 0) throw IoError("TTS command exited with status " + std::to_string(status));
  if (!fs::exists(out)) throw IoError("TTS command produced no audio at " + out.string());
  return features::ReadWav(out);
}

features::AcousticFeatures ConvertUtterance(const core::ConversionModel& model,
                                            const features::AcousticFeatures& feats,
                                            const core::AttributeLabel& target,
                                            const core::AttributeLabel& source) {
  feats.Validate();
  const int k = model.config.num_classes;
  if (target.index() >= k || source.index() >= k) {
    throw ParameterError("attribute label outside the model's " + std::to_string(k) + " classes");
  }
  if (static_cast<int>(model.f0_stats.size()) != k) {
    throw ParameterError("model lacks per-attribute F0 statistics");
  }
  features::AcousticFeatures out = feats;
  out.mcc = core::GeneratorForward(model, feats.mcc, target);
  out.f0 = features::ConvertF0(feats.f0, model.f0_stats[static_cast<size_t>(source.index())],
                               model.f0_stats[static_cast<size_t>(target.index())]);
  return out;
}

SourceFeatures Analyzer::Analyze(const features::Waveform& wave) const {
  return SourceFeatures(features::Analyze(wave, cfg_));
}

EmotionalConverter::EmotionalConverter(std::shared_ptr<const core::ConversionModel> model)
    : model_(std::move(model)) {}

EmotionalFeatures EmotionalConverter::Convert(const SourceFeatures& in, const std::string& emotion,
                                              const std::string& source_emotion) const {
  return EmotionalFeatures(ConvertUtterance(*model_, in.features(), model_->Label(emotion),
                                            model_->Label(source_emotion)));
}

SpeakerConverter::SpeakerConverter(std::shared_ptr<const core::ConversionModel> model)
    : model_(std::move(model)) {}

SpeakerFeatures SpeakerConverter::Convert(const EmotionalFeatures& in, const std::string& speaker,
                                          const std::string& source_speaker) const {
  return SpeakerFeatures(ConvertUtterance(*model_, in.features(), model_->Label(speaker),
                                          model_->Label(source_speaker)));
}

features::Waveform SynthesizeOutput(const SpeakerFeatures& feats, const features::AnalysisConfig& cfg) {
  return features::Synthesize(feats.features(), cfg);
}

nlohmann::json TraceToJson(const Trace& trace) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : trace) j.push_back({{"stage", e.stage}, {"wall_ms", e.wall_ms}, {"frames", e.frames}});
  return j;
}

std::vector<std::string> StageNames(const Trace& trace) {
  std::vector<std::string> names;
  for (const auto& e : trace) names.push_back(e.stage);
  return names;
}

MassPipeline::MassPipeline(const PipelineConfig& cfg, TtsSource tts)
    : MassPipeline(core::LoadModel(cfg.devc_model), core::LoadModel(cfg.dsvc_model), cfg,
                   std::move(tts)) {}

MassPipeline::MassPipeline(core::ConversionModel devc, core::ConversionModel dsvc,
                           const PipelineConfig& cfg, TtsSource tts)
    : cfg_(cfg),
      tts_(std::move(tts)),
      analyzer_(cfg.analysis),
      devc_(Share(std::move(devc))),
      dsvc_(Share(std::move(dsvc))) {
  cfg_.analysis.Validate();
  ResolveLabels();
}

void MassPipeline::ResolveLabels() {
  const auto& emo = devc_.model();
  source_emotion_ = cfg_.source_emotion;
  if (source_emotion_.empty()) {
    for (const char* name : {"natural", "neutral"}) {
      if (std::find(emo.attribute_names.begin(), emo.attribute_names.end(), name) !=
          emo.attribute_names.end()) {
        source_emotion_ = name;
        break;
      }
    }
    if (source_emotion_.empty()) {
      throw ParameterError("emotional model has no \"natural\" or \"neutral\" class; set source_emotion");
    }
  }
  source_speaker_ = cfg_.source_speaker;
  if (source_speaker_.empty()) {
    const auto it = emo.metadata.find("corpus_speaker");
    if (it == emo.metadata.end()) {
      throw ParameterError("emotional model records no corpus_speaker; set source_speaker");
    }
    source_speaker_ = it->second;
  }
  // Every label must resolve before anything runs.
  emo.AttributeIndex(cfg_.emotion);
  emo.AttributeIndex(source_emotion_);
  dsvc_.model().AttributeIndex(cfg_.speaker);
  dsvc_.model().AttributeIndex(source_speaker_);
}

features::Waveform MassPipeline::Run(const SourceSpec& source, Trace* trace) const {
  Trace local;
  Trace& tr = trace ? *trace : local;
  tr.clear();

  // Runs one stage, timing it and attaching the stage name to failures.
  auto stage = [&tr](const std::string& name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto result = fn();
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      int frames = 0;
      if constexpr (!std::is_same_v<decltype(result), features::Waveform>) {
        frames = result.features().frames();
      }
      tr.push_back({name, ms, frames});
      return result;
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  };

  const bool from_text = source.audio.empty();
  if (from_text && source.text.empty()) throw StageError("file", "no source text or audio given");
  const features::Waveform wave = stage(from_text ? "tts" : "file", [&] {
    if (!from_text) return features::ReadWav(source.audio, cfg_.analysis.sample_rate);
    const fs::path scratch = cfg_.scratch_dir.empty() ? fs::temp_directory_path() / "mass_tts" : cfg_.scratch_dir;
    return tts_.Render(source.text, scratch);
  });
  const SourceFeatures analyzed = stage("analyze", [&] { return analyzer_.Analyze(wave); });
  const EmotionalFeatures emotional =
      stage("devc", [&] { return devc_.Convert(analyzed, cfg_.emotion, source_emotion_); });
  const SpeakerFeatures spoken =
      stage("dsvc", [&] { return dsvc_.Convert(emotional, cfg_.speaker, source_speaker_); });
  return stage("synthesize", [&] { return SynthesizeOutput(spoken, cfg_.analysis); });
}

features::Waveform MassSynthesize(const SourceSpec& source, const PipelineConfig& cfg,
                                  const TtsSource& tts, Trace* trace) {
  std::unique_ptr<MassPipeline> pipeline;
  try {
    pipeline = std::make_unique<MassPipeline>(cfg, tts);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("load", e.what());
  }
  return pipeline->Run(source, trace);
}

}  // namespace mass::pipeline
