#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crossframe/cmsm.hpp"
#include "crossframe/emd.hpp"
#include "crossframe/melspec.hpp"

namespace crossframe {

struct PipelineConfig {
    EmdConfig emd;
    MelConfig mel;
    std::size_t kmeans_k = 3;
    std::uint64_t kmeans_seed = 42;
    std::size_t keyframes_m = 10;
    VoiceBand voice_band;
    GammaForm gamma_form = GammaForm::additive;
    double fps = 0.0;
    std::int64_t n_video_frames = 0;  // 0: derive ceil(duration * fps)
    std::filesystem::path output_dir;

    void validate() const;
};

// Single canonical config document; every field has a default, flags
// override fields, and the manifest echoes the resolved values.
PipelineConfig config_from_json_file(const std::filesystem::path& path);
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& cfg);

struct StageTiming {
    std::string stage;
    double millis = 0.0;
};

struct RunManifest {
    std::string input_path;
    std::string tool_version;
    PipelineConfig config;
    std::uint32_t sample_rate_hz = 0;
    std::size_t depth_used = 0;
    std::vector<std::size_t> cluster_assignments;
    std::vector<std::string> output_files;
    std::vector<StageTiming> timings;
    // FNV-1a over the deterministic manifest content; timings excluded.
    std::string reproducibility_hash;
};

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest);

// load_wav -> decompose -> per-IMF features -> kmeans -> cluster
// reconstruction -> mel spectrogram per subsequence -> gamma scores ->
// keyframe selection. Writes features.csv, mel_<c>.melm, keyframes.json and
// manifest.json into config.output_dir. Any stage error removes files
// already written for this run before rethrowing.
RunManifest run_pipeline(const PipelineConfig& config, const std::filesystem::path& wav_path);

}  // namespace crossframe
