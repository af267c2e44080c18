#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "crossframe/melspec.hpp"

namespace crossframe {

struct VideoTimeline {
    double fps = 0.0;
    std::int64_t n_video_frames = 0;

    void validate() const;
};

// The per-frame salience statistic: variance of the mel column times the
// sum of a voice-band mean ratio and a full-band peak ratio.
enum class GammaForm {
    additive,        // v * (alpha + beta)
    multiplicative,  // v^alpha * v^beta, kept for experimentation
};

struct FrameScore {
    std::int64_t audio_col = 0;
    std::int64_t video_frame = -1;  // filled by assign_video_frames
    double v = 0.0;                 // population variance of the column
    double alpha = 0.0;             // band mean / column sum
    double beta = 0.0;              // column max / column sum
    double gamma = 0.0;
};

struct VoiceBand {
    double lo_hz = 64.0;
    double hi_hz = 1100.0;
};

// Scores every column of the mel matrix. Columns whose sum is zero get
// alpha = beta = gamma = 0. Throws EmptyBand when no filter center lies in
// the band.
std::vector<FrameScore> gamma_scores(const MelMatrix& mel, VoiceBand band = {},
                                     GammaForm form = GammaForm::additive);

// floor(audio_col * hop / sample_rate * fps), clamped into the timeline.
std::int64_t map_audio_to_video(std::int64_t audio_col, std::size_t hop_len,
                                std::uint32_t sample_rate_hz, const VideoTimeline& timeline);

// Fills FrameScore::video_frame for every score.
void assign_video_frames(std::vector<FrameScore>& scores, std::size_t hop_len,
                         std::uint32_t sample_rate_hz, const VideoTimeline& timeline);

struct ClusterKeyframes {
    std::vector<std::int64_t> frames;  // descending by gamma, ties to lower index
    std::vector<double> gammas;
};

struct KeyframeManifest {
    std::vector<ClusterKeyframes> per_subsequence;
    ClusterKeyframes mutual;  // de-duplicated union, re-ranked by best gamma
};

// Per subsequence: collapse scores to one entry per video frame (max gamma),
// rank by gamma descending (ties to the lower frame index) and keep the top
// m. Mutual set: union of the per-subsequence selections keyed by each
// frame's best gamma across subsequences, re-ranked the same way, truncated
// to m. Scores must have video frames assigned. Throws EmptyScores.
KeyframeManifest select_keyframes(const std::vector<std::vector<FrameScore>>& scores_per_subsequence,
                                  std::size_t m, const VideoTimeline& timeline);

// keyframes.json with gammas at 17 significant digits.
void write_keyframes_json(const std::filesystem::path& path, const KeyframeManifest& manifest,
                          const VideoTimeline& timeline);

}  // namespace crossframe
