#include "crossframe/cmsm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "crossframe/errors.hpp"

namespace crossframe {

void VideoTimeline::validate() const {
    if (!(fps > 0.0)) {
        throw InvalidConfig(Stage::cmsm, "fps must be positive");
    }
    if (n_video_frames < 1) {
        throw InvalidConfig(Stage::cmsm, "n_video_frames must be >= 1");
    }
}

std::vector<FrameScore> gamma_scores(const MelMatrix& mel, VoiceBand band, GammaForm form) {
    std::vector<std::size_t> band_rows;
    for (std::size_t r = 0; r < mel.filter_center_hz.size(); ++r) {
        if (mel.filter_center_hz[r] >= band.lo_hz && mel.filter_center_hz[r] <= band.hi_hz) {
            band_rows.push_back(r);
        }
    }
    if (band_rows.empty()) {
        throw EmptyBand("no mel filter center inside [" + std::to_string(band.lo_hz) + ", " +
                        std::to_string(band.hi_hz) + "] Hz");
    }

    std::vector<FrameScore> scores(mel.cols);
    for (std::size_t j = 0; j < mel.cols; ++j) {
        FrameScore& s = scores[j];
        s.audio_col = static_cast<std::int64_t>(j);

        double sum = 0.0, peak = 0.0;
        for (std::size_t r = 0; r < mel.rows; ++r) {
            const double v = mel.at(r, j);
            sum += v;
            peak = std::max(peak, v);
        }
        const double mean = sum / static_cast<double>(mel.rows);
        double var = 0.0;
        for (std::size_t r = 0; r < mel.rows; ++r) {
            const double d = mel.at(r, j) - mean;
            var += d * d;
        }
        s.v = var / static_cast<double>(mel.rows);

        if (sum == 0.0) {
            continue;  // silent column: alpha = beta = gamma = 0
        }
        double band_sum = 0.0;
        for (std::size_t r : band_rows) {
            band_sum += mel.at(r, j);
        }
        s.alpha = band_sum / static_cast<double>(band_rows.size()) / sum;
        s.beta = peak / sum;
        if (form == GammaForm::additive) {
            s.gamma = s.v * (s.alpha + s.beta);
        } else {
            s.gamma = s.v > 0.0 ? std::pow(s.v, s.alpha + s.beta) : 0.0;
        }
    }
    return scores;
}

std::int64_t map_audio_to_video(std::int64_t audio_col, std::size_t hop_len,
                                std::uint32_t sample_rate_hz, const VideoTimeline& timeline) {
    timeline.validate();
    const double seconds = static_cast<double>(audio_col) * static_cast<double>(hop_len) /
                           static_cast<double>(sample_rate_hz);
    const auto frame = static_cast<std::int64_t>(std::floor(seconds * timeline.fps));
    return std::clamp<std::int64_t>(frame, 0, timeline.n_video_frames - 1);
}

void assign_video_frames(std::vector<FrameScore>& scores, std::size_t hop_len,
                         std::uint32_t sample_rate_hz, const VideoTimeline& timeline) {
    for (FrameScore& s : scores) {
        s.video_frame = map_audio_to_video(s.audio_col, hop_len, sample_rate_hz, timeline);
    }
}

namespace {

ClusterKeyframes rank_and_truncate(const std::map<std::int64_t, double>& best_by_frame,
                                   std::size_t m) {
    std::vector<std::pair<std::int64_t, double>> entries(best_by_frame.begin(),
                                                         best_by_frame.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (entries.size() > m) {
        entries.resize(m);
    }
    ClusterKeyframes out;
    for (const auto& [frame, gamma] : entries) {
        out.frames.push_back(frame);
        out.gammas.push_back(gamma);
    }
    return out;
}

}  // namespace

KeyframeManifest select_keyframes(const std::vector<std::vector<FrameScore>>& scores_per_subsequence,
                                  std::size_t m, const VideoTimeline& timeline) {
    timeline.validate();
    if (m < 1) {
        throw InvalidConfig(Stage::cmsm, "keyframe count m must be >= 1");
    }
    if (scores_per_subsequence.empty()) {
        throw EmptyScores("no subsequences to select from");
    }

    KeyframeManifest manifest;
    std::map<std::int64_t, double> mutual_best;
    for (const auto& scores : scores_per_subsequence) {
        if (scores.empty()) {
            throw EmptyScores("a subsequence has no frame scores");
        }
        std::map<std::int64_t, double> best_by_frame;
        for (const FrameScore& s : scores) {
            if (s.video_frame < 0) {
                throw std::invalid_argument("FrameScore::video_frame not assigned");
            }
            const std::int64_t frame =
                std::clamp<std::int64_t>(s.video_frame, 0, timeline.n_video_frames - 1);
            auto [it, inserted] = best_by_frame.emplace(frame, s.gamma);
            if (!inserted) {
                it->second = std::max(it->second, s.gamma);
            }
        }
        ClusterKeyframes selected = rank_and_truncate(best_by_frame, m);
        for (std::size_t i = 0; i < selected.frames.size(); ++i) {
            auto [it, inserted] = mutual_best.emplace(selected.frames[i], selected.gammas[i]);
            if (!inserted) {
                it->second = std::max(it->second, selected.gammas[i]);
            }
        }
        manifest.per_subsequence.push_back(std::move(selected));
    }
    manifest.mutual = rank_and_truncate(mutual_best, m);
    return manifest;
}

namespace {

// 17 significant digits: enough to reproduce any double exactly.
std::string format_g17(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_cluster(std::ofstream& out, const ClusterKeyframes& c) {
    out << "\"frames\": [";
    for (std::size_t i = 0; i < c.frames.size(); ++i) {
        out << (i ? ", " : "") << c.frames[i];
    }
    out << "], \"gammas\": [";
    for (std::size_t i = 0; i < c.gammas.size(); ++i) {
        out << (i ? ", " : "") << format_g17(c.gammas[i]);
    }
    out << "]";
}

}  // namespace

void write_keyframes_json(const std::filesystem::path& path, const KeyframeManifest& manifest,
                          const VideoTimeline& timeline) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Stage::cmsm, "cannot write " + path.string());
    }
    out << "{\n";
    out << "  \"fps\": " << format_g17(timeline.fps) << ",\n";
    out << "  \"n_video_frames\": " << timeline.n_video_frames << ",\n";
    out << "  \"clusters\": [\n";
    for (std::size_t c = 0; c < manifest.per_subsequence.size(); ++c) {
        out << "    { \"cluster\": " << c << ", ";
        write_cluster(out, manifest.per_subsequence[c]);
        out << " }" << (c + 1 < manifest.per_subsequence.size() ? "," : "") << "\n";
    }
    out << "  ],\n";
    out << "  \"mutual\": { ";
    write_cluster(out, manifest.mutual);
    out << " }\n";
    out << "}\n";
}

}  // namespace crossframe
