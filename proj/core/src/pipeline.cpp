#include "crossframe/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "crossframe/cluster.hpp"
#include "crossframe/errors.hpp"
#include "crossframe/features.hpp"
#include "crossframe/version.hpp"

namespace crossframe {

namespace {

using nlohmann::json;

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void check_known_keys(const json& obj, std::initializer_list<const char*> known,
                      const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw InvalidConfig(Stage::usage, "unknown key \"" + key + "\" in " + where);
        }
    }
}

}  // namespace

void PipelineConfig::validate() const {
    emd.validate();
    mel.validate();
    if (kmeans_k < 1) {
        throw InvalidConfig(Stage::cluster, "kmeans_k must be >= 1");
    }
    if (keyframes_m < 1) {
        throw InvalidConfig(Stage::cmsm, "keyframes_m must be >= 1");
    }
    if (!(voice_band.lo_hz >= 0.0) || !(voice_band.lo_hz < voice_band.hi_hz)) {
        throw InvalidConfig(Stage::cmsm, "voice band must satisfy 0 <= lo < hi");
    }
    if (!(fps > 0.0)) {
        throw InvalidConfig(Stage::cmsm, "fps must be positive");
    }
}

PipelineConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(Stage::usage, std::string("config is not valid JSON: ") + e.what());
    }
    check_known_keys(doc,
                     {"emd", "mel", "kmeans_k", "kmeans_seed", "keyframes_m", "voice_band_hz",
                      "gamma_form", "fps", "n_video_frames", "output_dir"},
                     "config");

    PipelineConfig cfg;
    if (doc.contains("emd")) {
        const json& e = doc["emd"];
        check_known_keys(e, {"sift_stop_threshold", "max_imfs", "max_sift_iterations"}, "emd");
        cfg.emd.sift_stop_threshold = e.value("sift_stop_threshold", cfg.emd.sift_stop_threshold);
        cfg.emd.max_imfs = e.value("max_imfs", cfg.emd.max_imfs);
        cfg.emd.max_sift_iterations = e.value("max_sift_iterations", cfg.emd.max_sift_iterations);
    }
    if (doc.contains("mel")) {
        const json& m = doc["mel"];
        check_known_keys(
            m, {"sample_rate_hz", "frame_len", "hop_len", "n_mel_filters", "fmin_hz", "fmax_hz"},
            "mel");
        cfg.mel.sample_rate_hz = m.value("sample_rate_hz", cfg.mel.sample_rate_hz);
        cfg.mel.frame_len = m.value("frame_len", cfg.mel.frame_len);
        cfg.mel.hop_len = m.value("hop_len", cfg.mel.hop_len);
        cfg.mel.n_mel_filters = m.value("n_mel_filters", cfg.mel.n_mel_filters);
        cfg.mel.fmin_hz = m.value("fmin_hz", cfg.mel.fmin_hz);
        cfg.mel.fmax_hz = m.value("fmax_hz", cfg.mel.fmax_hz);
    }
    cfg.kmeans_k = doc.value("kmeans_k", cfg.kmeans_k);
    cfg.kmeans_seed = doc.value("kmeans_seed", cfg.kmeans_seed);
    cfg.keyframes_m = doc.value("keyframes_m", cfg.keyframes_m);
    if (doc.contains("voice_band_hz")) {
        const json& b = doc["voice_band_hz"];
        if (!b.is_array() || b.size() != 2) {
            throw InvalidConfig(Stage::usage, "voice_band_hz must be [lo, hi]");
        }
        cfg.voice_band.lo_hz = b[0].get<double>();
        cfg.voice_band.hi_hz = b[1].get<double>();
    }
    if (doc.contains("gamma_form")) {
        const std::string form = doc["gamma_form"].get<std::string>();
        if (form == "additive") {
            cfg.gamma_form = GammaForm::additive;
        } else if (form == "multiplicative") {
            cfg.gamma_form = GammaForm::multiplicative;
        } else {
            throw InvalidConfig(Stage::usage, "gamma_form must be additive or multiplicative");
        }
    }
    cfg.fps = doc.value("fps", cfg.fps);
    cfg.n_video_frames = doc.value("n_video_frames", cfg.n_video_frames);
    if (doc.contains("output_dir")) {
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    return cfg;
}

PipelineConfig config_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig(Stage::usage, "cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string config_to_json(const PipelineConfig& cfg) {
    json doc;
    doc["emd"] = {{"sift_stop_threshold", cfg.emd.sift_stop_threshold},
                  {"max_imfs", cfg.emd.max_imfs},
                  {"max_sift_iterations", cfg.emd.max_sift_iterations}};
    doc["mel"] = {{"sample_rate_hz", cfg.mel.sample_rate_hz},
                  {"frame_len", cfg.mel.frame_len},
                  {"hop_len", cfg.mel.hop_len},
                  {"n_mel_filters", cfg.mel.n_mel_filters},
                  {"fmin_hz", cfg.mel.fmin_hz},
                  {"fmax_hz", cfg.mel.fmax_hz}};
    doc["kmeans_k"] = cfg.kmeans_k;
    doc["kmeans_seed"] = cfg.kmeans_seed;
    doc["keyframes_m"] = cfg.keyframes_m;
    doc["voice_band_hz"] = {cfg.voice_band.lo_hz, cfg.voice_band.hi_hz};
    doc["gamma_form"] = cfg.gamma_form == GammaForm::additive ? "additive" : "multiplicative";
    doc["fps"] = cfg.fps;
    doc["n_video_frames"] = cfg.n_video_frames;
    doc["output_dir"] = cfg.output_dir.string();
    return doc.dump(2);
}

namespace {

class StageTimer {
public:
    explicit StageTimer(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const std::string& stage, F&& fn) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, start);
        } else {
            auto result = fn();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        const auto end = std::chrono::steady_clock::now();
        sink_.push_back({stage, std::chrono::duration<double, std::milli>(end - start).count()});
    }

    std::vector<StageTiming>& sink_;
};

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    return std::string(buf, 16);
}

json manifest_core_json(const RunManifest& m) {
    json doc;
    doc["input_path"] = m.input_path;
    doc["tool_version"] = m.tool_version;
    doc["config"] = json::parse(config_to_json(m.config));
    doc["sample_rate_hz"] = m.sample_rate_hz;
    doc["depth_used"] = m.depth_used;
    doc["cluster_assignments"] = m.cluster_assignments;
    doc["output_files"] = m.output_files;
    return doc;
}

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<ImfFeatureVector>& features) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Stage::features, "cannot write " + path.string());
    }
    out << "imf_index";
    for (const auto& name : feature_names()) {
        out << "," << name;
    }
    out << "\n";
    for (std::size_t i = 0; i < features.size(); ++i) {
        out << i;
        for (double v : features[i].values) {
            out << "," << shortest(v);
        }
        out << "\n";
    }
}

}  // namespace

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest) {
    json doc = manifest_core_json(manifest);
    doc["reproducibility_hash"] = manifest.reproducibility_hash;
    json timings = json::array();
    for (const auto& t : manifest.timings) {
        timings.push_back({{"stage", t.stage}, {"millis", t.millis}});
    }
    doc["timings_ms"] = timings;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Stage::cmsm, "cannot write " + path.string());
    }
    out << doc.dump(2) << "\n";
}

RunManifest run_pipeline(const PipelineConfig& config, const std::filesystem::path& wav_path) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    RunManifest manifest;
    manifest.input_path = wav_path.string();
    manifest.tool_version = kVersion;
    StageTimer timer(manifest.timings);

    std::vector<std::filesystem::path> written;
    auto reserve_output = [&](const std::string& name) {
        const auto path = config.output_dir / name;
        written.push_back(path);
        manifest.output_files.push_back(name);
        return path;
    };

    try {
        const AudioSequence audio = timer.run("ingest", [&] { return load_wav(wav_path); });

        PipelineConfig resolved = config;
        resolved.mel.sample_rate_hz = audio.sample_rate_hz;
        if (resolved.n_video_frames < 1) {
            resolved.n_video_frames =
                static_cast<std::int64_t>(std::ceil(audio.duration_seconds() * resolved.fps));
            resolved.n_video_frames = std::max<std::int64_t>(resolved.n_video_frames, 1);
        }
        manifest.config = resolved;
        manifest.sample_rate_hz = audio.sample_rate_hz;
        const VideoTimeline timeline{resolved.fps, resolved.n_video_frames};

        const ImfSet imfs = timer.run("emd", [&] {
            ImfSet set = decompose(audio, resolved.emd);
            if (set.depth() == 0) {
                throw EmptyDecomposition("no intrinsic modes found in " + wav_path.string());
            }
            return set;
        });
        manifest.depth_used = imfs.depth();

        const auto features = timer.run("features", [&] {
            std::vector<ImfFeatureVector> rows;
            rows.reserve(imfs.depth());
            for (const auto& imf : imfs.imfs) {
                rows.push_back(extract_imf_features(imf, audio.sample_rate_hz,
                                                    resolved.mel.frame_len,
                                                    resolved.mel.hop_len));
            }
            write_features_csv(reserve_output("features.csv"), rows);
            return rows;
        });

        const auto subsequences = timer.run("cluster", [&] {
            const ClusterResult clusters = kmeans(features, resolved.kmeans_k,
                                                  resolved.kmeans_seed);
            manifest.cluster_assignments = clusters.assignments;
            return reconstruct_clusters(imfs, clusters);
        });

        const auto mels = timer.run("melspec", [&] {
            std::vector<MelMatrix> out;
            out.reserve(subsequences.size());
            for (std::size_t c = 0; c < subsequences.size(); ++c) {
                out.push_back(mel_spectrogram(subsequences[c], resolved.mel));
                write_melm(reserve_output("mel_" + std::to_string(c) + ".melm"), out.back());
            }
            return out;
        });

        timer.run("cmsm", [&] {
            std::vector<std::vector<FrameScore>> all_scores;
            all_scores.reserve(mels.size());
            for (const MelMatrix& mel : mels) {
                auto scores = gamma_scores(mel, resolved.voice_band, resolved.gamma_form);
                assign_video_frames(scores, resolved.mel.hop_len, audio.sample_rate_hz, timeline);
                all_scores.push_back(std::move(scores));
            }
            const KeyframeManifest keyframes =
                select_keyframes(all_scores, resolved.keyframes_m, timeline);
            write_keyframes_json(reserve_output("keyframes.json"), keyframes, timeline);
        });

        // where the run was written does not affect what was computed
        json core = manifest_core_json(manifest);
        core["config"].erase("output_dir");
        manifest.reproducibility_hash = hash_hex(fnv1a(core.dump()));
        write_manifest_json(config.output_dir / "manifest.json", manifest);
        manifest.output_files.push_back("manifest.json");
    } catch (...) {
        for (const auto& path : written) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        throw;
    }
    return manifest;
}

}  // namespace crossframe
