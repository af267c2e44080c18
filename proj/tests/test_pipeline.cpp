#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <crossframe/errors.hpp>
#include <crossframe/melspec.hpp>
#include <crossframe/pipeline.hpp>

#include "support/test_support.hpp"

using namespace crossframe;
namespace ts = testsupport;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PipelineConfig fixture_config(const std::filesystem::path& out_dir) {
    PipelineConfig cfg;
    cfg.fps = 30.0;
    cfg.output_dir = out_dir;
    return cfg;
}

}  // namespace

TEST_CASE("config json round-trips and rejects typos") {
    PipelineConfig cfg;
    cfg.fps = 24.0;
    cfg.kmeans_seed = 99;
    cfg.mel.hop_len = 256;
    cfg.output_dir = "/tmp/somewhere";
    const std::string text = config_to_json(cfg);
    const PipelineConfig back = config_from_json(text);
    CHECK(back.fps == 24.0);
    CHECK(back.kmeans_seed == 99);
    CHECK(back.mel.hop_len == 256);
    CHECK(back.output_dir == "/tmp/somewhere");
    CHECK(back.emd.max_imfs == cfg.emd.max_imfs);

    CHECK_THROWS_AS(config_from_json("{\"kmeans_sed\": 3}"), InvalidConfig);
    CHECK_THROWS_AS(config_from_json("not json"), InvalidConfig);
    CHECK_THROWS_AS(config_from_json("{\"gamma_form\": \"weird\"}"), InvalidConfig);
}

TEST_CASE("pipeline runs end to end on the synthetic fixture") {
    const auto dir = ts::unique_temp_dir("pipeline");
    const auto wav = ts::write_fixture_wav(dir);
    const auto out = dir / "out";

    const RunManifest manifest = run_pipeline(fixture_config(out), wav);

    CHECK(manifest.depth_used >= 3);
    CHECK(manifest.sample_rate_hz == 8000);
    CHECK(manifest.cluster_assignments.size() == manifest.depth_used);

    // three clusters, one mel file each
    CHECK(std::filesystem::exists(out / "mel_0.melm"));
    CHECK(std::filesystem::exists(out / "mel_1.melm"));
    CHECK(std::filesystem::exists(out / "mel_2.melm"));
    CHECK(!std::filesystem::exists(out / "mel_3.melm"));

    // keyframes: <= 10 unique mutual frames inside [0, 90)
    const auto doc = nlohmann::json::parse(slurp(out / "keyframes.json"));
    CHECK(doc["n_video_frames"].get<int>() == 90);
    const auto& frames = doc["mutual"]["frames"];
    CHECK(frames.size() <= 10);
    std::set<std::int64_t> unique;
    for (const auto& f : frames) {
        const auto v = f.get<std::int64_t>();
        CHECK(v >= 0);
        CHECK(v < 90);
        unique.insert(v);
    }
    CHECK(unique.size() == frames.size());
    CHECK(doc["clusters"].size() == 3);

    // features.csv parses back to 14 columns per mode
    std::ifstream csv(out / "features.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.substr(0, 9) == "imf_index");
    std::size_t rows = 0, commas = 0;
    for (char c : header) {
        commas += (c == ',');
    }
    CHECK(commas == 14);
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty()) {
            ++rows;
        }
    }
    CHECK(rows == manifest.depth_used);

    // every melm round-trips through the reader
    const MelmData mel0 = read_melm(out / "mel_0.melm");
    CHECK(mel0.rows == 26);
    CHECK(mel0.cols > 0);

    // manifest content
    const auto mdoc = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(mdoc["tool_version"].get<std::string>() == "0.1.0");
    CHECK(mdoc["depth_used"].get<std::size_t>() == manifest.depth_used);
    CHECK(mdoc["config"]["fps"].get<double>() == 30.0);
    CHECK(mdoc["reproducibility_hash"].get<std::string>().size() == 16);
}

TEST_CASE("pipeline reruns are byte-identical") {
    const auto dir = ts::unique_temp_dir("pipeline_repro");
    const auto wav = ts::write_fixture_wav(dir);

    run_pipeline(fixture_config(dir / "a"), wav);
    run_pipeline(fixture_config(dir / "b"), wav);

    for (const char* name : {"keyframes.json", "features.csv", "mel_0.melm", "mel_1.melm",
                             "mel_2.melm"}) {
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
    // manifests agree except the timing block and the destination directory
    auto a = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    auto b = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
    CHECK(a["reproducibility_hash"] == b["reproducibility_hash"]);
    for (auto* doc : {&a, &b}) {
        doc->erase("timings_ms");
        (*doc)["config"].erase("output_dir");
    }
    CHECK(a == b);
}

TEST_CASE("zero signal surfaces EmptyDecomposition from the emd stage") {
    const auto dir = ts::unique_temp_dir("pipeline_zero");
    const std::vector<std::int16_t> silence(8000, 0);
    ts::write_file(dir / "zero.wav", ts::wav_pcm16(8000, silence, 1));

    try {
        run_pipeline(fixture_config(dir / "out"), dir / "zero.wav");
        FAIL("expected EmptyDecomposition");
    } catch (const EmptyDecomposition& e) {
        CHECK(e.stage() == Stage::emd);
        CHECK(std::string(stage_name(e.stage())) == "emd");
    }
}

TEST_CASE("stage errors remove partial outputs") {
    const auto dir = ts::unique_temp_dir("pipeline_cleanup");
    const auto wav = ts::write_fixture_wav(dir);
    PipelineConfig cfg = fixture_config(dir / "out");
    cfg.kmeans_k = 99;  // far more clusters than modes

    CHECK_THROWS_AS(run_pipeline(cfg, wav), KTooLarge);
    CHECK(!std::filesystem::exists(dir / "out" / "features.csv"));
    CHECK(!std::filesystem::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("config validation rejects a missing fps") {
    PipelineConfig cfg;
    cfg.output_dir = "/tmp/x";
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}
