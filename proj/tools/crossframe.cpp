#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <crossframe/cmsm.hpp>
#include <crossframe/emd.hpp>
#include <crossframe/errors.hpp>
#include <crossframe/fourier.hpp>
#include <crossframe/melspec.hpp>
#include <crossframe/pipeline.hpp>
#include <crossframe/version.hpp>

#include "png_writer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct AnalyzeArgs {
    std::string input;
    std::string out_dir;
    std::string config_path;
    double fps = 0.0;
    std::int64_t video_frames = 0;
    bool fps_set = false;
};

int run_analyze(const AnalyzeArgs& args) {
    crossframe::PipelineConfig cfg;
    if (!args.config_path.empty()) {
        cfg = crossframe::config_from_json_file(args.config_path);
    }
    if (args.fps_set) {
        cfg.fps = args.fps;
    }
    if (args.video_frames > 0) {
        cfg.n_video_frames = args.video_frames;
    }
    cfg.output_dir = args.out_dir;

    if (const char* seed_env = std::getenv("CROSSFRAME_SEED");
        seed_env != nullptr && *seed_env != '\0') {
        std::uint64_t seed = 0;
        const std::string text(seed_env);
        const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
            std::cerr << "error: CROSSFRAME_SEED is not an unsigned integer: " << text << "\n";
            return 1;
        }
        cfg.kmeans_seed = seed;
    }
    if (!(cfg.fps > 0.0)) {
        std::cerr << "error: --fps (or a config with fps) is required and must be positive\n";
        return 1;
    }

    const crossframe::RunManifest manifest = crossframe::run_pipeline(cfg, args.input);
    std::cout << "analyzed " << args.input << "\n"
              << "  modes: " << manifest.depth_used << ", clusters: " << manifest.config.kmeans_k
              << ", sample rate: " << manifest.sample_rate_hz << " Hz\n"
              << "  outputs in " << args.out_dir << ":";
    for (const auto& f : manifest.output_files) {
        std::cout << " " << f;
    }
    std::cout << "\n";
    return 0;
}

struct DecomposeArgs {
    std::string input;
    std::string out_dir;
    std::size_t max_imfs = 12;
};

int run_decompose(const DecomposeArgs& args) {
    const crossframe::AudioSequence audio = crossframe::load_wav(args.input);
    crossframe::EmdConfig cfg;
    cfg.max_imfs = args.max_imfs;
    const crossframe::ImfSet set = crossframe::decompose(audio, cfg);

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    for (std::size_t i = 0; i < set.depth(); ++i) {
        crossframe::write_melm(out / ("imf_" + std::to_string(i) + ".melm"), 1,
                               set.imfs[i].size(), set.imfs[i]);
    }
    crossframe::write_melm(out / "residual.melm", 1, set.residual.size(), set.residual);

    std::cout << "decomposed " << args.input << " into " << set.depth() << " modes + residual\n";

    if (args.max_imfs >= 3) {
        // similarity table over candidate depths, written like the runtime
        // depth study
        const crossframe::DepthSelection sel =
            crossframe::select_depth(audio, 2, args.max_imfs, 1e-4, cfg);
        std::ofstream csv(out / "cs_table.csv", std::ios::binary);
        csv << "depth,mean_pairwise_cosine_similarity\n";
        for (std::size_t i = 0; i < sel.depths.size(); ++i) {
            csv << sel.depths[i] << "," << shortest(sel.similarity[i]) << "\n";
        }
        std::cout << "selected depth: " << sel.selected << " (cs_table.csv written)\n";
    }
    return 0;
}

struct VerifyArgs {
    std::string harmonics_path;
};

int run_verify(const VerifyArgs& args) {
    crossframe::FourierSeriesSpec spec;
    std::size_t n_samples = 4096;
    double tol = 1e-6;
    if (args.harmonics_path.empty()) {
        spec.period = 1.0;
        spec.harmonics = {{1, 1.0, 0.3}, {3, 0.5, -1.1}, {7, 0.25, 2.0}};
    } else {
        std::ifstream in(args.harmonics_path);
        if (!in) {
            std::cerr << "error: cannot open " << args.harmonics_path << "\n";
            return 1;
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "error: bad harmonics JSON: " << e.what() << "\n";
            return 1;
        }
        spec.period = doc.value("period", 1.0);
        spec.dc = doc.value("dc", 0.0);
        n_samples = doc.value("n_samples", n_samples);
        tol = doc.value("tol", tol);
        for (const auto& h : doc.value("harmonics", json::array())) {
            spec.harmonics.push_back({h.at("n").get<std::size_t>(),
                                      h.at("amplitude").get<double>(),
                                      h.value("phase", 0.0)});
        }
    }

    const crossframe::AmplitudeReport report =
        crossframe::verify_amplitude_identity(spec, n_samples, tol);

    json doc;
    doc["pass"] = report.pass;
    doc["tolerance"] = report.tolerance;
    doc["max_error"] = report.max_error;
    doc["n_samples"] = n_samples;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json entry;
        entry["n"] = c.n;
        entry["declared"] = c.declared;
        entry["expected_magnitude"] = c.expected_magnitude;
        entry["measured_magnitude"] = c.measured_magnitude;
        entry["error"] = c.error;
        entry["pass"] = c.pass;
        if (c.declared) {
            entry["amplitude_db"] = c.amplitude_db;
        }
        checks.push_back(entry);
    }
    doc["checks"] = checks;
    std::cout << doc.dump(2) << "\n";
    return report.pass ? 0 : 8;
}

struct PlotArgs {
    std::string mel_path;
    std::string out_path;
};

int run_plot(const PlotArgs& args) {
    const fs::path out(args.out_path);
    if (out.extension() != ".csv" && out.extension() != ".png") {
        std::cerr << "error: --out must end in .png or .csv\n";
        return 1;
    }
    const crossframe::MelmData data = crossframe::read_melm(args.mel_path);

    if (out.extension() == ".csv") {
        std::ofstream csv(out, std::ios::binary);
        if (!csv) {
            std::cerr << "error: cannot write " << args.out_path << "\n";
            return 1;
        }
        for (std::size_t r = 0; r < data.rows; ++r) {
            for (std::size_t c = 0; c < data.cols; ++c) {
                csv << (c ? "," : "") << shortest(data.values[r * data.cols + c]);
            }
            csv << "\n";
        }
        return 0;
    }
    if (out.extension() == ".png") {
        // dB heat map, brightest = most power, low filters at the bottom
        double lo = crossframe::to_db(data.values.empty() ? 0.0 : data.values[0]);
        double hi = lo;
        for (double v : data.values) {
            const double db = crossframe::to_db(v);
            lo = std::min(lo, db);
            hi = std::max(hi, db);
        }
        const double range = hi > lo ? hi - lo : 1.0;
        std::vector<std::uint8_t> pixels(data.rows * data.cols, 0);
        for (std::size_t r = 0; r < data.rows; ++r) {
            for (std::size_t c = 0; c < data.cols; ++c) {
                const double db = crossframe::to_db(data.values[r * data.cols + c]);
                const double bright = (hi - db) / range;  // -20log10: more power, lower db
                pixels[(data.rows - 1 - r) * data.cols + c] =
                    static_cast<std::uint8_t>(255.0 * bright + 0.5);
            }
        }
        crossframe::tools::write_png_gray(out, data.cols, data.rows, pixels);
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossframe: audio decomposition, clustering, mel spectrograms and "
                 "cross-modal keyframe selection"};
    app.set_version_flag("--version", crossframe::kVersion);
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "run the full pipeline on a WAV file");
    analyze_cmd->add_option("--input", analyze.input, "input WAV (PCM16)")->required();
    analyze_cmd->add_option("--fps", analyze.fps, "video frame rate")
        ->each([&](const std::string&) { analyze.fps_set = true; });
    analyze_cmd->add_option("--video-frames", analyze.video_frames,
                            "video frame count (default: ceil(duration*fps))");
    analyze_cmd->add_option("--config", analyze.config_path, "pipeline config JSON");
    analyze_cmd->add_option("--out", analyze.out_dir, "output directory")->required();

    DecomposeArgs decompose;
    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "emit intrinsic modes and the depth similarity table");
    decompose_cmd->add_option("--input", decompose.input, "input WAV (PCM16)")->required();
    decompose_cmd->add_option("--max-imfs", decompose.max_imfs, "maximum modes to extract");
    decompose_cmd->add_option("--out", decompose.out_dir, "output directory")->required();

    VerifyArgs verify;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "check the Fourier half-amplitude identity numerically");
    verify_cmd->add_option("--harmonics", verify.harmonics_path,
                           "harmonic spec JSON (default: a built-in 3-harmonic spec)");

    PlotArgs plot;
    CLI::App* plot_cmd = app.add_subcommand("plot", "render a MELM matrix as PNG or CSV");
    plot_cmd->add_option("--mel", plot.mel_path, "input .melm file")->required();
    plot_cmd->add_option("--out", plot.out_path, "output .png or .csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze_cmd) {
            return run_analyze(analyze);
        }
        if (*decompose_cmd) {
            return run_decompose(decompose);
        }
        if (*verify_cmd) {
            return run_verify(verify);
        }
        if (*plot_cmd) {
            return run_plot(plot);
        }
    } catch (const crossframe::Error& e) {
        std::cerr << "error [" << crossframe::stage_name(e.stage()) << "]: " << e.what() << "\n";
        return static_cast<int>(e.stage());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
