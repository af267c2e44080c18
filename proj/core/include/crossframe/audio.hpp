#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace crossframe {

// Mono sample vector, amplitudes in [-1, 1].
struct AudioSequence {
    std::vector<double> samples;
    std::uint32_t sample_rate_hz = 0;

    double duration_seconds() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

// Reads a RIFF/WAVE file containing 16-bit PCM, mono or stereo.
// 16-bit values are scaled by 1/32768; stereo is downmixed by per-sample
// channel average before scaling. Chunks other than fmt/data are skipped.
//
// Throws MalformedContainer, UnsupportedEncoding, EmptyAudio.
AudioSequence load_wav(const std::filesystem::path& path);

}  // namespace crossframe
