#include "crossframe/audio.hpp"

#include <cstring>
#include <fstream>

#include "crossframe/errors.hpp"

namespace crossframe {

namespace {

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int16_t read_i16(const unsigned char* p) {
    return static_cast<std::int16_t>(read_u16(p));
}

}  // namespace

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::usage: return "usage";
        case Stage::ingest: return "ingest";
        case Stage::emd: return "emd";
        case Stage::features: return "features";
        case Stage::cluster: return "cluster";
        case Stage::melspec: return "melspec";
        case Stage::cmsm: return "cmsm";
        case Stage::fourier: return "fourier";
    }
    return "unknown";
}

AudioSequence load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MalformedContainer("cannot open " + path.string());
    }
    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()};

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw MalformedContainer("not a RIFF/WAVE file: " + path.string());
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        std::uint32_t chunk_len = read_u32(hdr + 4);
        pos += 8;
        if (pos + chunk_len > bytes.size()) {
            throw MalformedContainer("truncated chunk in " + path.string());
        }
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16) {
                throw MalformedContainer("fmt chunk too small");
            }
            format = read_u16(bytes.data() + pos);
            channels = read_u16(bytes.data() + pos + 2);
            sample_rate = read_u32(bytes.data() + pos + 4);
            bits = read_u16(bytes.data() + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.data() + pos;
            data_len = chunk_len;
        }
        pos += chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) {
        throw MalformedContainer("missing fmt or data chunk in " + path.string());
    }
    if (format != 1 || bits != 16) {
        throw UnsupportedEncoding("only PCM 16-bit is supported (format=" +
                                  std::to_string(format) + ", bits=" + std::to_string(bits) + ")");
    }
    if (channels != 1 && channels != 2) {
        throw UnsupportedEncoding("unsupported channel count " + std::to_string(channels));
    }
    if (sample_rate == 0) {
        throw MalformedContainer("sample rate is zero");
    }

    const std::size_t bytes_per_frame = 2u * channels;
    const std::size_t n_frames = data_len / bytes_per_frame;
    if (n_frames == 0) {
        throw EmptyAudio("no samples in " + path.string());
    }

    AudioSequence out;
    out.sample_rate_hz = sample_rate;
    out.samples.resize(n_frames);
    if (channels == 1) {
        for (std::size_t i = 0; i < n_frames; ++i) {
            out.samples[i] = read_i16(data + 2 * i) / 32768.0;
        }
    } else {
        for (std::size_t i = 0; i < n_frames; ++i) {
            const double l = read_i16(data + 4 * i);
            const double r = read_i16(data + 4 * i + 2);
            out.samples[i] = ((l + r) / 2.0) / 32768.0;
        }
    }
    return out;
}

}  // namespace crossframe
