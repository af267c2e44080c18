#pragma once

#include <stdexcept>
#include <string>

namespace crossframe {

// Pipeline stage an error originated from. The CLI maps these to exit codes.
enum class Stage {
    usage = 1,
    ingest = 2,
    emd = 3,
    features = 4,
    cluster = 5,
    melspec = 6,
    cmsm = 7,
    fourier = 8,
};

const char* stage_name(Stage s);

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

namespace detail {
inline std::string tagged(const char* tag, const std::string& what) {
    return std::string(tag) + ": " + what;
}
}  // namespace detail

// Errors pinned to one stage.
#define CROSSFRAME_DEFINE_ERROR(Name, StageValue)                                 \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what)                                    \
            : Error(Stage::StageValue, detail::tagged(#Name, what)) {}            \
    }

CROSSFRAME_DEFINE_ERROR(MalformedContainer, ingest);
CROSSFRAME_DEFINE_ERROR(UnsupportedEncoding, ingest);
CROSSFRAME_DEFINE_ERROR(EmptyAudio, ingest);

CROSSFRAME_DEFINE_ERROR(NonFinite, emd);
CROSSFRAME_DEFINE_ERROR(EmptyDecomposition, emd);

CROSSFRAME_DEFINE_ERROR(KTooLarge, cluster);
CROSSFRAME_DEFINE_ERROR(EmptyInput, cluster);
CROSSFRAME_DEFINE_ERROR(TooFewImfs, cluster);

CROSSFRAME_DEFINE_ERROR(EmptyBand, cmsm);
CROSSFRAME_DEFINE_ERROR(EmptyScores, cmsm);

CROSSFRAME_DEFINE_ERROR(TooFewSamples, fourier);

#undef CROSSFRAME_DEFINE_ERROR

// Errors shared by several stages; constructed with the stage they fired in.
class TooShort : public Error {
public:
    TooShort(Stage stage, const std::string& what) : Error(stage, detail::tagged("TooShort", what)) {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(Stage stage, const std::string& what)
        : Error(stage, detail::tagged("LengthMismatch", what)) {}
};

// Configuration that violates a documented invariant.
class InvalidConfig : public Error {
public:
    InvalidConfig(Stage stage, const std::string& what)
        : Error(stage, detail::tagged("InvalidConfig", what)) {}
};

}  // namespace crossframe
