#pragma once

#include <stdexcept>
#include <string>

namespace pstk {

// Base for every error thrown by the library. Subtypes exist so callers can
// distinguish bad input files (exit code 3) from numerical failures (4) from
// caller bugs (2).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };

// audio_io
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptFile : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

// synth
struct InvalidSpec : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct NyquistViolation : InvalidArgument { using InvalidArgument::InvalidArgument; };

// dsp / features
struct BufferTooShort : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct FrameTooShort : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct AlreadyWeighted : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct PhonOutOfRange : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct EmptyBand : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct TooFewPeaks : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct NonpositiveFrequency : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct OutOfRange : InvalidArgument { using InvalidArgument::InvalidArgument; };

// space
struct NonpositiveFlatness : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct NumericalFailure : Error { using Error::Error; };
struct DegenerateCloud : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct TooFewPoints : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct UnderDetermined : NumericalFailure { using NumericalFailure::NumericalFailure; };

// pipeline
struct GridOutOfRange : InvalidArgument { using InvalidArgument::InvalidArgument; };

}  // namespace pstk
