#pragma once

#include <stdexcept>
#include <string>

namespace qdual {

// Base class for everything this library throws on purpose, so callers can
// distinguish our failures from generic std exceptions at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- linear algebra ---
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct BadIndex : Error { using Error::Error; };

// --- series engine ---
struct GridTooCoarse : Error { using Error::Error; };
struct DegeneracyCrossing : Error { using Error::Error; };

// --- model parameter domain ---
struct ZeroDetuning : Error { using Error::Error; };
struct ZeroCoupling : Error { using Error::Error; };

// --- Bessel / operator identity ---
struct OrderTooLarge : Error { using Error::Error; };
struct CutoffTooSmall : Error { using Error::Error; };

// --- WKBJ / ODE reference integration ---
struct TurningPoint : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };

// --- spectrum ---
struct BadLength : Error { using Error::Error; };
struct EmptySpectrum : Error { using Error::Error; };

// --- configuration ---
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct UnknownKey : Error { using Error::Error; };

// --- output ---
struct IoError : Error { using Error::Error; };

}  // namespace qdual
