#pragma once

#include <stdexcept>
#include <string>

namespace mfshe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical integral failed to reach its internal tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

// Pointwise evaluation requested at a non-integrable singular point.
struct SingularInputError : Error {
    using Error::Error;
};

// Circulant embedding spectrum stayed negative after maximum padding.
struct EmbeddingError : Error {
    using Error::Error;
};

// Localization boxes do not fit the torus, or points fall outside a shell.
struct GeometryError : Error {
    using Error::Error;
};

// Simulated field exceeded the overflow guard (dt too large or extreme draw).
struct BlowupError : Error {
    using Error::Error;
};

// Dimension fit asked for with fewer than the minimum usable shells.
struct InsufficientShellsError : Error {
    using Error::Error;
};

// Tail fit cannot resolve the requested range (too few exceedances).
struct CensoringError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace mfshe
