#ifndef CPMC_ERRORS_HPP
#define CPMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cpmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid hyperparameters, options or engine/model combinations.
struct ConfigError : Error {
    using Error::Error;
};

// Unusable observations: NaN/inf values, model/data mismatch, malformed input rows.
struct DataError : Error {
    using Error::Error;
};

// Inconsistent indices or changepoint configurations.
struct StateError : Error {
    using Error::Error;
};

}  // namespace cpmc

#endif
