#pragma once

#include <stdexcept>
#include <string>

namespace fecim {

/// Base for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter, geometry or config file content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Value outside the range of the requested bit encoding.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Weight matrix does not fit the macro geometry.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// ADC input that cannot be converted (non-finite voltage).
class ConversionError : public Error {
 public:
  using Error::Error;
};

}  // namespace fecim
