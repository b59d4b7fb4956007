#ifndef SUMDYN_ERRORS_HPP
#define SUMDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sumdyn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace sumdyn

#endif
