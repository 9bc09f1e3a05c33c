#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symi {

  // Base class for every error raised by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  class ParseError : public Error {
   public:
    ParseError(std::string const& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

    std::size_t position() const noexcept {
      return pos_;
    }

   private:
    std::size_t pos_;
  };

  // Raised when a guarded computation runs past its time budget.  The
  // message carries enough state for the caller to resume.
  class BudgetExceeded : public Error {
   public:
    using Error::Error;
  };

  // Raised when parameters are outside the desk-scale guards.
  class GuardError : public Error {
   public:
    using Error::Error;
  };

}  // namespace symi
